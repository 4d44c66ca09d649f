#pragma once

#include "pdsplit/solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace pdsplit::harness {

/// One row of a convergence trace.
struct TraceRecord {
  std::uint64_t n = 0;
  double tau = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  double s_norm = 0.0;
  double t_norm = 0.0;
  double kt_res = 0.0;
  std::optional<double> dist_to_oracle;
  std::int64_t wall_ns = 0;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline constexpr std::string_view kTraceHeader =
    "n,tau,theta,delta,s_norm,t_norm,kt_res,dist_to_oracle,wall_ns";

/// Header line, then one line per record. Reals use 17 significant
/// digits; an absent dist_to_oracle is an empty field.
void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& records);

/// Inverse of write_trace_csv. Throws std::runtime_error on a bad header
/// or a malformed row.
std::vector<TraceRecord> read_trace_csv(std::istream& is);

TraceRecord make_record(const IterationEvent& ev, const std::optional<PDPoint>& oracle);

/// Observer appending one record per iteration to `sink`, then forwarding
/// to `next` when set.
Observer trace_observer(std::vector<TraceRecord>& sink, std::optional<PDPoint> oracle,
                        Observer next = {});

}  // namespace pdsplit::harness
