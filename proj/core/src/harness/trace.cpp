#include "pdsplit/harness/trace.hpp"

#include <charconv>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace pdsplit::harness {

namespace {

void put_real(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_real(std::string_view field, std::size_t line_no) {
  // strtod rather than from_chars: libstdc++ 11 lacks floating from_chars on some targets.
  const std::string text(field);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" + text +
                             "'");
  }
  return v;
}

template <typename Int>
Int parse_int(std::string_view field, std::size_t line_no) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad integer '" +
                             std::string(field) + "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& os, const std::vector<TraceRecord>& records) {
  os << kTraceHeader << '\n';
  for (const auto& r : records) {
    os << r.n << ',';
    put_real(os, r.tau);
    os << ',';
    put_real(os, r.theta);
    os << ',';
    put_real(os, r.delta);
    os << ',';
    put_real(os, r.s_norm);
    os << ',';
    put_real(os, r.t_norm);
    os << ',';
    put_real(os, r.kt_res);
    os << ',';
    if (r.dist_to_oracle) put_real(os, *r.dist_to_oracle);
    os << ',' << r.wall_ns << '\n';
  }
}

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTraceHeader) {
    throw std::runtime_error("trace: missing or unexpected header");
  }
  std::vector<TraceRecord> out;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 9) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected 9 fields");
    }
    TraceRecord r;
    r.n = parse_int<std::uint64_t>(f[0], line_no);
    r.tau = parse_real(f[1], line_no);
    r.theta = parse_real(f[2], line_no);
    r.delta = parse_real(f[3], line_no);
    r.s_norm = parse_real(f[4], line_no);
    r.t_norm = parse_real(f[5], line_no);
    r.kt_res = parse_real(f[6], line_no);
    if (!f[7].empty()) r.dist_to_oracle = parse_real(f[7], line_no);
    r.wall_ns = parse_int<std::int64_t>(f[8], line_no);
    out.push_back(r);
  }
  return out;
}

TraceRecord make_record(const IterationEvent& ev, const std::optional<PDPoint>& oracle) {
  TraceRecord r;
  r.n = ev.n;
  r.tau = ev.diag.tau;
  r.theta = ev.diag.theta;
  r.delta = ev.diag.delta;
  r.s_norm = std::sqrt(ev.diag.s_norm2);
  r.t_norm = std::sqrt(ev.diag.t_norm2);
  r.kt_res = ev.kt_res;
  if (oracle) r.dist_to_oracle = norm(ev.after - *oracle);
  r.wall_ns = ev.wall_ns;
  return r;
}

Observer trace_observer(std::vector<TraceRecord>& sink, std::optional<PDPoint> oracle,
                        Observer next) {
  return [&sink, oracle = std::move(oracle), next = std::move(next)](const IterationEvent& ev) {
    sink.push_back(make_record(ev, oracle));
    if (next) next(ev);
  };
}

}  // namespace pdsplit::harness
