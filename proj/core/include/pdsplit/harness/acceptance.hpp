#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdsplit::harness {

struct CriterionResult {
  std::string id;           // "AC-1" ... "AC-10"
  std::string description;  // one-line summary of what is checked
  bool passed = false;
  std::string detail;       // measured worst case against the threshold
  double seconds = 0.0;
};

/// Runs every acceptance criterion in order. When `log` is set, one line
/// per criterion is written as soon as it finishes.
std::vector<CriterionResult> run_acceptance(std::ostream* log = nullptr);

/// "AC-3  PASS  <description>  (<detail>; 0.41 s)"
std::string format_result(const CriterionResult& r);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace pdsplit::harness
