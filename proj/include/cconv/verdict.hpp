#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cconv {

enum class VerdictStatus {
  pass,               // conclusion verified on at least one qualifying case
  vacuous,            // no qualifying case exists (empty intersections, empty X, ...)
  fail,               // conclusion violated although every hypothesis verified
  hypothesis_failed,  // a hypothesis did not verify; the conclusion was not tested
};

std::string_view to_string(VerdictStatus status);

/// Outcome of one proposition or inequality check. holds <=> max_violation <= tol;
/// a witness is recorded whenever holds is false.
struct Verdict {
  std::string check_id;
  VerdictStatus status = VerdictStatus::pass;
  bool holds = true;
  double max_violation = 0.0;
  double tol = 0.0;
  std::vector<std::pair<std::string, double>> witness;
  std::string notes;

  bool conclusion_failed() const { return status == VerdictStatus::fail; }
};

}  // namespace cconv
