#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stw {

/// Outcome of one invariant check.
struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  ///< one line of statistics
  double seconds = 0.0;
};

struct ValidationOptions {
  std::uint64_t seed = 20240601;
  /// Shrinks sample counts roughly tenfold for smoke runs. Pass/fail
  /// thresholds are unchanged.
  bool quick = false;
  /// Check ids to run; empty means all.
  std::vector<int> only;
};

inline constexpr int kNumChecks = 11;

/// Runs check `id` in 1..kNumChecks.
CheckResult run_check(int id, const ValidationOptions& opts);

/// Runs the selected checks in id order.
std::vector<CheckResult> run_validation(const ValidationOptions& opts);

/// "PASS [3] find-balance (1.2s): ..." style line.
std::string format_result(const CheckResult& r);

}  // namespace stw
