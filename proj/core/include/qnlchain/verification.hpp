#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qnlchain {

/// One numeric assertion inside an acceptance criterion.
struct SubCheck {
  std::string name;
  bool passed = false;
  std::string detail;
  /// Set when a failure is expected and documented; such failures are
  /// reported but do not make the run fail.
  std::optional<std::string> known_issue;
};

struct CheckResult {
  int id = 0;
  std::string title;
  std::vector<SubCheck> subchecks;
  double seconds = 0.0;

  bool passed() const;
  /// True when some failed sub-check has no documented known issue.
  bool blocking() const;
  /// Names of the failed sub-checks with their details.
  std::string failure_summary() const;
};

struct VerificationOptions {
  std::uint64_t seed = 20240611;
  /// Criterion ids to run (1..10); empty runs all of them.
  std::vector<int> only;
};

inline constexpr int criterion_count = 10;

/// Runs the acceptance criteria with the default Lennard-Jones potential.
std::vector<CheckResult> run_checks(const VerificationOptions& options = {});

/// "[PASS] 3 <title>: <n>/<m> sub-checks" with the failures appended and,
/// optionally, the wall time.
std::string format_check(const CheckResult& result, bool with_timing);

}  // namespace qnlchain
