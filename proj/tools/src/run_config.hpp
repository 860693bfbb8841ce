#pragma once

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qnlchain::cli {

/// Malformed command-line or config-file input (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fully resolved settings for one command. Every field has a value, so the
/// JSON form is canonical: to_json(from_json(to_json(c))) == to_json(c).
struct RunConfig {
  std::string command;
  std::string potential = "lj";
  std::vector<std::string> models;
  std::string kind = "linear";
  bool constrained = false;
  std::vector<int> sizes;
  std::vector<double> strains;
  double alpha = 0.0;
  std::optional<int> interface_k;
  std::string load = "trig:1,2";
  std::string output;       // CSV destination, empty for stdout
  std::string json_output;  // JSON report destination, empty for none
  std::uint64_t seed = 20240611;
  bool ghost_only = false;
  std::string format = "text";  // summary rendering: text or csv
  std::vector<int> only;        // selfcheck criteria, empty for all
  bool timing = false;          // selfcheck wall times (not deterministic)

  bool operator==(const RunConfig&) const = default;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"stability", "critical", "equilibrium", "ghost",
                                                 "sweep",     "summary",  "selfcheck"};
  return names;
}

/// Defaults that depend on the command (model list, sizes, strains, kind).
RunConfig defaults_for(const std::string& command);

/// "start:stop:step" (inclusive within half a step), "a,b,c", or a single value.
std::vector<double> parse_strains(std::string_view text);
/// "a,b,c" or a single value.
std::vector<int> parse_sizes(std::string_view text);
/// Comma-separated model names, canonicalized to a, cb, qnl.
std::vector<std::string> parse_models(std::string_view text);

/// Normalizes names and checks ranges; throws UsageError.
void validate(RunConfig& config);

nlohmann::json to_json(const RunConfig& config);
/// Overlays the keys present in `j` onto `base`; unknown keys are rejected.
RunConfig merge_json(RunConfig base, const nlohmann::json& j);

}  // namespace qnlchain::cli
