#include "run_config.hpp"

#include "qnlchain/analysis.hpp"
#include "qnlchain/chain.hpp"
#include "qnlchain/errors.hpp"
#include "qnlchain/models.hpp"
#include "qnlchain/potential.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace qnlchain::cli {

namespace {

constexpr std::size_t max_grid_points = 100000;

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw UsageError("invalid number '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("invalid integer '" + std::string(text) + "'");
  }
  return value;
}

// Drops the accumulated binary noise of start + i * step.
double snap(double x) { return parse_double(fmt::format("{:.12g}", x)); }

}  // namespace

RunConfig defaults_for(const std::string& command) {
  RunConfig c;
  c.command = command;
  c.strains = {1.0};
  if (command == "stability") {
    c.models = {"a"};
    c.sizes = {64};
  } else if (command == "critical" || command == "summary") {
    c.models = {"a", "cb", "qnl"};
    c.sizes = {64};
  } else if (command == "equilibrium") {
    c.models = {"a", "cb"};
    c.sizes = {64, 128, 256, 512};
    c.kind = "circular";
  } else if (command == "ghost") {
    c.models = {"cb", "qnl"};
    c.sizes = {32, 64, 128, 256, 512};
    c.kind = "circular";
  } else if (command == "sweep") {
    c.models = {"cb"};
    c.sizes = {32, 64, 128, 256, 512};
    c.kind = "circular";
  } else if (command == "selfcheck") {
    c.models = {"a", "cb", "qnl"};
    c.sizes = {64};
  } else {
    throw UsageError("unknown command '" + command + "'");
  }
  return c;
}

std::vector<double> parse_strains(std::string_view text) {
  if (text.empty()) throw UsageError("empty strain list");
  const auto range = split(text, ':');
  if (range.size() == 3) {
    const double start = parse_double(range[0]);
    const double stop = parse_double(range[1]);
    const double step = parse_double(range[2]);
    if (!(step > 0.0) || stop < start) {
      throw UsageError("invalid range '" + std::string(text) + "' (need start <= stop and step > 0)");
    }
    // Points past stop by less than half a step are kept, absorbing roundoff in
    // the division.
    const double count = std::floor((stop - start) / step + 0.5 - 1e-9) + 1.0;
    if (count > static_cast<double>(max_grid_points)) throw UsageError("range has too many points");
    std::vector<double> out;
    for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(snap(start + i * step));
    return out;
  }
  if (range.size() != 1) throw UsageError("invalid range '" + std::string(text) + "' (expected start:stop:step)");
  std::vector<double> out;
  for (auto part : split(text, ',')) out.push_back(parse_double(part));
  return out;
}

std::vector<int> parse_sizes(std::string_view text) {
  if (text.empty()) throw UsageError("empty size list");
  std::vector<int> out;
  for (auto part : split(text, ',')) out.push_back(parse_int(part));
  return out;
}

std::vector<std::string> parse_models(std::string_view text) {
  std::vector<std::string> out;
  for (auto part : split(text, ',')) out.emplace_back(part);
  return out;
}

void validate(RunConfig& c) {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), c.command) == names.end()) {
    throw UsageError("unknown command '" + c.command + "'");
  }
  try {
    c.potential = PairPotential::parse(c.potential).describe();
    for (auto& m : c.models) m = to_string(model_kind_from_string(m));
    c.kind = to_string(chain_kind_from_string(c.kind));
    c.load = LoadCase::parse(c.load).describe();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  if (c.models.empty()) throw UsageError("no models given");
  if (std::set<std::string>(c.models.begin(), c.models.end()).size() != c.models.size()) {
    throw UsageError("duplicate model");
  }
  if (c.sizes.empty()) throw UsageError("no chain sizes given");
  for (int n : c.sizes) {
    if (n < 4) throw UsageError(fmt::format("chain size {} is below the minimum of 4", n));
  }
  if (c.strains.empty()) throw UsageError("no strains given");
  for (double f : c.strains) {
    if (!(f > 0.0) || !std::isfinite(f)) throw UsageError(fmt::format("strain {} must be positive", f));
  }
  if (!(c.alpha >= 0.0) || !std::isfinite(c.alpha)) throw UsageError("alpha must be a non-negative number");
  if (c.interface_k && *c.interface_k < 1) throw UsageError("K must be positive");
  if (c.constrained && c.kind == "circular") throw UsageError("circular chains cannot be constrained");
  if (c.format != "text" && c.format != "csv") throw UsageError("format must be text or csv");
  for (int id : c.only) {
    if (id < 1 || id > 10) throw UsageError(fmt::format("criterion {} does not exist", id));
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  j["potential"] = c.potential;
  j["models"] = c.models;
  j["kind"] = c.kind;
  j["constrained"] = c.constrained;
  j["N"] = c.sizes;
  j["F"] = c.strains;
  j["alpha"] = c.alpha;
  j["K"] = c.interface_k ? nlohmann::json(*c.interface_k) : nlohmann::json(nullptr);
  j["load"] = c.load;
  j["output"] = c.output;
  j["json"] = c.json_output;
  j["seed"] = c.seed;
  j["ghost_only"] = c.ghost_only;
  j["format"] = c.format;
  j["only"] = c.only;
  j["timing"] = c.timing;
  return j;
}

RunConfig merge_json(RunConfig c, const nlohmann::json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "command") {
        if (value.get<std::string>() != c.command) throw UsageError("config file is for command '" +
                                                                    value.get<std::string>() + "'");
      } else if (key == "potential") {
        c.potential = value.get<std::string>();
      } else if (key == "models") {
        c.models = value.get<std::vector<std::string>>();
      } else if (key == "kind") {
        c.kind = value.get<std::string>();
      } else if (key == "constrained") {
        c.constrained = value.get<bool>();
      } else if (key == "N") {
        c.sizes = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
      } else if (key == "F") {
        if (value.is_string()) {
          c.strains = parse_strains(value.get<std::string>());
        } else {
          c.strains = value.is_array() ? value.get<std::vector<double>>() : std::vector<double>{value.get<double>()};
        }
      } else if (key == "alpha") {
        c.alpha = value.get<double>();
      } else if (key == "K") {
        c.interface_k = value.is_null() ? std::nullopt : std::optional<int>(value.get<int>());
      } else if (key == "load") {
        c.load = value.get<std::string>();
      } else if (key == "output") {
        c.output = value.get<std::string>();
      } else if (key == "json") {
        c.json_output = value.get<std::string>();
      } else if (key == "seed") {
        c.seed = value.get<std::uint64_t>();
      } else if (key == "ghost_only") {
        c.ghost_only = value.get<bool>();
      } else if (key == "format") {
        c.format = value.get<std::string>();
      } else if (key == "only") {
        c.only = value.get<std::vector<int>>();
      } else if (key == "timing") {
        c.timing = value.get<bool>();
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
  return c;
}

}  // namespace qnlchain::cli
