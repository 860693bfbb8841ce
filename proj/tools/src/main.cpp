#include "commands.hpp"
#include "run_config.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

namespace {

using qnlchain::cli::RunConfig;
using qnlchain::cli::UsageError;

// Raw flag values; only the ones given on the command line are applied.
struct Flags {
  std::string config_path;
  std::string potential, models, kind, sizes, strains, load, output, json, format, only;
  double alpha = 0.0;
  int k = 0;
  std::uint64_t seed = 0;
  bool constrained = false, ghost_only = false, timing = false, print_config = false;
};

void add_options(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_path, "JSON config file; flags override its values");
  cmd.add_option("--potential", f.potential, "lj or morse:a=<float>");
  cmd.add_option("--model", f.models, "Comma-separated models: a, cb, qnl");
  cmd.add_option("--kind", f.kind, "linear or circular");
  cmd.add_flag("--constrained", f.constrained, "Restrict displacements to the chain direction");
  cmd.add_option("--N", f.sizes, "Chain size or comma-separated sizes");
  cmd.add_option("--F", f.strains, "Strain, comma-separated strains, or start:stop:step");
  cmd.add_option("--alpha", f.alpha, "Bond-angle stiffness");
  cmd.add_option("--K", f.k, "Last atomistic site of the coupled model (default N/2)");
  cmd.add_option("--load", f.load, "zero or trig:<k1>,<k2>");
  cmd.add_option("-o,--output", f.output, "CSV output path (default stdout)");
  cmd.add_option("--json", f.json, "JSON report path (sweep, ghost)");
  cmd.add_option("--seed", f.seed, "Seed for randomized checks");
  cmd.add_flag("--ghost-only", f.ghost_only, "sweep: report ghost-force norms only");
  cmd.add_option("--format", f.format, "summary: text or csv");
  cmd.add_option("--only", f.only, "selfcheck: comma-separated criterion ids");
  cmd.add_flag("--timing", f.timing, "selfcheck: show wall times");
  cmd.add_flag("--print-config", f.print_config, "Print the resolved config as JSON and exit");
}

bool given(const CLI::App& cmd, const std::string& name) { return cmd.count(name) > 0; }

RunConfig resolve(const std::string& command, const CLI::App& cmd, const Flags& f) {
  RunConfig c = qnlchain::cli::defaults_for(command);
  if (given(cmd, "--config")) {
    std::ifstream file(f.config_path);
    if (!file) throw UsageError("cannot read config file '" + f.config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(file);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
    c = qnlchain::cli::merge_json(c, j);
  }
  if (given(cmd, "--potential")) c.potential = f.potential;
  if (given(cmd, "--model")) c.models = qnlchain::cli::parse_models(f.models);
  if (given(cmd, "--kind")) c.kind = f.kind;
  if (given(cmd, "--constrained")) c.constrained = f.constrained;
  if (given(cmd, "--N")) c.sizes = qnlchain::cli::parse_sizes(f.sizes);
  if (given(cmd, "--F")) c.strains = qnlchain::cli::parse_strains(f.strains);
  if (given(cmd, "--alpha")) c.alpha = f.alpha;
  if (given(cmd, "--K")) c.interface_k = f.k;
  if (given(cmd, "--load")) c.load = f.load;
  if (given(cmd, "--output")) c.output = f.output;
  if (given(cmd, "--json")) c.json_output = f.json;
  if (given(cmd, "--seed")) c.seed = f.seed;
  if (given(cmd, "--ghost-only")) c.ghost_only = f.ghost_only;
  if (given(cmd, "--format")) c.format = f.format;
  if (given(cmd, "--only")) c.only = qnlchain::cli::parse_sizes(f.only);
  if (given(cmd, "--timing")) c.timing = f.timing;
  qnlchain::cli::validate(c);
  return c;
}

const std::map<std::string, std::string> descriptions = {
    {"stability", "Numeric and closed-form stability infimum over a strain grid (CSV)"},
    {"critical", "Critical strains of the tension and buckling branches (CSV)"},
    {"equilibrium", "Force-free circular equilibria of the atomistic and Cauchy-Born models (CSV)"},
    {"ghost", "Ghost-force dual norms per chain size (CSV, optional JSON)"},
    {"sweep", "Linearized error sweep with theorem bounds (CSV, optional JSON rate report)"},
    {"summary", "Stability conditions and error orders for every model and geometry"},
    {"selfcheck", "Runs the acceptance checks and prints one PASS/FAIL line each"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability and error analysis of atomistic, Cauchy-Born and quasi-nonlocal chain models"};
  app.require_subcommand(1);
  Flags flags;
  std::map<std::string, CLI::App*> commands;
  for (const auto& name : qnlchain::cli::command_names()) {
    CLI::App* cmd = app.add_subcommand(name, descriptions.at(name));
    add_options(*cmd, flags);
    commands[name] = cmd;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qnlchain::cli::Usage;
  }
  for (const auto& [name, cmd] : commands) {
    if (!cmd->parsed()) continue;
    RunConfig config;
    try {
      config = resolve(name, *cmd, flags);
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << '\n';
      return qnlchain::cli::Usage;
    }
    if (flags.print_config) {
      std::cout << qnlchain::cli::to_json(config).dump(2) << '\n';
      return qnlchain::cli::Success;
    }
    return qnlchain::cli::execute(config, std::cout, std::cerr);
  }
  return qnlchain::cli::Usage;
}
