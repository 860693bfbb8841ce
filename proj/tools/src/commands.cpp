#include "commands.hpp"

#include "qnlchain/qnlchain.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

namespace qnlchain::cli {

namespace {

using nlohmann::json;

// A failed equality or bound check; the output is still written.
struct Outcome {
  int code = Success;
  void raise(int c) { code = std::max(code, c); }
};

ModelSpec model_from(const RunConfig& c, const std::string& name) {
  ModelSpec m;
  m.kind = model_kind_from_string(name);
  m.potential = PairPotential::parse(c.potential);
  m.bond_angle = c.alpha;
  if (m.kind == ModelKind::QuasiNonlocal) m.interface_k = c.interface_k;
  return m;
}

ChainKind kind_of(const RunConfig& c) { return chain_kind_from_string(c.kind); }

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// Finite values as numbers, the rest as null (JSON has no inf/nan).
json number_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_stability(const RunConfig& c, std::ostream& out, std::ostream& err) {
  std::vector<StabilityReport> reports;
  for (const auto& name : c.models) {
    const ModelSpec m = model_from(c, name);
    for (int n : c.sizes) {
      auto part = stability_scan(m, kind_of(c), n, c.strains, c.constrained);
      reports.insert(reports.end(), part.begin(), part.end());
    }
  }
  std::stable_sort(reports.begin(), reports.end(), [](const StabilityReport& a, const StabilityReport& b) {
    return std::tie(a.n, a.strain) < std::tie(b.n, b.strain);
  });
  write_stability_csv(out, reports);
  Outcome outcome;
  for (const auto& r : reports) {
    if (r.equality_applies() && !r.equality_holds()) {
      err << fmt::format("equality check failed: model {} N={} F={} gap {}\n", r.model, r.n, format_number(r.strain),
                         format_number(r.gap));
      outcome.raise(CheckFailed);
    }
  }
  return outcome.code;
}

int cmd_critical(const RunConfig& c, std::ostream& out, std::ostream& err) {
  out << "model,kind,N,alpha,branch,critical_strain\n";
  Outcome outcome;
  for (int n : c.sizes) {
    for (const auto& name : c.models) {
      const ModelSpec m = model_from(c, name);
      for (Branch b : {Branch::Tension, Branch::Buckling}) {
        const auto root = critical_strain(m, b, kind_of(c), n);
        out << fmt::format("{},{},{},{},{},{}\n", name, c.kind, n, format_number(c.alpha), to_string(b),
                           format_optional(root));
        if (!root) {
          const auto [lo, hi] = default_bracket(b);
          err << fmt::format("no {} root for model {} N={} in [{}, {}]\n", to_string(b), name, n, lo, hi);
          outcome.raise(NumericalFailure);
        }
      }
    }
  }
  return outcome.code;
}

int cmd_equilibrium(const RunConfig& c, std::ostream& out, std::ostream&) {
  const PairPotential phi = PairPotential::parse(c.potential);
  out << "N,eps,strain_a,radius_a,residual_a,strain_cb,radius_cb,residual_cb,radius_gap_over_eps2\n";
  std::vector<int> sizes = c.sizes;
  std::sort(sizes.begin(), sizes.end());
  for (int n : sizes) {
    const auto a = circular_equilibrium(ModelSpec::atomistic(phi), n);
    const auto cb = circular_equilibrium(ModelSpec::cauchy_born(phi), n);
    const double eps = 1.0 / n;
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", n, format_number(eps), format_number(a.strain),
                       format_number(a.radius), format_number(a.residual), format_number(cb.strain),
                       format_number(cb.radius), format_number(cb.residual),
                       format_number(std::abs(a.radius - cb.radius) / (eps * eps)));
  }
  return Success;
}

struct GhostRow {
  std::string model;
  double strain;
  GhostRecord record;
};

int write_ghost(const RunConfig& c, std::ostream& out, json& report) {
  std::vector<GhostRow> rows;
  report["results"] = json::array();
  Outcome outcome;
  for (const auto& name : c.models) {
    const ModelSpec m = model_from(c, name);
    for (double f : c.strains) {
      const GhostSweep sweep = ghost_sweep(m, kind_of(c), f, c.sizes);
      json entry{{"model", name}, {"kind", c.kind}, {"F", f}, {"rate", optional_json(sweep.rate)}};
      entry["records"] = json::array();
      for (const auto& r : sweep.records) {
        rows.push_back({name, f, r});
        entry["records"].push_back({{"N", r.n}, {"eps", r.eps}, {"norm", r.norm}, {"bound", optional_json(r.bound)}});
        if (r.bound && r.norm > *r.bound) outcome.raise(CheckFailed);
      }
      report["results"].push_back(entry);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const GhostRow& a, const GhostRow& b) {
    return std::tie(a.record.n, a.strain) < std::tie(b.record.n, b.strain);
  });
  out << "model,kind,N,F,eps,ghost_norm,bound\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", r.model, c.kind, r.record.n, format_number(r.strain),
                       format_number(r.record.eps), format_number(r.record.norm), format_optional(r.record.bound));
  }
  return outcome.code;
}

void write_json(const RunConfig& c, const json& report) {
  if (c.json_output.empty()) return;
  std::ofstream file(c.json_output);
  if (!file) throw UsageError("cannot open '" + c.json_output + "' for writing");
  file << report.dump(2) << '\n';
}

int cmd_ghost(const RunConfig& c, std::ostream& out, std::ostream&) {
  json report{{"config", to_json(c)}};
  const int code = write_ghost(c, out, report);
  write_json(c, report);
  return code;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.ghost_only) return cmd_ghost(c, out, err);
  if (c.strains.size() != 1) throw UsageError("sweep takes a single strain");
  json report{{"config", to_json(c)}, {"results", json::array()}};
  Outcome outcome;
  bool header = true;
  for (const auto& name : c.models) {
    SweepConfig sc;
    sc.model = model_from(c, name);
    sc.kind = kind_of(c);
    sc.strain = c.strains.front();
    sc.constrained = c.constrained;
    sc.load = LoadCase::parse(c.load);
    sc.sizes = c.sizes;
    std::sort(sc.sizes.begin(), sc.sizes.end());
    const SweepResult result = error_sweep(sc);
    std::ostringstream block;
    write_sweep_csv(block, name, sc.kind, result.records);
    std::string text = block.str();
    if (!header) text.erase(0, text.find('\n') + 1);
    header = false;
    out << text;
    json entry{{"model", name},
               {"kind", c.kind},
               {"F", sc.strain},
               {"rate", optional_json(result.rate)},
               {"tau_rate", optional_json(result.tau_rate)},
               {"records", json::array()}};
    for (const auto& r : result.records) {
      entry["records"].push_back({{"N", r.n},
                                  {"eps", r.eps},
                                  {"K", r.k},
                                  {"error", number_json(r.error)},
                                  {"tau_norm", number_json(r.tau_norm)},
                                  {"bound", optional_json(r.bounds.error_bound)},
                                  {"numeric_bound", optional_json(r.numeric_bound())},
                                  {"gamma_numeric", number_json(r.gamma_numeric)},
                                  {"rate_so_far", optional_json(r.rate_so_far)},
                                  {"flags", r.flags}});
      for (const auto& flag : r.flags) {
        if (flag.starts_with("failed")) {
          err << fmt::format("model {} N={}: {}\n", name, r.n, flag);
          outcome.raise(NumericalFailure);
        } else if (flag == "bound-exceeded") {
          err << fmt::format("model {} N={}: error exceeds the theorem bound\n", name, r.n);
          outcome.raise(CheckFailed);
        }
      }
    }
    report["results"].push_back(entry);
  }
  write_json(c, report);
  return outcome.code;
}

std::string condition_text(ModelKind model, ChainKind kind, bool constrained, double alpha) {
  const std::string tension = "phi''(F)+4phi''(2F)";
  if (constrained) return tension + " > 0";
  std::string buckling = model == ModelKind::CauchyBorn ? "(phi'(F)+2phi'(2F))/F" : "phi'(F)/F";
  if (alpha > 0.0) buckling += kind == ChainKind::Circular ? " + 2alpha cos(beta)/F^2" : " + 2alpha/F^2";
  return "min{" + tension + ", " + buckling + "} > 0";
}

const char* error_order(ModelKind model) {
  switch (model) {
    case ModelKind::CauchyBorn: return "eps^2";
    case ModelKind::QuasiNonlocal: return "eps^3/2";
    default: return "reference";
  }
}

int cmd_summary(const RunConfig& c, std::ostream& out, std::ostream&) {
  struct Geometry {
    const char* label;
    ChainKind kind;
    bool constrained;
  };
  const Geometry geometries[] = {{"1D constrained", ChainKind::Linear, true},
                                 {"1D unconstrained", ChainKind::Linear, false},
                                 {"circle", ChainKind::Circular, false}};
  const int n = c.sizes.front();
  std::vector<std::vector<std::string>> rows;
  const std::vector<std::string> header = {"model", "geometry",    "F",      "alpha",       "condition", "tension",
                                           "buckling", "analytic", "numeric_inf", "stable", "error",     "flags"};
  for (double f : c.strains) {
    for (const auto& name : c.models) {
      const ModelSpec m = model_from(c, name);
      for (const auto& g : geometries) {
        const StabilityReport r = stability_report(m, g.kind, n, f, g.constrained);
        const std::string buckling = g.constrained ? "" : format_number(r.analytic.buckling);
        rows.push_back({name, g.label, format_number(f), format_number(c.alpha),
                        condition_text(m.kind, g.kind, g.constrained, c.alpha), format_number(r.analytic.tension),
                        buckling, format_number(r.analytic.value), format_number(r.numeric_inf),
                        r.analytic.value > 0.0 ? "yes" : "no", error_order(m.kind), r.flags()});
      }
    }
  }
  if (c.format == "csv") {
    auto quoted = [](const std::string& s) {
      return s.find(',') == std::string::npos ? s : "\"" + s + "\"";
    };
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quoted(row[i]);
      out << '\n';
    }
    return Success;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto print_row = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += fmt::format("{:<{}}", row[i], width[i]);
      if (i + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  out << fmt::format("potential {}, N = {}\n", c.potential, n);
  print_row(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  print_row(rule);
  for (const auto& row : rows) print_row(row);
  return Success;
}

int cmd_selfcheck(const RunConfig& c, std::ostream& out, std::ostream&) {
  VerificationOptions options;
  options.seed = c.seed;
  options.only = c.only;
  const auto results = run_checks(options);
  int passed = 0, known = 0, blocking = 0;
  for (const auto& r : results) {
    out << format_check(r, c.timing) << '\n';
    if (r.passed()) {
      ++passed;
    } else if (r.blocking()) {
      ++blocking;
    } else {
      ++known;
    }
  }
  out << fmt::format("summary: {} passed, {} failed with documented known issues, {} failed\n", passed, known,
                     blocking);
  return blocking == 0 ? Success : CheckFailed;
}

int dispatch(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.command == "stability") return cmd_stability(c, out, err);
  if (c.command == "critical") return cmd_critical(c, out, err);
  if (c.command == "equilibrium") return cmd_equilibrium(c, out, err);
  if (c.command == "ghost") return cmd_ghost(c, out, err);
  if (c.command == "sweep") return cmd_sweep(c, out, err);
  if (c.command == "summary") return cmd_summary(c, out, err);
  if (c.command == "selfcheck") return cmd_selfcheck(c, out, err);
  throw UsageError("unknown command '" + c.command + "'");
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    // Render into a buffer so a failing run leaves no partial file.
    std::ostringstream buffer;
    const int code = dispatch(config, buffer, err);
    if (config.output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(config.output);
      if (!file) throw UsageError("cannot open '" + config.output + "' for writing");
      file << buffer.str();
    }
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const StabilityError& e) {
    err << "numerical failure: " << e.what() << " (numeric infimum " << format_number(e.numeric_inf()) << ")\n";
    return NumericalFailure;
  } catch (const std::exception& e) {
    // NoRootError, NotPositiveDefiniteError, DomainError, GeometryError,
    // PreconditionError.
    err << "numerical failure: " << e.what() << '\n';
    return NumericalFailure;
  }
}

}  // namespace qnlchain::cli
