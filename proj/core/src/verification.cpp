#include "qnlchain/verification.hpp"

#include "qnlchain/analysis.hpp"
#include "qnlchain/chain.hpp"
#include "qnlchain/errors.hpp"
#include "qnlchain/models.hpp"
#include "qnlchain/numerics.hpp"
#include "qnlchain/stability.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <span>
#include <utility>

namespace qnlchain {

namespace {

using Rng = std::mt19937_64;

const char* const bond_angle_issue =
    "the exact bond-angle second variation keeps the mixed neighbour terms, so the zig-zag shift differs "
    "from 2 alpha cos(beta)/F^2";
const char* const qnl_indefinite_issue =
    "at F = 1 the circle is not force-free and both the atomistic reference and the coupled model are indefinite "
    "(rotation-mode eigenvalue of order -eps^2), so the rate theorem's stability hypothesis fails";
const char* const qnl_bound_issue =
    "the coupled-model stability constant gamma_eps is negative at F = 1, so the theorem bound is not defined";

std::string num(double x) { return fmt::format("{:.3g}", x); }

SubCheck make_check(std::string name, bool passed, std::string detail) {
  return SubCheck{std::move(name), passed, std::move(detail), std::nullopt};
}

ChainGeometry make_chain(ChainKind kind, int n, double strain) {
  return kind == ChainKind::Linear ? make_linear(n, strain) : make_circular(n, strain);
}

Field random_field(Rng& gen, int n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Field f(n, 2);
  for (int i = 0; i < n; ++i) {
    f(i, 0) = normal(gen);
    f(i, 1) = normal(gen);
  }
  return f;
}

Field random_mean_zero(Rng& gen, int n) { return DisplacementField::project(random_field(gen, n), false).values(); }

std::optional<double> safe_rate(const std::vector<std::pair<double, double>>& pairs) {
  try {
    return fit_rate(pairs);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string rate_text(const std::optional<double>& rate) { return rate ? num(*rate) : std::string("n/a"); }

// Relative discrepancy, guarded against a vanishing reference.
double rel_diff(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

double quadratic(const Eigen::MatrixXd& h, const Field& u, const Field& v) { return flatten(u).dot(h * flatten(v)); }

// Gradient and Hessian against central differences of the energy.
std::vector<SubCheck> check_derivatives(Rng& gen) {
  std::vector<SubCheck> out;
  std::uniform_int_distribution<int> size_dist(6, 32);
  std::uniform_real_distribution<double> strain_dist(0.9, 1.1);
  const PairPotential lj = PairPotential::lennard_jones();
  const std::vector<ModelSpec> models = {ModelSpec::atomistic(), ModelSpec::cauchy_born(),
                                         ModelSpec::quasi_nonlocal(), ModelSpec::atomistic(lj, 0.5)};
  const std::vector<std::string> labels = {"a", "cb", "qnl", "a+angle"};
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    double worst_grad = 0.0, worst_hess = 0.0;
    for (int chain = 0; chain < 20; ++chain) {
      const ChainKind kind = chain % 2 == 0 ? ChainKind::Linear : ChainKind::Circular;
      const int n = size_dist(gen);
      const double strain = strain_dist(gen);
      const ChainGeometry y0 = make_chain(kind, n, strain);
      const ChainGeometry y = y0.displaced(0.05 * strain / n * random_field(gen, n));
      const ModelSpec& m = models[mi];
      const Field g = first_variation(m, y);
      const Eigen::MatrixXd h = hessian_full(m, y);
      for (int dir = 0; dir < 2; ++dir) {
        // Directions on the lattice scale, so the step is a relative strain.
        const Field v = random_field(gen, n) / n;
        const double t1 = 1e-6;
        const double fd1 = (energy(m, y.displaced(t1 * v)) - energy(m, y.displaced(-t1 * v))) / (2 * t1);
        worst_grad = std::max(worst_grad, rel_diff(inner(g, v), fd1));
        const double t2 = 1e-5;
        const double fd2 =
            (energy(m, y.displaced(t2 * v)) - 2 * energy(m, y) + energy(m, y.displaced(-t2 * v))) / (t2 * t2);
        worst_hess = std::max(worst_hess, rel_diff(quadratic(h, v, v), fd2));
      }
    }
    out.push_back(make_check(labels[mi] + " gradient", worst_grad <= 1e-6,
                             "max relative error " + num(worst_grad) + " (tol 1e-6)"));
    out.push_back(make_check(labels[mi] + " Hessian", worst_hess <= 1e-5,
                             "max relative error " + num(worst_hess) + " (tol 1e-5)"));
  }
  return out;
}

std::vector<SubCheck> check_patch_test() {
  std::vector<SubCheck> out;
  for (const auto& m : {ModelSpec::cauchy_born(), ModelSpec::quasi_nonlocal()}) {
    double worst = 0.0;
    for (int n : {16, 64, 256}) {
      for (double f : {0.9, 1.0, 1.1}) worst = std::max(worst, ghost_force(m, make_linear(n, f)).dual_norm);
    }
    out.push_back(make_check(m.name() + " linear ghost force", worst < 1e-12, "max dual norm " + num(worst)));
  }
  const GhostSweep sweep = ghost_sweep(ModelSpec::cauchy_born(), ChainKind::Circular, 1.0, {32, 64, 128, 256, 512});
  bool within = true;
  double max_ratio = 0.0;
  for (const auto& r : sweep.records) {
    if (!r.bound || r.norm > *r.bound) within = false;
    if (r.bound) max_ratio = std::max(max_ratio, r.norm / *r.bound);
  }
  out.push_back(make_check("circular cb ghost force within C_kappa eps^2", within,
                           "max norm/bound " + num(max_ratio)));
  out.push_back(make_check("circular cb ghost force rate", sweep.rate && *sweep.rate >= 1.9,
                           "rate " + rate_text(sweep.rate) + " (need >= 1.9)"));
  return out;
}

std::vector<SubCheck> check_exact_stability() {
  struct Case {
    std::string label;
    ModelSpec model;
    bool constrained;
  };
  const std::vector<Case> cases = {{"constrained cb", ModelSpec::cauchy_born(), true},
                                   {"constrained a", ModelSpec::atomistic(), true},
                                   {"planar cb", ModelSpec::cauchy_born(), false}};
  std::vector<SubCheck> out;
  for (const auto& c : cases) {
    int evaluated = 0;
    bool ok = true;
    double worst = 0.0;
    for (double f : {0.90, 0.95, 1.0, 1.05, 1.10}) {
      const StabilityReport r = stability_report(c.model, ChainKind::Linear, 64, f, c.constrained);
      if (!r.analytic.hypotheses_met) continue;
      ++evaluated;
      if (!r.equality_applies() || !r.equality_holds(1e-9)) ok = false;
      worst = std::max(worst, std::abs(r.gap) / std::max(1.0, std::abs(r.analytic.value)));
    }
    out.push_back(make_check(c.label, ok && evaluated > 0,
                             fmt::format("{} strains, max relative gap {}", evaluated, num(worst))));
  }
  return out;
}

std::vector<SubCheck> check_asymptotics() {
  struct Case {
    std::string label;
    ModelSpec model;
    ChainKind kind;
    bool constrained;
    std::vector<double> strains;
  };
  const std::vector<Case> cases = {
      {"planar a linear", ModelSpec::atomistic(), ChainKind::Linear, false, {0.95, 1.1}},
      {"a circular", ModelSpec::atomistic(), ChainKind::Circular, false, {0.95, 1.0, 1.1}},
      {"cb circular", ModelSpec::cauchy_born(), ChainKind::Circular, false, {0.95, 1.0, 1.1}},
      {"constrained qnl linear", ModelSpec::quasi_nonlocal(), ChainKind::Linear, true, {0.95, 1.0, 1.1}},
      {"planar qnl linear", ModelSpec::quasi_nonlocal(), ChainKind::Linear, false, {0.95, 1.0, 1.1}},
      {"qnl circular", ModelSpec::quasi_nonlocal(), ChainKind::Circular, false, {0.95, 1.0, 1.1}}};
  std::vector<SubCheck> out;
  for (const auto& c : cases) {
    for (double f : c.strains) {
      std::vector<std::pair<double, double>> gaps;
      bool exact = true;
      int order = 0;
      for (int n : {32, 64, 128, 256}) {
        const StabilityReport r = stability_report(c.model, c.kind, n, f, c.constrained);
        order = std::max(order, r.analytic.order);
        gaps.emplace_back(1.0 / n, std::abs(r.gap));
        if (std::abs(r.gap) > 1e-9 * std::max(1.0, std::abs(r.analytic.value))) exact = false;
      }
      const std::string name = fmt::format("{} F={}", c.label, f);
      if (exact) {
        out.push_back(make_check(name, true, "exact to 1e-9"));
        continue;
      }
      const std::optional<double> rate = safe_rate(gaps);
      const double need = order >= 2 ? 1.9 : 0.9;
      out.push_back(make_check(name, order > 0 && rate && *rate >= need,
                               fmt::format("rate {} (need >= {}, last gap {})", rate_text(rate), need,
                                           num(gaps.back().second))));
    }
  }
  return out;
}

std::vector<SubCheck> check_bond_angle_shift() {
  const PairPotential lj = PairPotential::lennard_jones();
  const double strain = 0.9;
  std::vector<SubCheck> out;
  for (double alpha : {0.25, 1.0}) {
    const ModelSpec with = ModelSpec::atomistic(lj, alpha);
    const ModelSpec without = ModelSpec::atomistic(lj, 0.0);
    {
      const int n = 64;
      const auto y = make_linear(n, strain);
      const double shift = stability_numeric(with, y, false).value - stability_numeric(without, y, false).value;
      const double expected = bond_angle_shift(alpha, ChainKind::Linear, n, strain);
      SubCheck s = make_check(fmt::format("linear alpha={}", alpha), std::abs(shift - expected) <= 1e-8,
                              fmt::format("shift {} vs {}", num(shift), num(expected)));
      if (!s.passed) s.known_issue = bond_angle_issue;
      out.push_back(std::move(s));
    }
    std::vector<std::pair<double, double>> gaps;
    for (int n : {32, 64, 128, 256}) {
      const auto y = make_circular(n, strain);
      const double shift = stability_numeric(with, y, false).value - stability_numeric(without, y, false).value;
      gaps.emplace_back(1.0 / n, std::abs(shift - bond_angle_shift(alpha, ChainKind::Circular, n, strain)));
    }
    const std::optional<double> rate = safe_rate(gaps);
    SubCheck s = make_check(fmt::format("circular alpha={}", alpha), rate && *rate >= 0.9,
                            fmt::format("rate {} (need >= 0.9, last gap {})", rate_text(rate),
                                        num(gaps.back().second)));
    if (!s.passed) s.known_issue = bond_angle_issue;
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SubCheck> check_critical_strains() {
  const PairPotential lj = PairPotential::lennard_jones();
  const int n = 64;
  std::vector<SubCheck> out;
  const auto a = critical_strain(ModelSpec::atomistic(), Branch::Buckling, ChainKind::Linear, n);
  out.push_back(make_check("atomistic buckling F* = 1", a && *a == 1.0, a ? "F* = " + num(*a) : "no root"));
  const auto cb = critical_strain(ModelSpec::cauchy_born(), Branch::Buckling, ChainKind::Linear, n);
  out.push_back(make_check("cb buckling below atomistic", a && cb && *cb < *a,
                           cb ? "cb F* = " + fmt::format("{:.10f}", *cb) : "no root"));
  std::vector<double> tension;
  for (const auto& m : {ModelSpec::atomistic(), ModelSpec::cauchy_born(), ModelSpec::quasi_nonlocal()}) {
    for (ChainKind kind : {ChainKind::Linear, ChainKind::Circular}) {
      if (auto t = critical_strain(m, Branch::Tension, kind, n)) tension.push_back(*t);
    }
  }
  const bool all_found = tension.size() == 6;
  const auto [lo, hi] = std::minmax_element(tension.begin(), tension.end());
  const double spread = all_found ? *hi - *lo : INFINITY;
  out.push_back(make_check("tension F* identical across models", all_found && spread <= 1e-10,
                           all_found ? fmt::format("F* = {:.10f}, spread {}", *lo, num(spread)) : "missing root"));
  for (const auto& base : {ModelSpec::atomistic(lj), ModelSpec::cauchy_born(lj)}) {
    ModelSpec bent = base;
    bent.bond_angle = 0.25;
    const auto plain = critical_strain(base, Branch::Buckling, ChainKind::Linear, n);
    const auto with = critical_strain(bent, Branch::Buckling, ChainKind::Linear, n);
    out.push_back(make_check(base.name() + " bond angle lowers buckling F*", plain && with && *with < *plain,
                             plain && with ? fmt::format("{:.6f} -> {:.6f}", *plain, *with) : "no root"));
  }
  return out;
}

std::vector<SubCheck> check_radii() {
  std::vector<double> scaled;
  for (int n : {64, 128, 256, 512}) {
    const double ra = circular_equilibrium(ModelSpec::atomistic(), n).radius;
    const double rc = circular_equilibrium(ModelSpec::cauchy_born(), n).radius;
    scaled.push_back(std::abs(ra - rc) * n * n);
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  const double variation = (*hi - *lo) / *lo;
  return {make_check("|R_a - R_cb| / eps^2 stable", variation < 0.2,
                     fmt::format("range [{}, {}], variation {}", num(*lo), num(*hi), num(variation)))};
}

std::vector<SubCheck> check_error_rates() {
  std::vector<SubCheck> out;
  struct Case {
    ModelSpec model;
    double need;
  };
  for (const auto& c : {Case{ModelSpec::cauchy_born(), 1.9}, Case{ModelSpec::quasi_nonlocal(), 1.4}}) {
    SweepConfig config;
    config.model = c.model;
    const SweepResult sweep = error_sweep(config);
    const bool indefinite = std::any_of(sweep.records.begin(), sweep.records.end(), [](const SweepRecord& r) {
      return r.flag_string().find("indefinite") != std::string::npos;
    });
    SubCheck rate = make_check(c.model.name() + " error rate", sweep.rate && *sweep.rate >= c.need,
                               fmt::format("rate {} (need >= {})", rate_text(sweep.rate), c.need));
    if (!rate.passed && indefinite && c.model.kind == ModelKind::QuasiNonlocal) rate.known_issue = qnl_indefinite_issue;
    out.push_back(std::move(rate));
    bool evaluable = true, within = true;
    double max_ratio = 0.0;
    for (const auto& r : sweep.records) {
      if (!r.bounds.error_bound) {
        evaluable = false;
        continue;
      }
      max_ratio = std::max(max_ratio, r.error / *r.bounds.error_bound);
      if (r.error > *r.bounds.error_bound) within = false;
    }
    SubCheck s = make_check(c.model.name() + " error within theorem bound", evaluable && within,
                            evaluable ? "max error/bound " + num(max_ratio)
                                      : "bound not defined (gamma = " + num(sweep.records.front().bounds.gamma) + ")");
    if (!evaluable && c.model.kind == ModelKind::QuasiNonlocal) s.known_issue = qnl_bound_issue;
    out.push_back(std::move(s));
  }
  // Same sweep in tension, where the stability hypotheses hold.
  SweepConfig tension;
  tension.model = ModelSpec::quasi_nonlocal();
  tension.strain = 1.1;
  const SweepResult sweep = error_sweep(tension);
  bool within = true;
  for (const auto& r : sweep.records) {
    if (!r.bounds.error_bound || r.error > *r.bounds.error_bound) within = false;
  }
  out.push_back(make_check("qnl error rate at F=1.1", sweep.rate && *sweep.rate >= 1.4,
                           fmt::format("rate {} (need >= 1.4)", rate_text(sweep.rate))));
  out.push_back(make_check("qnl error within theorem bound at F=1.1", within, "all N"));
  return out;
}

std::vector<SubCheck> check_duality(Rng& gen) {
  const PairPotential lj = PairPotential::lennard_jones();
  struct Case {
    ModelSpec model;
    ChainKind kind;
    double strain;
  };
  const std::vector<Case> cases = {{ModelSpec::cauchy_born(), ChainKind::Circular, 1.0},
                                   {ModelSpec::quasi_nonlocal(), ChainKind::Circular, 1.0},
                                   {ModelSpec::cauchy_born(), ChainKind::Linear, 1.05},
                                   {ModelSpec::quasi_nonlocal(), ChainKind::Linear, 1.05},
                                   {ModelSpec::cauchy_born(lj, 0.5), ChainKind::Circular, 1.05},
                                   {ModelSpec::quasi_nonlocal(lj, 0.5), ChainKind::Linear, 1.1}};
  const LoadCase load = LoadCase::smooth_trig(1, 2);
  double worst_defect = 0.0;
  int solved = 0, bounded = 0, skipped = 0;
  bool bound_ok = true;
  double max_ratio = 0.0;
  for (const auto& c : cases) {
    for (int n : {32, 64}) {
      const ChainGeometry y = make_chain(c.kind, n, c.strain);
      const SolveOptions lenient{false};
      const Field ua = solve_linearized(c.model.reference(), y, load, false, lenient).u;
      const Field um = solve_linearized(c.model, y, load, false, lenient).u;
      const ModelingError tau = modeling_error(c.model, y, ua, false);
      for (int trial = 0; trial < 10; ++trial) {
        const Field v = random_mean_zero(gen, n);
        const double scale = std::max(1.0, std::abs(inner(tau.tau, v)));
        worst_defect = std::max(worst_defect, duality_defect(c.model, y, ua, um, tau.tau, v) / scale);
      }
      ++solved;
      const double gamma = stability_numeric(c.model, y, false).value;
      if (gamma <= 0.0) {
        ++skipped;
        continue;
      }
      ++bounded;
      const double error = l2eps_norm(backward_diff(Field(ua - um), 1));
      const double bound = tau.dual_norm / gamma;
      max_ratio = std::max(max_ratio, error / bound);
      if (error > bound * (1 + 1e-9)) bound_ok = false;
    }
  }
  return {make_check("duality identity", worst_defect < 1e-9,
                     fmt::format("{} solved cases, max defect {}", solved, num(worst_defect))),
          make_check("error <= ||tau||_* / gamma_numeric", bound_ok && bounded > 0,
                     fmt::format("{} stable cases, max ratio {}, {} indefinite cases skipped", bounded,
                                 num(max_ratio), skipped))};
}

std::vector<SubCheck> check_modes() {
  struct Case {
    std::string label;
    ModelSpec model;
    ChainKind kind;
  };
  const std::vector<Case> cases = {{"planar a linear", ModelSpec::atomistic(), ChainKind::Linear},
                                   {"planar cb linear", ModelSpec::cauchy_born(), ChainKind::Linear},
                                   {"cb circular", ModelSpec::cauchy_born(), ChainKind::Circular}};
  std::vector<SubCheck> out;
  for (const auto& c : cases) {
    for (int n : {32, 64}) {
      const ModeCheck m = buckling_mode_check(c.model, make_chain(c.kind, n, 0.9));
      out.push_back(make_check(fmt::format("{} N={}", c.label, n), m.branch_active && m.correlation > 0.99,
                               fmt::format("correlation {:.6f}, cluster {}", m.correlation, m.cluster_size)));
    }
  }
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<std::vector<SubCheck>(Rng&)> run;
  double time_limit = 0.0;  // seconds, 0 for none
};

std::vector<Criterion> criteria() {
  return {
      {1, "gradient and Hessian match finite differences", check_derivatives, 10.0},
      {2, "patch test and circular ghost force", [](Rng&) { return check_patch_test(); }},
      {3, "exact stability constants", [](Rng&) { return check_exact_stability(); }, 30.0},
      {4, "stability asymptotics", [](Rng&) { return check_asymptotics(); }},
      {5, "bond-angle buckling shift", [](Rng&) { return check_bond_angle_shift(); }},
      {6, "critical strains", [](Rng&) { return check_critical_strains(); }},
      {7, "equilibrium radii", [](Rng&) { return check_radii(); }},
      {8, "error rates and theorem bounds", [](Rng&) { return check_error_rates(); }, 120.0},
      {9, "duality and bound machinery", check_duality},
      {10, "buckling mode identification", [](Rng&) { return check_modes(); }},
  };
}

}  // namespace

bool CheckResult::passed() const {
  return !subchecks.empty() && std::all_of(subchecks.begin(), subchecks.end(), [](const SubCheck& s) { return s.passed; });
}

bool CheckResult::blocking() const {
  if (subchecks.empty()) return true;
  return std::any_of(subchecks.begin(), subchecks.end(),
                     [](const SubCheck& s) { return !s.passed && !s.known_issue; });
}

std::string CheckResult::failure_summary() const {
  std::string out;
  for (const auto& s : subchecks) {
    if (s.passed) continue;
    if (!out.empty()) out += "; ";
    out += s.name + " (" + s.detail + ")";
    if (s.known_issue) out += " [known issue: " + *s.known_issue + "]";
  }
  return out;
}

std::vector<CheckResult> run_checks(const VerificationOptions& options) {
  std::vector<CheckResult> results;
  for (const auto& c : criteria()) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), c.id) == options.only.end()) {
      continue;
    }
    // Each criterion gets its own stream so subsets reproduce the full run.
    Rng gen(options.seed + static_cast<std::uint64_t>(c.id));
    CheckResult r;
    r.id = c.id;
    r.title = c.title;
    const auto start = std::chrono::steady_clock::now();
    try {
      r.subchecks = c.run(gen);
    } catch (const std::exception& e) {
      r.subchecks.push_back(make_check("evaluation", false, std::string("exception: ") + e.what()));
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0.0) {
      r.subchecks.push_back(make_check("runtime", r.seconds < c.time_limit,
                                       fmt::format("limit {} s", c.time_limit)));
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::string format_check(const CheckResult& result, bool with_timing) {
  const auto passed = std::count_if(result.subchecks.begin(), result.subchecks.end(),
                                    [](const SubCheck& s) { return s.passed; });
  std::string line = fmt::format("[{}] {} {}: {}/{} sub-checks", result.passed() ? "PASS" : "FAIL", result.id,
                                 result.title, passed, result.subchecks.size());
  if (with_timing) line += fmt::format(" ({:.2f} s)", result.seconds);
  if (!result.passed()) line += "; failed: " + result.failure_summary();
  return line;
}

}  // namespace qnlchain
