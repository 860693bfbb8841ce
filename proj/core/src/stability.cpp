#include "qnlchain/stability.hpp"

#include "qnlchain/errors.hpp"
#include "qnlchain/numerics.hpp"
#include "qnlchain/parallel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace qnlchain {

using std::numbers::pi;

const char* to_string(Branch branch) { return branch == Branch::Tension ? "tension" : "buckling"; }

Branch branch_from_string(const std::string& name) {
  if (name == "tension") return Branch::Tension;
  if (name == "buckling") return Branch::Buckling;
  throw ArgumentError("unknown branch '" + name + "' (expected tension or buckling)");
}

double bond_angle_shift(double alpha, ChainKind kind, int n, double strain) {
  const double beta = kind == ChainKind::Linear ? 0.0 : 2.0 * pi / n;
  return 2.0 * alpha * std::cos(beta) / (strain * strain);
}

AnalyticStability stability_analytic(const ModelSpec& model, ChainKind kind, int n, double strain,
                                     bool constrained) {
  if (n < 4) throw ArgumentError("chain needs at least 4 atoms");
  if (!(strain > 0.0)) throw ArgumentError("strain must be positive");
  if (constrained && kind != ChainKind::Linear) {
    throw ArgumentError("line-constrained displacements need a linear chain");
  }
  const PairPotential& phi = model.potential;
  const double f = strain;
  const double eps = 1.0 / n;
  const double d2 = phi.d2(2.0 * f);
  const double gamma1 = phi.d2(f) + 4.0 * d2;
  const double atomistic_buckling = phi.d1(f) / f;
  const Hypotheses hyp = check_hypotheses(phi, f);
  const bool odd = n % 2 == 1;
  const bool pair_only = model.bond_angle == 0.0;

  AnalyticStability out;
  out.tension = gamma1;
  if (constrained) {
    out.buckling = std::numeric_limits<double>::infinity();
    switch (model.kind) {
      case ModelKind::CauchyBorn:
        break;
      case ModelKind::Atomistic: {
        // gamma1 - eps^2 mu_eps^2 phi''(2F), mu_eps = 2 sin(pi eps)/eps
        const double s = 2.0 * std::sin(pi * eps);
        out.tension = gamma1 - s * s * d2;
        out.hypotheses_met = hyp.d2phi_2f_nonpositive;
        break;
      }
      case ModelKind::QuasiNonlocal:
        out.hypotheses_met = hyp.d2phi_2f_nonpositive;
        break;
    }
    out.value = out.tension;
    out.branch = Branch::Tension;
    return out;
  }

  const double shift = bond_angle_shift(model.bond_angle, kind, n, f);
  const BoundConstants c = bound_constants(phi, f, n);
  const double pair_floor = std::min(gamma1, atomistic_buckling);
  switch (model.kind) {
    case ModelKind::CauchyBorn:
      out.buckling = (phi.d1(f) + 2.0 * phi.d1(2.0 * f)) / f + shift;
      out.parity_caveat = kind == ChainKind::Circular && odd;
      break;
    case ModelKind::Atomistic:
      out.buckling = atomistic_buckling + shift;
      out.order = 2;
      out.parity_caveat = odd;
      out.hypotheses_met = hyp.both();
      if (out.hypotheses_met && pair_only) {
        out.lower_bound = kind == ChainKind::Linear
                              ? pair_floor
                              : pair_floor - 4.0 * pi * pi * eps * eps * std::abs(d2) - 4.0 * eps * eps * c.c_phi;
      }
      break;
    case ModelKind::QuasiNonlocal:
      out.buckling = atomistic_buckling + shift;
      out.order = 1;
      out.hypotheses_met = hyp.both();
      if (out.hypotheses_met && pair_only) {
        out.lower_bound = kind == ChainKind::Linear ? pair_floor : c.gamma_eps;
      }
      break;
  }
  out.branch = out.tension <= out.buckling ? Branch::Tension : Branch::Buckling;
  out.value = std::min(out.tension, out.buckling);
  return out;
}

NumericStability stability_numeric(const ModelSpec& model, const ChainGeometry& y, bool constrained) {
  const SecondVariation sv = second_variation(model, y, constrained);
  const DenseSymmetric g(sv.basis.compress(derivative_gram(y.size())));
  EigenPair pair = eig_smallest(sv.reduced, g);
  return NumericStability{pair.value, std::move(pair.vector)};
}

bool StabilityReport::equality_holds(double rel_tol) const {
  return std::abs(gap) <= rel_tol * std::max(1.0, std::abs(analytic.value));
}

bool StabilityReport::lower_bound_holds(double tol) const {
  return !analytic.lower_bound || numeric_inf >= *analytic.lower_bound - tol * std::max(1.0, std::abs(numeric_inf));
}

std::string StabilityReport::flags() const {
  std::string out;
  auto add = [&out](const char* flag) {
    if (!out.empty()) out += ';';
    out += flag;
  };
  if (!analytic.hypotheses_met) add("hypotheses-not-met");
  if (analytic.parity_caveat) add("odd-N");
  if (equality_applies() && !equality_holds()) add("equality-mismatch");
  if (!lower_bound_holds()) add("below-lower-bound");
  if (numeric_inf <= 0.0) add("unstable");
  return out;
}

StabilityReport stability_report(const ModelSpec& model, ChainKind kind, int n, double strain,
                                 bool constrained) {
  const ChainGeometry y = kind == ChainKind::Linear ? make_linear(n, strain) : make_circular(n, strain);
  const AnalyticStability analytic = stability_analytic(model, kind, n, strain, constrained);
  const double numeric = stability_numeric(model, y, constrained).value;
  return StabilityReport{model.name(), kind,    n,        strain, constrained, model.bond_angle,
                         numeric,      analytic, numeric - analytic.value};
}

std::vector<StabilityReport> stability_scan(const ModelSpec& model, ChainKind kind, int n,
                                            const std::vector<double>& strains, bool constrained) {
  std::vector<std::optional<StabilityReport>> slots(strains.size());
  parallel_for(strains.size(), [&](std::size_t i) {
    slots[i] = stability_report(model, kind, n, strains[i], constrained);
  });
  std::vector<StabilityReport> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::pair<double, double> default_bracket(Branch branch) {
  return branch == Branch::Buckling ? std::pair{0.5, 1.0} : std::pair{1.0, 1.5};
}

std::optional<double> critical_strain(const ModelSpec& model, Branch branch, ChainKind kind, int n,
                                      std::optional<std::pair<double, double>> bracket) {
  const auto [a, b] = bracket.value_or(default_bracket(branch));
  if (!(a > 0.0)) throw ArgumentError("strain bracket must be positive");
  const PairPotential& phi = model.potential;
  std::function<double(double)> expr;
  if (branch == Branch::Tension) {
    expr = [&phi](double f) { return phi.d2(f) + 4.0 * phi.d2(2.0 * f); };
  } else {
    const bool local = model.kind == ModelKind::CauchyBorn;
    expr = [&phi, &model, kind, n, local](double f) {
      const double pair = local ? (phi.d1(f) + 2.0 * phi.d1(2.0 * f)) / f : phi.d1(f) / f;
      return pair + bond_angle_shift(model.bond_angle, kind, n, f);
    };
  }
  try {
    return find_root(expr, a, b);
  } catch (const NoRootError&) {
    return std::nullopt;
  }
}

CircularEquilibrium circular_equilibrium(const ModelSpec& model, int n, std::pair<double, double> bracket) {
  if (n < 4) throw ArgumentError("chain needs at least 4 atoms");
  const PairPotential& phi = model.potential;
  std::function<double(double)> balance;
  switch (model.kind) {
    case ModelKind::CauchyBorn:
      balance = [&phi](double f) { return phi.d1(f) + 2.0 * phi.d1(2.0 * f); };
      break;
    case ModelKind::Atomistic: {
      const double c = std::cos(pi / n);
      balance = [&phi, c](double f) { return phi.d1(f) + 2.0 * c * phi.d1(2.0 * f * c); };
      break;
    }
    default:
      throw ArgumentError("circular equilibrium is defined for the atomistic and Cauchy-Born models");
  }
  const double f = find_root(balance, bracket.first, bracket.second);
  const ChainGeometry y = make_circular(n, f);
  const double residual = first_variation(model, y).cwiseAbs().maxCoeff();
  return CircularEquilibrium{f, y.radius(), residual};
}

Field zigzag_field(const ChainGeometry& y) {
  const int n = y.size();
  Field z = Field::Zero(n, 2);
  for (int l = 1; l < n; ++l) {
    const double sign = l % 2 == 0 ? 1.0 : -1.0;
    if (y.kind() == ChainKind::Linear) {
      z(l, 1) = sign;
    } else {
      z.row(l) = sign * y.positions().row(l);
    }
  }
  // Atom N closes the period; for odd N it absorbs the imbalance.
  if (n % 2 == 0) {
    z.row(0) = y.kind() == ChainKind::Linear ? Eigen::RowVector2d(0.0, 1.0) : Eigen::RowVector2d(y.positions().row(0));
  } else {
    z.row(0) = -z.bottomRows(n - 1).colwise().sum();
  }
  return z.rowwise() - z.colwise().mean();
}

ModeCheck buckling_mode_check(const ModelSpec& model, const ChainGeometry& y) {
  const SecondVariation sv = second_variation(model, y, false);
  const DenseSymmetric g(sv.basis.compress(derivative_gram(y.size())));
  const EigenCluster cluster = eig_lowest_cluster(sv.reduced, g, 1e-8);
  const Eigen::VectorXd c = sv.basis.restrict(flatten(zigzag_field(y)));
  const Eigen::VectorXd gc = g.matrix() * c;
  const double along = (cluster.vectors.transpose() * gc).norm();
  const double correlation = along / std::sqrt(c.dot(gc));
  const AnalyticStability a = stability_analytic(model, y.kind(), y.size(), y.strain(), false);
  return ModeCheck{std::min(1.0, correlation), cluster.values(0), static_cast<int>(cluster.values.size()),
                   a.buckling < a.tension};
}

}  // namespace qnlchain
