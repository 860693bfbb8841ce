#include "qnlchain/analysis.hpp"

#include "qnlchain/errors.hpp"
#include "qnlchain/numerics.hpp"
#include "qnlchain/parallel.hpp"
#include "qnlchain/stability.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace qnlchain {

using std::numbers::pi;

LoadCase LoadCase::zero() { return LoadCase(); }

LoadCase LoadCase::smooth_trig(int k1, int k2) {
  LoadCase c;
  c.profile_ = Profile::SmoothTrig;
  c.k1_ = k1;
  c.k2_ = k2;
  return c;
}

LoadCase LoadCase::custom(Field values) {
  LoadCase c;
  c.profile_ = Profile::Custom;
  c.values_ = std::move(values);
  return c;
}

LoadCase LoadCase::parse(std::string_view text) {
  if (text == "zero") return zero();
  constexpr std::string_view prefix = "trig:";
  if (text.starts_with(prefix)) {
    const std::string_view rest = text.substr(prefix.size());
    const auto comma = rest.find(',');
    int k1 = 0, k2 = 0;
    if (comma != std::string_view::npos) {
      const auto r1 = std::from_chars(rest.data(), rest.data() + comma, k1);
      const auto r2 = std::from_chars(rest.data() + comma + 1, rest.data() + rest.size(), k2);
      if (r1.ec == std::errc() && r1.ptr == rest.data() + comma && r2.ec == std::errc() &&
          r2.ptr == rest.data() + rest.size()) {
        return smooth_trig(k1, k2);
      }
    }
  }
  throw ArgumentError("unknown load '" + std::string(text) + "' (expected zero or trig:<k1>,<k2>)");
}

Field LoadCase::realize(int n, bool constrained) const {
  Field f = Field::Zero(n, 2);
  switch (profile_) {
    case Profile::Zero:
      break;
    case Profile::SmoothTrig:
      for (int l = 0; l < n; ++l) {
        f(l, 0) = std::sin(2.0 * pi * k1_ * l / n);
        f(l, 1) = std::cos(2.0 * pi * k2_ * l / n);
      }
      break;
    case Profile::Custom:
      if (values_.rows() != n) throw ArgumentError("custom load has a different number of sites");
      f = values_;
      break;
  }
  if (constrained) f.col(1).setZero();
  return f.rowwise() - f.colwise().mean();
}

std::string LoadCase::describe() const {
  switch (profile_) {
    case Profile::Zero: return "zero";
    case Profile::SmoothTrig: return fmt::format("trig:{},{}", k1_, k2_);
    default: return "custom";
  }
}

LinearizedSolution solve_linearized(const ModelSpec& model, const ChainGeometry& y, const Field& load,
                                    bool constrained, SolveOptions options) {
  const int n = y.size();
  if (load.rows() != n) throw ArgumentError("load size does not match chain");
  const SecondVariation sv = second_variation(model, y, constrained);
  const Field g = first_variation(model, y);
  const Eigen::VectorXd rhs = sv.basis.restrict(flatten(load - g)) / static_cast<double>(n);
  const Eigen::MatrixXd& h = sv.reduced.matrix();

  Eigen::VectorXd c;
  bool spd = true;
  Eigen::LLT<Eigen::MatrixXd> llt(h);
  if (llt.info() == Eigen::Success) {
    c = llt.solve(rhs);
    c += llt.solve(rhs - h * c);
  } else {
    spd = false;
    if (options.require_positive_definite) {
      const double inf = stability_numeric(model, y, constrained).value;
      throw StabilityError(fmt::format("second variation is not positive definite (numeric inf {})", inf), inf);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(h);
    c = lu.solve(rhs);
    c += lu.solve(rhs - h * c);
  }
  const double scale = std::max(rhs.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double residual = (h * c - rhs).cwiseAbs().maxCoeff() / scale;
  return LinearizedSolution{sv.basis.expand_field(c), spd, residual};
}

LinearizedSolution solve_linearized(const ModelSpec& model, const ChainGeometry& y, const LoadCase& load,
                                    bool constrained, SolveOptions options) {
  return solve_linearized(model, y, load.realize(y.size(), constrained), constrained, options);
}

ModelingError modeling_error(const ModelSpec& model, const ChainGeometry& y, const Field& u_a, bool constrained) {
  if (model.kind == ModelKind::Atomistic) {
    throw ArgumentError("modeling error is measured against the atomistic model");
  }
  const int n = y.size();
  if (u_a.rows() != n) throw ArgumentError("displacement size does not match chain");
  const ModelSpec reference = model.reference();
  const Eigen::MatrixXd dh = hessian_full(model, y) - hessian_full(reference, y);
  Field tau = first_variation(model, y) - first_variation(reference, y) +
              unflatten(dh * flatten(u_a)) * static_cast<double>(n);
  if (constrained) tau.col(1).setZero();
  const double norm = negative_norm(tau);
  return ModelingError{std::move(tau), norm};
}

double duality_defect(const ModelSpec& model, const ChainGeometry& y, const Field& u_a, const Field& u_model,
                      const Field& tau, const Field& v) {
  const Eigen::MatrixXd h = hessian_full(model, y);
  const double lhs = inner(tau, v);
  const double rhs = flatten(u_a - u_model).dot(h * flatten(v));
  return std::abs(lhs - rhs);
}

DerivativeNorms derivative_norms(const Field& u, std::optional<int> k) {
  const int n = static_cast<int>(u.rows());
  const Field u1 = backward_diff(u, 1);
  const Field u2 = backward_diff(u1, 1);
  const Field u3 = backward_diff(u2, 1);
  DerivativeNorms out;
  out.d1 = l2eps_norm(u1);
  out.d2 = l2eps_norm(u2);
  out.d3 = l2eps_norm(u3);
  if (!k) return out;
  const int kk = InterfacePartition(n, *k).k();
  const double eps = 1.0 / n;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (int l = kk + 2; l <= n; ++l) {
    s1 += u1.row(wrap_index(l, n)).squaredNorm();
    s2 += u2.row(wrap_index(l, n)).squaredNorm();
    s3 += u3.row(wrap_index(l + 1, n)).squaredNorm();
  }
  out.cont1 = std::sqrt(eps * s1);
  out.cont2 = std::sqrt(eps * s2);
  out.cont3 = std::sqrt(eps * s3);
  out.iface1 = std::sqrt(eps * (u1.row(wrap_index(1, n)).squaredNorm() + u1.row(wrap_index(kk + 1, n)).squaredNorm()));
  out.iface2 = std::sqrt(eps * (u2.row(wrap_index(1, n)).squaredNorm() + u2.row(wrap_index(kk + 2, n)).squaredNorm()));
  return out;
}

TheoremBounds theorem_bounds(const ModelSpec& model, ChainKind kind, bool constrained, double strain, int n,
                             const DerivativeNorms& norms) {
  if (constrained && kind != ChainKind::Linear) {
    throw ArgumentError("line-constrained displacements need a linear chain");
  }
  const PairPotential& phi = model.potential;
  const double eps = 1.0 / n;
  const double d1 = phi.d1(2.0 * strain);
  const double d2 = phi.d2(2.0 * strain);
  const double transverse = std::max(std::abs(d2), std::abs(d1 / (2.0 * strain)));
  const BoundConstants c = bound_constants(phi, strain, n);
  const Hypotheses hyp = check_hypotheses(phi, strain);

  TheoremBounds out{};
  out.hypotheses_met = true;
  switch (model.kind) {
    case ModelKind::Atomistic:
      throw ArgumentError("bounds compare an approximation against the atomistic model");
    case ModelKind::CauchyBorn:
      if (kind == ChainKind::Linear) {
        out.tau_bound = eps * eps * (constrained ? std::abs(d2) : transverse) * norms.d3;
        out.gamma = constrained ? c.gamma1 : c.gamma2;
      } else {
        out.tau_bound = c.c_kappa * eps * eps +
                        (c.c1 * eps * eps + c.c2 * std::pow(eps, 4)) * (norms.d3 + norms.d2 + norms.d1);
        out.gamma = c.gamma2;
      }
      break;
    case ModelKind::QuasiNonlocal:
      if (kind == ChainKind::Linear) {
        const double bracket = norms.iface2 + eps * norms.cont3;
        out.tau_bound = eps * (constrained ? std::abs(d2) : transverse) * bracket;
        out.gamma = constrained ? c.gamma3 : c.gamma4;
        out.hypotheses_met = constrained ? hyp.d2phi_2f_nonpositive : hyp.both();
      } else {
        out.tau_bound = (c.c1 * eps * eps + c.c2 * std::pow(eps, 4)) * (norms.cont1 + norms.cont2 + norms.cont3) +
                        (c.c3 * eps + 6.0 * c.c_phi * eps * eps + c.c_phi * std::pow(eps, 3)) *
                            (norms.iface1 + norms.iface2) +
                        c.c_kappa * eps * eps + c.c_interface * std::pow(eps, 1.5);
        out.gamma = c.gamma_eps;
        out.hypotheses_met = hyp.both() && c.gamma4 > 0.0;
      }
      break;
  }
  out.hypotheses_met = out.hypotheses_met && out.gamma > 0.0;
  if (out.hypotheses_met) out.error_bound = out.tau_bound / out.gamma;
  return out;
}

std::optional<double> SweepRecord::numeric_bound() const {
  if (gamma_numeric > 0.0) return tau_norm / gamma_numeric;
  return std::nullopt;
}

std::string SweepRecord::flag_string() const {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

namespace {

std::optional<double> rate_of(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) return std::nullopt;
  for (const auto& p : pairs) {
    if (!(p.second > 0.0)) return std::nullopt;
  }
  return fit_rate(pairs);
}

SweepRecord sweep_one(const SweepConfig& config, int n) {
  SweepRecord r;
  r.n = n;
  r.eps = 1.0 / n;
  r.alpha = config.model.bond_angle;
  const bool coupled = config.model.kind == ModelKind::QuasiNonlocal;
  if (coupled) r.k = config.model.interface_index(n);
  const ChainGeometry y =
      config.kind == ChainKind::Linear ? make_linear(n, config.strain) : make_circular(n, config.strain);
  const Field f = config.load.realize(n, config.constrained);
  const SolveOptions lenient{false};
  const LinearizedSolution ua = solve_linearized(config.model.reference(), y, f, config.constrained, lenient);
  const LinearizedSolution um = solve_linearized(config.model, y, f, config.constrained, lenient);
  if (!ua.positive_definite) r.flags.emplace_back("reference-indefinite");
  if (!um.positive_definite) r.flags.emplace_back("model-indefinite");
  r.error = l2eps_norm(backward_diff(Field(ua.u - um.u), 1));
  r.tau_norm = modeling_error(config.model, y, ua.u, config.constrained).dual_norm;
  r.gamma_numeric = stability_numeric(config.model, y, config.constrained).value;
  r.norms = derivative_norms(ua.u, coupled ? std::optional<int>(r.k) : std::nullopt);
  r.bounds = theorem_bounds(config.model, config.kind, config.constrained, config.strain, n, r.norms);
  if (!r.bounds.hypotheses_met) r.flags.emplace_back("hypotheses-not-met");
  if (r.bounds.error_bound && r.error > *r.bounds.error_bound) r.flags.emplace_back("bound-exceeded");
  return r;
}

}  // namespace

SweepResult error_sweep(const SweepConfig& config) {
  if (config.model.kind == ModelKind::Atomistic) {
    throw ArgumentError("sweep compares an approximation against the atomistic model");
  }
  if (config.sizes.empty()) throw ArgumentError("sweep needs at least one chain size");
  std::vector<int> sizes = config.sizes;
  std::sort(sizes.begin(), sizes.end());
  std::vector<SweepRecord> records(sizes.size());
  parallel_for(sizes.size(), [&](std::size_t i) {
    try {
      records[i] = sweep_one(config, sizes[i]);
    } catch (const std::exception& e) {
      SweepRecord r;
      r.n = sizes[i];
      r.eps = 1.0 / sizes[i];
      r.alpha = config.model.bond_angle;
      r.error = std::numeric_limits<double>::quiet_NaN();
      r.tau_norm = std::numeric_limits<double>::quiet_NaN();
      r.flags.push_back(std::string("failed: ") + e.what());
      records[i] = std::move(r);
    }
  });
  SweepResult out;
  std::vector<std::pair<double, double>> err, tau;
  for (auto& r : records) {
    if (std::isfinite(r.error)) {
      err.emplace_back(r.eps, r.error);
      tau.emplace_back(r.eps, r.tau_norm);
    }
    r.rate_so_far = rate_of(err);
  }
  out.rate = rate_of(err);
  out.tau_rate = rate_of(tau);
  out.records = std::move(records);
  return out;
}

GhostSweep ghost_sweep(const ModelSpec& model, ChainKind kind, double strain, const std::vector<int>& sizes) {
  std::vector<int> sorted = sizes;
  std::sort(sorted.begin(), sorted.end());
  GhostSweep out;
  out.records.resize(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t i) {
    const int n = sorted[i];
    const ChainGeometry y = kind == ChainKind::Linear ? make_linear(n, strain) : make_circular(n, strain);
    const double eps = 1.0 / n;
    GhostRecord r{n, eps, ghost_force(model, y).dual_norm, std::nullopt};
    if (kind == ChainKind::Circular) {
      const BoundConstants c = bound_constants(model.potential, strain, n);
      double b = c.c_kappa * eps * eps;
      if (model.kind == ModelKind::QuasiNonlocal) b += c.c_interface * std::pow(eps, 1.5);
      r.bound = b;
    }
    out.records[i] = r;
  });
  std::vector<std::pair<double, double>> pairs;
  for (const auto& r : out.records) pairs.emplace_back(r.eps, r.norm);
  out.rate = rate_of(pairs);
  return out;
}

}  // namespace qnlchain
