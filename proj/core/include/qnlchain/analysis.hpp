#pragma once

#include "qnlchain/chain.hpp"
#include "qnlchain/constants.hpp"
#include "qnlchain/models.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qnlchain {

/// External load profile sampled on an N-site chain.
class LoadCase {
 public:
  enum class Profile { Zero, SmoothTrig, Custom };

  static LoadCase zero();
  /// f_l = (sin(2 pi k1 l eps), cos(2 pi k2 l eps)) minus its mean.
  static LoadCase smooth_trig(int k1 = 1, int k2 = 2);
  /// Fixed field; realize() only accepts its own size.
  static LoadCase custom(Field values);
  /// "zero" or "trig:<k1>,<k2>".
  static LoadCase parse(std::string_view text);

  Profile profile() const noexcept { return profile_; }
  /// Mean-zero field; second components dropped when constrained.
  Field realize(int n, bool constrained) const;
  std::string describe() const;

 private:
  Profile profile_ = Profile::Zero;
  int k1_ = 1;
  int k2_ = 2;
  Field values_;
};

struct SolveOptions {
  /// Throw StabilityError instead of solving an indefinite system.
  bool require_positive_definite = true;
};

struct LinearizedSolution {
  Field u;
  bool positive_definite;
  double residual;  // max |Q^T (grad E + H u - eps f)| relative to the right-hand side
};

/// Solves dE(y)[v] + d^2E(y)[u, v] = <f, v> for all mean-zero v (optionally
/// restricted to the chain direction).
LinearizedSolution solve_linearized(const ModelSpec& model, const ChainGeometry& y, const Field& load,
                                    bool constrained, SolveOptions options = {});
LinearizedSolution solve_linearized(const ModelSpec& model, const ChainGeometry& y, const LoadCase& load,
                                    bool constrained, SolveOptions options = {});

struct ModelingError {
  Field tau;
  double dual_norm;
};

/// Residual of the atomistic solution u_a in the model's linearized
/// equation: (dE_model - dE_a)(y) + (d^2E_model - d^2E_a)(y) u_a, with the
/// same bond-angle stiffness on both sides.
ModelingError modeling_error(const ModelSpec& model, const ChainGeometry& y, const Field& u_a, bool constrained);

/// |<tau, v> - d^2E_model[u_a - u_model, v]|.
double duality_defect(const ModelSpec& model, const ChainGeometry& y, const Field& u_a, const Field& u_model,
                      const Field& tau, const Field& v);

/// Norms of difference quotients of u entering the error estimates.
struct DerivativeNorms {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;           // ||u'||, ||u''||, ||u'''||
  double cont1 = 0.0, cont2 = 0.0, cont3 = 0.0;  // sums over l = K+2..N of |u'_l|, |u''_l|, |u'''_{l+1}|
  double iface1 = 0.0, iface2 = 0.0;             // bonds {1, K+1} for u', {1, K+2} for u''
};

/// `k` selects the partial sums; without it only the full norms are set.
DerivativeNorms derivative_norms(const Field& u, std::optional<int> k = std::nullopt);

struct TheoremBounds {
  double tau_bound;                   // modeling-error estimate
  std::optional<double> error_bound;  // tau_bound / gamma when the hypotheses hold
  double gamma;                       // stability constant used in the error bound
  bool hypotheses_met;
};

TheoremBounds theorem_bounds(const ModelSpec& model, ChainKind kind, bool constrained, double strain, int n,
                             const DerivativeNorms& norms);

struct SweepConfig {
  ModelSpec model = ModelSpec::cauchy_born();
  ChainKind kind = ChainKind::Circular;
  double strain = 1.0;
  bool constrained = false;
  LoadCase load = LoadCase::smooth_trig(1, 2);
  std::vector<int> sizes = {32, 64, 128, 256, 512};
};

struct SweepRecord {
  int n = 0;
  double eps = 0.0;
  int k = 0;  // interface index, 0 for Cauchy-Born
  double alpha = 0.0;
  double error = 0.0;      // ||(u_a - u_model)'||
  double tau_norm = 0.0;   // ||tau||_*
  TheoremBounds bounds{};
  double gamma_numeric = 0.0;
  std::optional<double> rate_so_far;
  DerivativeNorms norms;
  std::vector<std::string> flags;

  /// ||tau||_* / gamma_numeric when the model is stable.
  std::optional<double> numeric_bound() const;
  std::string flag_string() const;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  std::optional<double> rate;      // fitted slope of error vs eps
  std::optional<double> tau_rate;  // fitted slope of ||tau||_* vs eps
};

/// Per-N linearized solves of the atomistic and approximating models,
/// evaluated in parallel and merged by N.
SweepResult error_sweep(const SweepConfig& config);

struct GhostRecord {
  int n;
  double eps;
  double norm;
  std::optional<double> bound;  // C_kappa eps^2 (+ C_interface eps^{3/2} for the coupled model)
};

struct GhostSweep {
  std::vector<GhostRecord> records;
  std::optional<double> rate;
};

GhostSweep ghost_sweep(const ModelSpec& model, ChainKind kind, double strain, const std::vector<int>& sizes);

}  // namespace qnlchain
