#pragma once

#include "qnlchain/chain.hpp"
#include "qnlchain/constants.hpp"
#include "qnlchain/models.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qnlchain {

enum class Branch { Tension, Buckling };

const char* to_string(Branch branch);
Branch branch_from_string(const std::string& name);

/// Closed-form stability value of the uniform chain for a model.
///
/// `value` is the leading-order expression min(tension, buckling); `order`
/// is 0 when that expression is the exact infimum at finite N, otherwise
/// the power of eps in the stated correction. Where an explicit one-sided
/// estimate exists it is returned in `lower_bound`.
struct AnalyticStability {
  double value = 0.0;
  double tension = 0.0;
  double buckling = 0.0;
  Branch branch = Branch::Tension;
  int order = 0;
  bool hypotheses_met = true;
  bool parity_caveat = false;  // odd N: the buckling branch carries an O(eps) term
  std::optional<double> lower_bound;

  bool exact() const noexcept { return order == 0 && !parity_caveat; }
};

/// Bond-angle buckling shift 2 alpha cos(beta)/F^2 with beta = 0 (linear)
/// or 2 pi / N (circular).
double bond_angle_shift(double alpha, ChainKind kind, int n, double strain);

AnalyticStability stability_analytic(const ModelSpec& model, ChainKind kind, int n, double strain,
                                     bool constrained);

struct NumericStability {
  double value;             // inf of d^2E[u,u] / ||u'||^2
  Eigen::VectorXd coords;   // minimizer in the mean-zero basis, G-normalized
};

NumericStability stability_numeric(const ModelSpec& model, const ChainGeometry& y, bool constrained);

struct StabilityReport {
  std::string model;
  ChainKind kind;
  int n;
  double strain;
  bool constrained;
  double alpha;
  double numeric_inf;
  AnalyticStability analytic;
  double gap;  // numeric_inf - analytic.value

  bool even() const noexcept { return n % 2 == 0; }
  /// Equality checks apply when the value is exact and the hypotheses hold.
  bool equality_applies() const noexcept { return analytic.exact() && analytic.hypotheses_met; }
  bool equality_holds(double rel_tol = 1e-9) const;
  bool lower_bound_holds(double tol = 1e-9) const;
  /// Semicolon-separated flags, empty when nothing to report.
  std::string flags() const;
};

StabilityReport stability_report(const ModelSpec& model, ChainKind kind, int n, double strain,
                                 bool constrained);

/// Reports over a strain grid, evaluated in parallel, in input order.
std::vector<StabilityReport> stability_scan(const ModelSpec& model, ChainKind kind, int n,
                                            const std::vector<double>& strains, bool constrained);

/// Default brackets straddle the minimum at r = 1.
std::pair<double, double> default_bracket(Branch branch);

/// Root of the leading-order branch expression, or nothing when the
/// bracket holds no sign change.
std::optional<double> critical_strain(const ModelSpec& model, Branch branch, ChainKind kind, int n,
                                      std::optional<std::pair<double, double>> bracket = std::nullopt);

struct CircularEquilibrium {
  double strain;
  double radius;
  double residual;  // max |first variation| at the equilibrium chain
};

/// Strain and radius of the force-free uniform circle for the atomistic or
/// Cauchy-Born model (pair interactions only; the bond-angle term is
/// critical on any uniform circle).
CircularEquilibrium circular_equilibrium(const ModelSpec& model, int n,
                                         std::pair<double, double> bracket = {0.9, 1.1});

/// Alternating transverse (linear) or alternating radial (circular) test
/// displacement, mean-zero.
Field zigzag_field(const ChainGeometry& y);

struct ModeCheck {
  double correlation;   // cosine of the principal angle, G inner product
  double eigenvalue;
  int cluster_size;     // multiplicity of the lowest eigenvalue
  bool branch_active;   // buckling branch strictly below tension branch
};

/// Compares the lowest eigenspace of the second variation with the zig-zag
/// field.
ModeCheck buckling_mode_check(const ModelSpec& model, const ChainGeometry& y);

}  // namespace qnlchain
