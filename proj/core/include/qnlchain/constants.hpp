#pragma once

#include "qnlchain/potential.hpp"

namespace qnlchain {

/// Sign conditions on the next-nearest interaction used by most of the
/// stability and error estimates.
struct Hypotheses {
  bool dphi_2f_nonnegative;   // phi'(2F) >= 0
  bool d2phi_2f_nonpositive;  // phi''(2F) <= 0

  bool both() const noexcept { return dphi_2f_nonnegative && d2phi_2f_nonpositive; }
};

Hypotheses check_hypotheses(const PairPotential& phi, double strain);

/// Stability constants and modeling-error constants at strain F on an
/// N-site chain.
struct BoundConstants {
  double c_phi;        // Lipschitz constant for the next-nearest strain mismatch
  double c_kappa;      // ghost-force constant
  double c1, c2;       // circular Cauchy-Born modeling error
  double c3;           // coupled-model interface terms
  double c_interface;  // coupled-model ghost force at the interface
  double gamma1;       // phi''(F) + 4 phi''(2F)
  double gamma2;       // min(gamma1, (phi'(F) + 2 phi'(2F)) / F)
  double gamma3;       // gamma1
  double gamma4;       // min(gamma1, phi'(F) / F)
  double gamma_eps;    // gamma4 minus the eps-dependent circular correction
};

/// C_phi = F pi^2 * max over s in [2F cos(pi eps), 2F] of
/// max(|phi'''(s)|, |d/ds (phi'(s)/s)|), sampled on 1000 points with a 10%
/// safety factor.
double lipschitz_constant(const PairPotential& phi, double strain, int n);

BoundConstants bound_constants(const PairPotential& phi, double strain, int n);

}  // namespace qnlchain
