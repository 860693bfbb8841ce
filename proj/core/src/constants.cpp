#include "qnlchain/constants.hpp"

#include "qnlchain/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qnlchain {

using std::numbers::pi;

Hypotheses check_hypotheses(const PairPotential& phi, double strain) {
  return {phi.d1(2.0 * strain) >= 0.0, phi.d2(2.0 * strain) <= 0.0};
}

double lipschitz_constant(const PairPotential& phi, double strain, int n) {
  if (n < 4) throw ArgumentError("chain needs at least 4 atoms");
  if (!(strain > 0.0)) throw ArgumentError("strain must be positive");
  constexpr int samples = 1000;
  constexpr double safety = 1.1;
  const double hi = 2.0 * strain;
  const double lo = hi * std::cos(pi / n);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = lo + (hi - lo) * i / (samples - 1);
    const double d1 = phi.d1(s);
    const double d2 = phi.d2(s);
    const double d3 = phi.d3(s);
    worst = std::max({worst, std::abs(d3), std::abs(d2 / s - d1 / (s * s))});
  }
  return safety * strain * pi * pi * worst;
}

BoundConstants bound_constants(const PairPotential& phi, double strain, int n) {
  const double f = strain;
  const double eps = 1.0 / n;
  const double c_phi = lipschitz_constant(phi, f, n);
  const double d1f = phi.d1(f);
  const double d2f = phi.d2(f);
  const double d1 = phi.d1(2.0 * f);
  const double d2 = phi.d2(2.0 * f);
  const double ratio = d1 / (2.0 * f);

  BoundConstants c{};
  c.c_phi = c_phi;
  c.c_kappa = 4.0 * c_phi * (1.0 + pi * pi * eps * eps) * f + 2.0 * pi * pi * std::abs(d1);
  c.c1 = std::max({std::abs(d2), std::abs(ratio), 4.0 * pi * pi * std::abs(d2 - ratio) + 12.0 * c_phi});
  c.c2 = 4.0 * pi * c_phi;
  c.c3 = std::max({std::abs(d2), std::abs(ratio), 2.0 * pi * std::abs(d2 - ratio)});
  c.c_interface = std::sqrt(2.0) * (2.0 * eps * c_phi * (1.0 + pi * eps) * f + pi * std::abs(d1));
  c.gamma1 = d2f + 4.0 * d2;
  c.gamma2 = std::min(c.gamma1, (d1f + 2.0 * d1) / f);
  c.gamma3 = c.gamma1;
  c.gamma4 = std::min(c.gamma1, d1f / f);
  c.gamma_eps = c.gamma4 - eps * std::max(2.0 * pi * std::abs(d2) + 2.0 * eps * c_phi,
                                          4.0 * eps * (pi * pi + c_phi));
  return c;
}

}  // namespace qnlchain
