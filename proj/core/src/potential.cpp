#include "qnlchain/potential.hpp"

#include "qnlchain/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <string>

namespace qnlchain {

namespace {

double lennard_jones(double r, int order) {
  const double i6 = std::pow(r, -6);
  const double i12 = i6 * i6;
  switch (order) {
    case 0: return i12 - 2.0 * i6;
    case 1: return (-12.0 * i12 + 12.0 * i6) / r;
    case 2: return (156.0 * i12 - 84.0 * i6) / (r * r);
    default: return (-2184.0 * i12 + 672.0 * i6) / (r * r * r);
  }
}

double morse(double r, double a, int order) {
  const double e1 = std::exp(-a * (r - 1.0));
  const double e2 = e1 * e1;
  switch (order) {
    case 0: return e2 - 2.0 * e1;
    case 1: return -2.0 * a * e2 + 2.0 * a * e1;
    case 2: return 4.0 * a * a * e2 - 2.0 * a * a * e1;
    default: return -8.0 * a * a * a * e2 + 2.0 * a * a * a * e1;
  }
}

}  // namespace

PairPotential PairPotential::lennard_jones() { return PairPotential(PotentialFamily::LennardJones, 0.0); }

PairPotential PairPotential::morse(double stiffness) {
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
    throw ArgumentError("Morse stiffness must be positive and finite");
  }
  return PairPotential(PotentialFamily::Morse, stiffness);
}

PairPotential PairPotential::custom(std::string name, Derivatives derivatives) {
  for (const auto& d : derivatives) {
    if (!d) throw ArgumentError("custom potential needs all four derivatives");
  }
  PairPotential p(PotentialFamily::Custom, 0.0);
  p.name_ = std::move(name);
  p.custom_ = std::move(derivatives);
  return p;
}

PairPotential PairPotential::parse(std::string_view spec) {
  if (spec == "lj") return lennard_jones();
  constexpr std::string_view prefix = "morse:a=";
  if (spec.starts_with(prefix)) {
    const std::string_view num = spec.substr(prefix.size());
    double a = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), a);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw ArgumentError("bad Morse stiffness in '" + std::string(spec) + "'");
    }
    return morse(a);
  }
  throw ArgumentError("unknown potential '" + std::string(spec) + "' (expected lj or morse:a=<value>)");
}

double PairPotential::eval(double r, int order) const {
  if (order < 0 || order > 3) throw ArgumentError("derivative order must be 0..3");
  if (!(r > 0.0)) throw DomainError(fmt::format("pair distance must be positive, got {}", r));
  switch (family_) {
    case PotentialFamily::LennardJones: return qnlchain::lennard_jones(r, order);
    case PotentialFamily::Morse: return qnlchain::morse(r, stiffness_, order);
    default: return custom_[static_cast<std::size_t>(order)](r);
  }
}

std::string PairPotential::describe() const {
  switch (family_) {
    case PotentialFamily::LennardJones: return "lj";
    case PotentialFamily::Morse: return fmt::format("morse:a={}", stiffness_);
    default: return "custom:" + name_;
  }
}

double fd_consistency(const PairPotential& potential, double r, double h) {
  if (!(h > 0.0)) throw ArgumentError("finite-difference step must be positive");
  if (!(r - 3.0 * h > 0.0)) throw ArgumentError("finite-difference stencil leaves (0, inf)");
  double worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    const double fd = (potential.eval(r + h, k - 1) - potential.eval(r - h, k - 1)) / (2.0 * h);
    const double exact = potential.eval(r, k);
    // Scale of a k-th derivative near r, so that zeros of phi^(k) do not blow up the ratio.
    const double scale = std::max({std::abs(exact), std::abs(potential.eval(r, k - 1)) / r, 1e-300});
    worst = std::max(worst, std::abs(fd - exact) / scale);
  }
  return worst;
}

}  // namespace qnlchain
