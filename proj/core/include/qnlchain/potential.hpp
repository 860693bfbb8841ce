#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>

namespace qnlchain {

enum class PotentialFamily { LennardJones, Morse, Custom };

/// Smooth pair interaction phi(r) on (0, inf) with closed-form derivatives
/// up to third order.
///
/// The built-in families are normalized to a minimum of depth -1 at r = 1:
///   Lennard-Jones  phi(r) = r^-12 - 2 r^-6
///   Morse          phi(r) = exp(-2a(r-1)) - 2 exp(-a(r-1)),  a > 0
///
/// Instances are immutable and cheap to copy.
class PairPotential {
 public:
  using Derivatives = std::array<std::function<double(double)>, 4>;

  static PairPotential lennard_jones();
  static PairPotential morse(double stiffness);
  /// Code-level extension point; `derivatives[k]` must return d^k phi / dr^k.
  static PairPotential custom(std::string name, Derivatives derivatives);

  /// Parses the CLI form: "lj" or "morse:a=<float>".
  static PairPotential parse(std::string_view spec);

  /// d^order phi / dr^order at r. Throws DomainError for r <= 0 and
  /// ArgumentError for order outside 0..3.
  double eval(double r, int order) const;

  double operator()(double r) const { return eval(r, 0); }
  double d1(double r) const { return eval(r, 1); }
  double d2(double r) const { return eval(r, 2); }
  double d3(double r) const { return eval(r, 3); }

  PotentialFamily family() const noexcept { return family_; }
  double stiffness() const noexcept { return stiffness_; }

  /// Canonical spec string; parse(describe()) reproduces the potential for
  /// the built-in families.
  std::string describe() const;

 private:
  PairPotential(PotentialFamily family, double stiffness)
      : family_(family), stiffness_(stiffness) {}

  PotentialFamily family_ = PotentialFamily::LennardJones;
  double stiffness_ = 0.0;
  std::string name_;
  Derivatives custom_;
};

/// Largest relative discrepancy between each analytic derivative of order
/// 1..3 and the central difference of the next-lower order with step h.
/// Requires r - 3h > 0.
double fd_consistency(const PairPotential& potential, double r, double h);

}  // namespace qnlchain
