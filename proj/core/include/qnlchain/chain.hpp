#pragma once

#include <Eigen/Dense>

#include <string>
#include <utility>

namespace qnlchain {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// One planar vector per site; row (l mod N) holds site l.
using Field = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

inline int wrap_index(int l, int n) {
  const int r = l % n;
  return r < 0 ? r + n : r;
}

// Interleaved view (x0, y0, x1, y1, ...) of a field, and back.
Eigen::VectorXd flatten(const Field& f);
Field unflatten(const Eigen::VectorXd& v);

enum class ChainKind { Linear, Circular };

const char* to_string(ChainKind kind);
ChainKind chain_kind_from_string(const std::string& name);

struct Strains {
  double nearest;       // F1
  double next_nearest;  // F2, half the next-nearest distance over eps
};

struct Projections {
  Mat2 bond;       // onto y'_l
  Mat2 next_bond;  // onto y'_{l+1} + y'_l
};

/// Periodic planar chain with N atoms per period.
///
/// Atom l sits at position(l) = positions[l mod N] + floor(l / N) * shift,
/// so linear chains carry their period shift (F, 0) as metadata and circular
/// chains have zero shift. Bond l joins atoms l-1 and l.
class ChainGeometry {
 public:
  /// Atoms equally spaced along (1,0) with spacing F*eps.
  static ChainGeometry linear(int n, double strain);
  /// Regular polygon of radius F*eps / (2 sin(pi*eps)) centred at the origin.
  static ChainGeometry circular(int n, double strain);

  /// Same period and shift with positions moved by a periodic displacement.
  /// The result is no longer uniform.
  ChainGeometry displaced(const Field& u) const;

  ChainKind kind() const noexcept { return kind_; }
  int size() const noexcept { return n_; }
  double epsilon() const noexcept { return 1.0 / n_; }
  double strain() const noexcept { return strain_; }
  /// Zero for linear chains.
  double radius() const noexcept { return radius_; }
  bool is_uniform() const noexcept { return uniform_; }
  const Field& positions() const noexcept { return positions_; }
  const Vec2& period_shift() const noexcept { return shift_; }

  Vec2 position(int l) const;
  /// y'_l = (y_l - y_{l-1}) / eps.
  Vec2 bond(int l) const;
  /// y'_{l+1} + y'_l = (y_{l+1} - y_{l-1}) / eps.
  Vec2 next_bond(int l) const;

  /// (F1, F2). Requires a uniform chain.
  Strains strains() const;
  Projections projections(int l) const;
  /// Signed angle from y'_l to y'_{l+1}; positive is counterclockwise.
  double turning_angle(int l) const;

 private:
  ChainGeometry() = default;

  ChainKind kind_ = ChainKind::Linear;
  int n_ = 0;
  double strain_ = 0.0;
  double radius_ = 0.0;
  bool uniform_ = true;
  Field positions_;
  Vec2 shift_ = Vec2::Zero();
};

ChainGeometry make_linear(int n, double strain);
ChainGeometry make_circular(int n, double strain);

/// n-th backward difference of a periodic field, scaled by eps^-n with
/// eps = 1 / rows.
Field backward_diff(const Field& u, int order = 1);
/// Backward differences of the atom positions; the first difference sees
/// the period shift, higher ones are periodic.
Field backward_diff(const ChainGeometry& y, int order = 1);

/// <v, w> = eps * sum v_l . w_l
double inner(const Field& v, const Field& w);
double l2eps_norm(const Field& v);

/// Atomistic region {1..K}, continuum region {K+1..N}; bonds 1 and K+1 are
/// the interfacial bonds.
class InterfacePartition {
 public:
  InterfacePartition(int n, int k);

  int size() const noexcept { return n_; }
  int k() const noexcept { return k_; }
  /// Label l in 1..N (taken modulo N).
  bool in_atomistic(int l) const;
  bool is_interface(int l) const;

 private:
  int n_;
  int k_;
};

struct Seminorms {
  double atomistic;  // over bonds 2..K
  double continuum;  // over bonds K+2..N
  double interface;  // over bonds 1 and K+1
};

/// Partial l2_eps norms of a difference field. The three squares add up to
/// the squared full norm.
Seminorms seminorms(const Field& du, const InterfacePartition& partition);

/// Periodic displacement with vanishing mean; optionally restricted to the
/// chain direction (zero second component).
class DisplacementField {
 public:
  /// Validates mean-zero (and the constraint) to a tolerance relative to
  /// the field size.
  DisplacementField(Field values, bool constrained, double tol = 1e-10);
  /// Removes the mean (and the second component if constrained).
  static DisplacementField project(const Field& values, bool constrained);

  const Field& values() const noexcept { return values_; }
  bool constrained() const noexcept { return constrained_; }
  int size() const noexcept { return static_cast<int>(values_.rows()); }

 private:
  Field values_;
  bool constrained_;
};

/// Orthonormal basis of the mean-zero subspace, 2(N-1) columns for planar
/// displacements or N-1 for displacements along the chain.
///
/// The basis is a Householder reflector that sends the constant vectors to
/// the first coordinates, followed by dropping those coordinates. Applying
/// it to a dense operator costs O(n^2).
class MeanZeroBasis {
 public:
  MeanZeroBasis(int n, bool constrained);

  int sites() const noexcept { return n_; }
  bool constrained() const noexcept { return constrained_; }
  int dimension() const noexcept { return constrained_ ? n_ - 1 : 2 * (n_ - 1); }

  /// Q^T A Q for a full interleaved 2N x 2N operator.
  Eigen::MatrixXd compress(const Eigen::MatrixXd& full) const;
  /// Q^T b for an interleaved 2N vector.
  Eigen::VectorXd restrict(const Eigen::VectorXd& full) const;
  /// Q c as an interleaved 2N vector.
  Eigen::VectorXd expand(const Eigen::VectorXd& coords) const;
  Field expand_field(const Eigen::VectorXd& coords) const;
  /// Explicit basis matrix (2N x dimension). Mostly for tests.
  Eigen::MatrixXd matrix() const;

 private:
  int n_;
  bool constrained_;
  double beta_;
  double pivot_;  // 1/sqrt(N) - 1, the reflector entry at the dropped index
};

/// Full 2N x 2N Gram operator of u -> u' in the l2_eps pairing:
/// u . G u = ||u'||^2.
Eigen::MatrixXd derivative_gram(int n);

/// Dual norm sup_{w mean-zero} <v, w> / ||w'|| evaluated through the
/// inverse Gram operator. Reusable for a fixed N.
class NegativeNorm {
 public:
  explicit NegativeNorm(int n);
  double operator()(const Field& v) const;
  int size() const noexcept { return basis_.sites(); }

 private:
  MeanZeroBasis basis_;
  Eigen::LLT<Eigen::MatrixXd> gram_;
};

double negative_norm(const Field& v);

/// inf ||u''|| / ||u'|| over mean-zero periodic u, i.e. 2 sin(pi*eps)/eps.
double mu_epsilon(int n);

}  // namespace qnlchain
