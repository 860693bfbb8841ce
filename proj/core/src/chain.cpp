#include "qnlchain/chain.hpp"

#include "qnlchain/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qnlchain {

namespace {

void require_sites(int n) {
  if (n < 4) throw ArgumentError("chain needs at least 4 atoms, got " + std::to_string(n));
}

void require_same_size(const Field& v, const Field& w) {
  if (v.rows() != w.rows()) throw ArgumentError("fields have different sizes");
}

int floor_div(int l, int n) {
  return (l - wrap_index(l, n)) / n;
}

}  // namespace

Eigen::VectorXd flatten(const Field& f) {
  return Eigen::Map<const Eigen::VectorXd>(f.data(), f.size());
}

Field unflatten(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw ArgumentError("interleaved vector has odd length");
  return Eigen::Map<const Field>(v.data(), v.size() / 2, 2);
}

const char* to_string(ChainKind kind) {
  return kind == ChainKind::Linear ? "linear" : "circular";
}

ChainKind chain_kind_from_string(const std::string& name) {
  if (name == "linear") return ChainKind::Linear;
  if (name == "circular") return ChainKind::Circular;
  throw ArgumentError("unknown chain kind '" + name + "'");
}

ChainGeometry ChainGeometry::linear(int n, double strain) {
  require_sites(n);
  if (!(strain > 0.0)) throw ArgumentError("strain must be positive");
  ChainGeometry g;
  g.kind_ = ChainKind::Linear;
  g.n_ = n;
  g.strain_ = strain;
  g.positions_ = Field::Zero(n, 2);
  for (int l = 0; l < n; ++l) g.positions_(l, 0) = strain * l / n;
  g.shift_ = Vec2(strain, 0.0);
  return g;
}

ChainGeometry ChainGeometry::circular(int n, double strain) {
  require_sites(n);
  if (!(strain > 0.0)) throw ArgumentError("strain must be positive");
  const double eps = 1.0 / n;
  ChainGeometry g;
  g.kind_ = ChainKind::Circular;
  g.n_ = n;
  g.strain_ = strain;
  g.radius_ = strain * eps / (2.0 * std::sin(std::numbers::pi * eps));
  g.positions_.resize(n, 2);
  for (int l = 0; l < n; ++l) {
    const double t = 2.0 * std::numbers::pi * l * eps;
    g.positions_(l, 0) = g.radius_ * std::cos(t);
    g.positions_(l, 1) = g.radius_ * std::sin(t);
  }
  return g;
}

ChainGeometry make_linear(int n, double strain) { return ChainGeometry::linear(n, strain); }
ChainGeometry make_circular(int n, double strain) { return ChainGeometry::circular(n, strain); }

ChainGeometry ChainGeometry::displaced(const Field& u) const {
  if (u.rows() != n_) throw ArgumentError("displacement size does not match chain");
  ChainGeometry g = *this;
  g.positions_ += u;
  g.uniform_ = false;
  return g;
}

Vec2 ChainGeometry::position(int l) const {
  return positions_.row(wrap_index(l, n_)).transpose() + floor_div(l, n_) * shift_;
}

Vec2 ChainGeometry::bond(int l) const {
  return (position(l) - position(l - 1)) * n_;
}

Vec2 ChainGeometry::next_bond(int l) const {
  return (position(l + 1) - position(l - 1)) * n_;
}

Strains ChainGeometry::strains() const {
  if (!uniform_) throw PreconditionError("strains are defined for uniform chains only");
  if (kind_ == ChainKind::Linear) return {strain_, strain_};
  return {strain_, strain_ * std::cos(std::numbers::pi / n_)};
}

Projections ChainGeometry::projections(int l) const {
  const Vec2 a = bond(l);
  const Vec2 c = next_bond(l);
  if (a.norm() == 0.0 || c.norm() == 0.0) {
    throw GeometryError("degenerate bond at index " + std::to_string(l));
  }
  const Vec2 na = a.normalized();
  const Vec2 nc = c.normalized();
  return {na * na.transpose(), nc * nc.transpose()};
}

double ChainGeometry::turning_angle(int l) const {
  const Vec2 a = bond(l);
  const Vec2 b = bond(l + 1);
  return std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
}

Field backward_diff(const Field& u, int order) {
  if (order < 1) throw ArgumentError("difference order must be at least 1");
  const int n = static_cast<int>(u.rows());
  Field d = u;
  for (int k = 0; k < order; ++k) {
    Field next(n, 2);
    for (int l = 0; l < n; ++l) next.row(l) = (d.row(l) - d.row(wrap_index(l - 1, n))) * n;
    d = std::move(next);
  }
  return d;
}

Field backward_diff(const ChainGeometry& y, int order) {
  if (order < 1) throw ArgumentError("difference order must be at least 1");
  const int n = y.size();
  Field d(n, 2);
  for (int l = 0; l < n; ++l) d.row(l) = y.bond(l).transpose();
  return order == 1 ? d : backward_diff(d, order - 1);
}

double inner(const Field& v, const Field& w) {
  require_same_size(v, w);
  return v.cwiseProduct(w).sum() / static_cast<double>(v.rows());
}

double l2eps_norm(const Field& v) {
  return std::sqrt(v.squaredNorm() / static_cast<double>(v.rows()));
}

InterfacePartition::InterfacePartition(int n, int k) : n_(n), k_(k) {
  require_sites(n);
  if (k <= 1 || k >= n - 1) {
    throw ArgumentError("interface index K must satisfy 1 < K < N-1, got K=" + std::to_string(k));
  }
}

bool InterfacePartition::in_atomistic(int l) const {
  const int label = wrap_index(l - 1, n_) + 1;
  return label <= k_;
}

bool InterfacePartition::is_interface(int l) const {
  const int label = wrap_index(l - 1, n_) + 1;
  return label == 1 || label == k_ + 1;
}

Seminorms seminorms(const Field& du, const InterfacePartition& partition) {
  const int n = partition.size();
  if (du.rows() != n) throw ArgumentError("field size does not match partition");
  double a = 0.0, c = 0.0, t = 0.0;
  for (int label = 1; label <= n; ++label) {
    const double s = du.row(wrap_index(label, n)).squaredNorm();
    if (label == 1 || label == partition.k() + 1) {
      t += s;
    } else if (label <= partition.k()) {
      a += s;
    } else {
      c += s;
    }
  }
  const double eps = 1.0 / n;
  return {std::sqrt(eps * a), std::sqrt(eps * c), std::sqrt(eps * t)};
}

DisplacementField::DisplacementField(Field values, bool constrained, double tol)
    : values_(std::move(values)), constrained_(constrained) {
  if (values_.rows() < 4) throw ArgumentError("displacement needs at least 4 sites");
  const double scale = std::max(1.0, values_.cwiseAbs().maxCoeff());
  const Vec2 mean = values_.colwise().mean().transpose();
  if (mean.cwiseAbs().maxCoeff() > tol * scale) throw ArgumentError("displacement is not mean-zero");
  if (constrained_ && values_.col(1).cwiseAbs().maxCoeff() > tol * scale) {
    throw ArgumentError("constrained displacement has a transverse component");
  }
}

DisplacementField DisplacementField::project(const Field& values, bool constrained) {
  Field u = values.rowwise() - values.colwise().mean();
  if (constrained) u.col(1).setZero();
  return DisplacementField(std::move(u), constrained);
}

MeanZeroBasis::MeanZeroBasis(int n, bool constrained) : n_(n), constrained_(constrained) {
  require_sites(n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  pivot_ = s - 1.0;
  // |v|^2 = (N-1)/N + (s-1)^2 = 2 - 2s
  beta_ = 2.0 / (2.0 - 2.0 * s);
}

namespace {

// Reflector columns in the working space: one per removed coordinate.
Eigen::MatrixXd reflector_columns(int n, bool constrained, double pivot) {
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  if (constrained) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Constant(n, 1, s);
    v(0, 0) = pivot;
    return v;
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(2 * n, 2);
  for (int i = 0; i < n; ++i) {
    v(2 * i, 0) = s;
    v(2 * i + 1, 1) = s;
  }
  v(0, 0) = pivot;
  v(1, 1) = pivot;
  return v;
}

}  // namespace

Eigen::MatrixXd MeanZeroBasis::compress(const Eigen::MatrixXd& full) const {
  if (full.rows() != 2 * n_ || full.cols() != 2 * n_) {
    throw ArgumentError("operator size does not match basis");
  }
  Eigen::MatrixXd a;
  if (constrained_) {
    a = full(Eigen::seqN(0, n_, 2), Eigen::seqN(0, n_, 2));
  } else {
    a = full;
  }
  const Eigen::MatrixXd v = reflector_columns(n_, constrained_, pivot_);
  const Eigen::MatrixXd av = a * v;
  const Eigen::MatrixXd vav = v.transpose() * av;
  a.noalias() -= beta_ * v * av.transpose();
  a.noalias() -= beta_ * av * v.transpose();
  a.noalias() += (beta_ * beta_) * v * vav * v.transpose();
  const int removed = static_cast<int>(v.cols());
  const int m = static_cast<int>(a.rows()) - removed;
  return a.bottomRightCorner(m, m);
}

Eigen::VectorXd MeanZeroBasis::restrict(const Eigen::VectorXd& full) const {
  if (full.size() != 2 * n_) throw ArgumentError("vector size does not match basis");
  Eigen::VectorXd b = constrained_ ? Eigen::VectorXd(full(Eigen::seqN(0, n_, 2))) : full;
  const Eigen::MatrixXd v = reflector_columns(n_, constrained_, pivot_);
  b -= beta_ * v * (v.transpose() * b);
  const int removed = static_cast<int>(v.cols());
  return b.tail(b.size() - removed);
}

Eigen::VectorXd MeanZeroBasis::expand(const Eigen::VectorXd& coords) const {
  if (coords.size() != dimension()) throw ArgumentError("coordinate size does not match basis");
  const Eigen::MatrixXd v = reflector_columns(n_, constrained_, pivot_);
  const int removed = static_cast<int>(v.cols());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(coords.size() + removed);
  z.tail(coords.size()) = coords;
  z -= beta_ * v * (v.transpose() * z);
  if (!constrained_) return z;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(2 * n_);
  out(Eigen::seqN(0, n_, 2)) = z;
  return out;
}

Field MeanZeroBasis::expand_field(const Eigen::VectorXd& coords) const {
  return unflatten(expand(coords));
}

Eigen::MatrixXd MeanZeroBasis::matrix() const {
  Eigen::MatrixXd q(2 * n_, dimension());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dimension());
  for (int j = 0; j < dimension(); ++j) {
    e.setZero();
    e(j) = 1.0;
    q.col(j) = expand(e);
  }
  return q;
}

Eigen::MatrixXd derivative_gram(int n) {
  require_sites(n);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    const int j = wrap_index(i - 1, n);
    for (int c = 0; c < 2; ++c) {
      g(2 * i + c, 2 * i + c) += n;
      g(2 * j + c, 2 * j + c) += n;
      g(2 * i + c, 2 * j + c) -= n;
      g(2 * j + c, 2 * i + c) -= n;
    }
  }
  return g;
}

NegativeNorm::NegativeNorm(int n) : basis_(n, false), gram_(basis_.compress(derivative_gram(n))) {
  if (gram_.info() != Eigen::Success) throw NotPositiveDefiniteError("derivative Gram operator");
}

double NegativeNorm::operator()(const Field& v) const {
  if (v.rows() != basis_.sites()) throw ArgumentError("field size does not match norm");
  const Eigen::VectorXd b = basis_.restrict(flatten(v)) / static_cast<double>(basis_.sites());
  return std::sqrt(std::max(0.0, b.dot(gram_.solve(b))));
}

double negative_norm(const Field& v) {
  return NegativeNorm(static_cast<int>(v.rows()))(v);
}

double mu_epsilon(int n) {
  require_sites(n);
  return 2.0 * std::sin(std::numbers::pi / n) * n;
}

}  // namespace qnlchain
