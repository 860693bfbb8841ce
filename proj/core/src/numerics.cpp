#include "qnlchain/numerics.hpp"

#include "qnlchain/errors.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <cstdint>
#include <string>

namespace qnlchain {

DenseSymmetric::DenseSymmetric(Eigen::MatrixXd m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ArgumentError("matrix is not square");
  if (m_.size() == 0) throw ArgumentError("matrix is empty");
  const double scale = std::max(m_.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    throw ArgumentError("matrix is not symmetric (relative asymmetry " + std::to_string(asym / scale) + ")");
  }
  m_ = 0.5 * (m_ + m_.transpose()).eval();
}

namespace {

using Solver = Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd>;

Solver solve_pencil(const DenseSymmetric& h, const DenseSymmetric& g) {
  if (h.dimension() != g.dimension()) throw ArgumentError("pencil dimensions differ");
  Eigen::LLT<Eigen::MatrixXd> llt(g.matrix());
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("Cholesky factorization failed");
  Solver solver(h.matrix(), g.matrix(), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success) throw NotPositiveDefiniteError("generalized eigensolve failed");
  return solver;
}

void check_residual(const DenseSymmetric& h, const DenseSymmetric& g, double lambda,
                    const Eigen::VectorXd& v) {
  const double hn = h.matrix().norm();
  const double gn = g.matrix().norm();
  const double res = (h.matrix() * v - lambda * (g.matrix() * v)).norm() / std::max(v.norm(), 1e-300);
  if (res > 1e-9 * (hn + std::abs(lambda) * gn)) {
    throw std::runtime_error("eigenpair residual too large: " + std::to_string(res));
  }
}

}  // namespace

EigenPair eig_smallest(const DenseSymmetric& h, const DenseSymmetric& g) {
  const Solver solver = solve_pencil(h, g);
  EigenPair out{solver.eigenvalues()(0), solver.eigenvectors().col(0)};
  out.vector /= std::sqrt(out.vector.dot(g.matrix() * out.vector));
  check_residual(h, g, out.value, out.vector);
  return out;
}

EigenCluster eig_lowest_cluster(const DenseSymmetric& h, const DenseSymmetric& g, double rel_tol) {
  const Solver solver = solve_pencil(h, g);
  const Eigen::VectorXd& w = solver.eigenvalues();
  const double cutoff = w(0) + rel_tol * std::max(1.0, std::abs(w(0)));
  Eigen::Index count = 1;
  while (count < w.size() && w(count) <= cutoff) ++count;
  EigenCluster out{w.head(count), solver.eigenvectors().leftCols(count)};
  for (Eigen::Index j = 0; j < count; ++j) {
    out.vectors.col(j) /= std::sqrt(out.vectors.col(j).dot(g.matrix() * out.vectors.col(j)));
  }
  return out;
}

Eigen::VectorXd solve_spd(const DenseSymmetric& g, const Eigen::VectorXd& b) {
  if (b.size() != g.dimension()) throw ArgumentError("right-hand side size mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(g.matrix());
  if (llt.info() != Eigen::Success) throw NotPositiveDefiniteError("matrix is not positive definite");
  Eigen::VectorXd x = llt.solve(b);
  // One step of iterative refinement keeps the relative residual near 1e-15.
  x += llt.solve(b - g.matrix() * x);
  return x;
}

double find_root(const std::function<double(double)>& f, double a, double b) {
  if (!(a < b)) throw ArgumentError("bracket must satisfy a < b");
  const double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::isnan(fa) || std::isnan(fb) || fa * fb > 0.0) {
    throw NoRootError("no sign change on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  std::uintmax_t iterations = 200;
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(lo)); };
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iterations);
  const double flo = f(lo);
  const double fhi = f(hi);
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

double fit_rate(std::span<const std::pair<double, double>> pairs) {
  if (pairs.size() < 3) throw ArgumentError("rate fit needs at least 3 points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [eps, e] : pairs) {
    if (!(eps > 0.0) || !(e > 0.0)) throw ArgumentError("rate fit needs positive data");
    const double x = std::log(eps);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  const double denom = n * sxx - sx * sx;
  if (denom <= 0.0) throw ArgumentError("rate fit needs distinct step sizes");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace qnlchain
