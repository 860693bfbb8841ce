#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <utility>

namespace qnlchain {

/// Dense symmetric matrix. Construction rejects matrices whose asymmetry
/// exceeds `tol` relative to the largest entry, then symmetrizes.
class DenseSymmetric {
 public:
  explicit DenseSymmetric(Eigen::MatrixXd m, double tol = 1e-12);

  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  Eigen::Index dimension() const noexcept { return m_.rows(); }

 private:
  Eigen::MatrixXd m_;
};

struct EigenPair {
  double value;
  Eigen::VectorXd vector;  // normalized so that v . G v = 1
};

/// Smallest eigenvalue of the pencil H v = lambda G v.
/// Throws NotPositiveDefiniteError when G has no Cholesky factor.
EigenPair eig_smallest(const DenseSymmetric& h, const DenseSymmetric& g);

struct EigenCluster {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // G-orthonormal columns
};

/// All eigenpairs of the pencil whose eigenvalue lies within
/// rel_tol * max(1, |lambda_min|) of the smallest one.
EigenCluster eig_lowest_cluster(const DenseSymmetric& h, const DenseSymmetric& g, double rel_tol);

/// Solves G x = b; throws NotPositiveDefiniteError if G is not SPD.
Eigen::VectorXd solve_spd(const DenseSymmetric& g, const Eigen::VectorXd& b);

/// Root of f in [a, b]; needs f(a) * f(b) <= 0. An endpoint where f vanishes
/// is returned as is. Throws NoRootError when there is no sign change.
double find_root(const std::function<double(double)>& f, double a, double b);

/// Least-squares slope of log(e) against log(eps).
double fit_rate(std::span<const std::pair<double, double>> pairs);

}  // namespace qnlchain
