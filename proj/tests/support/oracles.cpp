#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

std::mt19937_64 rng(unsigned seed) { return std::mt19937_64(seed); }

Field random_field(std::mt19937_64& gen, int n, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Field f(n, 2);
  for (int i = 0; i < n; ++i) {
    f(i, 0) = dist(gen);
    f(i, 1) = dist(gen);
  }
  return f;
}

Field random_mean_zero(std::mt19937_64& gen, int n, bool constrained) {
  Field f = random_field(gen, n);
  const Eigen::RowVector2d mean = f.colwise().mean();
  f.rowwise() -= mean;
  if (constrained) f.col(1).setZero();
  return f;
}

Eigen::MatrixXd random_symmetric(std::mt19937_64& gen, int n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = dist(gen);
  return 0.5 * (a + a.transpose());
}

Eigen::MatrixXd random_spd(std::mt19937_64& gen, int n, double shift) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = dist(gen);
  return a * a.transpose() / n + shift * Eigen::MatrixXd::Identity(n, n);
}

Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tol, int max_sweeps) {
  const Eigen::Index n = a.rows();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= tol * a.norm()) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd d = a.diagonal();
  std::sort(d.data(), d.data() + d.size());
  return d;
}

double pencil_min(const Eigen::MatrixXd& h, const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  // Textbook Cholesky, then L^-1 H L^-T by forward substitution.
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = g(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) throw std::runtime_error("pencil_min: G not positive definite");
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = g(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  auto forward = [&](const Eigen::MatrixXd& b) {
    Eigen::MatrixXd x(n, b.cols());
    for (Eigen::Index c = 0; c < b.cols(); ++c)
      for (Eigen::Index i = 0; i < n; ++i) {
        double s = b(i, c);
        for (Eigen::Index k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
        x(i, c) = s / l(i, i);
      }
    return x;
  };
  const Eigen::MatrixXd half = forward(h);                        // L^-1 H
  const Eigen::MatrixXd reduced = forward(half.transpose());      // L^-1 H^T L^-T
  return jacobi_eigenvalues(0.5 * (reduced + reduced.transpose()))(0);
}

double bisect(const std::function<double(double)>& f, double a, double b, double width) {
  double fa = f(a);
  if (fa == 0.0) return a;
  if (f(b) == 0.0) return b;
  while (b - a > width) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0) == (fa < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double fd_first(const std::function<double(double)>& f, double t) {
  return (f(t) - f(-t)) / (2.0 * t);
}

double fd_second(const std::function<double(double)>& f, double t) {
  return (f(t) - 2.0 * f(0.0) + f(-t)) / (t * t);
}

Field diff(const Field& v, int order) {
  const int n = static_cast<int>(v.rows());
  Field cur = v;
  for (int o = 0; o < order; ++o) {
    Field next(n, 2);
    for (int l = 0; l < n; ++l) next.row(l) = (cur.row(l) - cur.row((l + n - 1) % n)) * n;
    cur = next;
  }
  return cur;
}

double pairing(const Field& v, const Field& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.rows(); ++i) s += v.row(i).dot(w.row(i));
  return s / static_cast<double>(v.rows());
}

namespace {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

// Bond vector y'_l from raw positions, including the period shift.
Vec2 bond(const ChainGeometry& y, int l) {
  const int n = y.size();
  auto pos = [&](int j) {
    const int r = ((j % n) + n) % n;
    const int wraps = (j - r) / n;
    return Vec2(y.positions().row(r).transpose() + wraps * y.period_shift());
  };
  return (pos(l) - pos(l - 1)) * n;
}

Mat2 proj(const Vec2& a) { return a * a.transpose() / a.squaredNorm(); }

struct Pieces {
  int n;
  double eps;
  Field du, dv, ddu, ddv;
  Vec2 u1(int l) const { return du.row(((l % n) + n) % n).transpose(); }
  Vec2 v1(int l) const { return dv.row(((l % n) + n) % n).transpose(); }
  Vec2 u2(int l) const { return ddu.row(((l % n) + n) % n).transpose(); }
  Vec2 v2(int l) const { return ddv.row(((l % n) + n) % n).transpose(); }
};

Pieces pieces(const Field& u, const Field& v) {
  const int n = static_cast<int>(u.rows());
  return Pieces{n, 1.0 / n, diff(u, 1), diff(v, 1), diff(u, 2), diff(v, 2)};
}

}  // namespace

double atomistic_rearranged(const PairPotential& phi, const ChainGeometry& y, const Field& u, const Field& v) {
  const Pieces p = pieces(u, v);
  const Mat2 id = Mat2::Identity();
  const double f1 = bond(y, 1).norm();
  const double f2 = 0.5 * (bond(y, 2) + bond(y, 1)).norm();
  double total = 0.0;
  for (int l = 1; l <= p.n; ++l) {
    const Mat2 pl = proj(bond(y, l));
    const Mat2 pt = proj(bond(y, l + 1) + bond(y, l));
    const Mat2 ptm = proj(bond(y, l) + bond(y, l - 1));
    const Vec2 su = p.u1(l + 1) + p.u1(l);
    const Vec2 sv = p.v1(l + 1) + p.v1(l);
    double t = p.u1(l).dot(((phi.d2(f1) + 4.0 * phi.d2(2 * f1)) * pl + phi.d1(f1) / f1 * (id - pl)) * p.v1(l));
    t += su.dot(phi.d1(2 * f1) / (2 * f1) * (id - pt) * sv);
    t -= p.eps * p.eps * p.u2(l + 1).dot(phi.d2(2 * f1) * pt * p.v2(l + 1));
    t += 2.0 * p.u1(l).dot(phi.d2(2 * f1) * (pt + ptm - 2.0 * pl) * p.v1(l));
    t += su.dot(((phi.d2(2 * f2) - phi.d2(2 * f1)) * pt +
                 (phi.d1(2 * f2) / (2 * f2) - phi.d1(2 * f1) / (2 * f1)) * (id - pt)) *
                sv);
    total += t;
  }
  return p.eps * total;
}

double cauchy_born_form(const PairPotential& phi, const ChainGeometry& y, const Field& u, const Field& v) {
  const Pieces p = pieces(u, v);
  const Mat2 id = Mat2::Identity();
  const double f1 = bond(y, 1).norm();
  double total = 0.0;
  for (int l = 1; l <= p.n; ++l) {
    const Mat2 pl = proj(bond(y, l));
    total += p.u1(l).dot(((phi.d2(f1) + 4.0 * phi.d2(2 * f1)) * pl +
                          (phi.d1(f1) + 2.0 * phi.d1(2 * f1)) / f1 * (id - pl)) *
                         p.v1(l));
  }
  return p.eps * total;
}

double qnl_rearranged(const PairPotential& phi, const ChainGeometry& y, int k, const Field& u, const Field& v) {
  const Pieces p = pieces(u, v);
  const Mat2 id = Mat2::Identity();
  const double f1 = bond(y, 1).norm();
  const double f2 = 0.5 * (bond(y, 2) + bond(y, 1)).norm();
  const double a2 = phi.d2(f1) + 4.0 * phi.d2(2 * f1);
  auto pt = [&](int l) { return proj(bond(y, l + 1) + bond(y, l)); };
  double total = 0.0;
  for (int l = 2; l <= k; ++l) {
    const Mat2 pl = proj(bond(y, l));
    total += p.u1(l).dot((a2 * pl + phi.d1(f1) / f1 * (id - pl)) * p.v1(l));
    total += 2.0 * p.u1(l).dot(phi.d2(2 * f1) * (pt(l) + pt(l - 1) - 2.0 * pl) * p.v1(l));
  }
  for (int l = 1; l <= k; ++l) {
    const Mat2 ptl = pt(l);
    const Vec2 su = p.u1(l + 1) + p.u1(l);
    const Vec2 sv = p.v1(l + 1) + p.v1(l);
    total += su.dot(phi.d1(2 * f1) / (2 * f1) * (id - ptl) * sv);
    total -= p.eps * p.eps * p.u2(l + 1).dot(phi.d2(2 * f1) * ptl * p.v2(l + 1));
    total += su.dot(((phi.d2(2 * f2) - phi.d2(2 * f1)) * ptl +
                     (phi.d1(2 * f2) / (2 * f2) - phi.d1(2 * f1) / (2 * f1)) * (id - ptl)) *
                    sv);
  }
  for (int l = k + 2; l <= p.n; ++l) {
    const Mat2 pl = proj(bond(y, l));
    total += p.u1(l).dot((a2 * pl + (phi.d1(f1) + 2.0 * phi.d1(2 * f1)) / f1 * (id - pl)) * p.v1(l));
  }
  // Interface bonds 1 and K+1. The neighbouring next-nearest projection is
  // the one from the last next-nearest term touching the bond: index 1 for
  // bond 1 and index K for bond K+1.
  const int iface[2] = {1, k + 1};
  const int near[2] = {1, k};
  for (int i = 0; i < 2; ++i) {
    const int l = iface[i];
    const Mat2 pl = proj(bond(y, l));
    total += p.u1(l).dot((a2 * pl + (phi.d1(f1) + phi.d1(2 * f1)) / f1 * (id - pl)) * p.v1(l));
    total += 2.0 * p.u1(l).dot(phi.d2(2 * f1) * (pt(near[i]) - pl) * p.v1(l));
  }
  return p.eps * total;
}

double constrained_atomistic_form(const PairPotential& phi, double strain, const Field& u) {
  const int n = static_cast<int>(u.rows());
  const double eps = 1.0 / n;
  const double gamma1 = phi.d2(strain) + 4.0 * phi.d2(2 * strain);
  const Field d1 = diff(u, 1), d2 = diff(u, 2);
  return gamma1 * pairing(d1, d1) - eps * eps * phi.d2(2 * strain) * pairing(d2, d2);
}

double straight_bond_angle_form(double alpha, double strain, const Field& u) {
  const int n = static_cast<int>(u.rows());
  const double eps = 1.0 / n;
  const Field d2 = diff(u, 2);
  double s = 0.0;
  for (int l = 0; l < n; ++l) s += d2(l, 1) * d2(l, 1);
  return alpha / (strain * strain) * eps * eps * eps * s;
}

Field rotate(const Field& f, double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  Field out(f.rows(), 2);
  for (Eigen::Index i = 0; i < f.rows(); ++i) out.row(i) = (r * f.row(i).transpose()).transpose();
  return out;
}

}  // namespace oracle
