#include "doctest.h"
#include "oracles.hpp"

#include "qnlchain/errors.hpp"
#include "qnlchain/numerics.hpp"
#include "qnlchain/potential.hpp"

#include <cmath>
#include <limits>
#include <vector>

using namespace qnlchain;

TEST_SUITE("numerics") {
  TEST_CASE("DenseSymmetric rejects asymmetric input") {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 2.1, 1;
    CHECK_THROWS_AS(DenseSymmetric{m}, ArgumentError);
    m(1, 0) = 2.0 + 1e-14;
    const DenseSymmetric s(m);
    CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));
    CHECK_THROWS_AS(DenseSymmetric(Eigen::MatrixXd::Zero(2, 3)), ArgumentError);
  }

  TEST_CASE("eig_smallest on small pencils") {
    const DenseSymmetric id(Eigen::MatrixXd::Identity(4, 4));
    CHECK(eig_smallest(id, id).value == doctest::Approx(1.0));

    Eigen::MatrixXd h = Eigen::Vector3d(3, 1, 2).asDiagonal();
    const auto e = eig_smallest(DenseSymmetric(h), DenseSymmetric(Eigen::MatrixXd::Identity(3, 3)));
    CHECK(e.value == doctest::Approx(1.0));
    CHECK(std::abs(std::abs(e.vector(1)) - 1.0) < 1e-12);
    CHECK(std::abs(e.vector(0)) < 1e-12);

    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
    g(1, 1) = -1.0;
    CHECK_THROWS_AS(eig_smallest(DenseSymmetric(Eigen::MatrixXd::Identity(2, 2)), DenseSymmetric(g)),
                    NotPositiveDefiniteError);
  }

  TEST_CASE("eig_smallest agrees with the Jacobi oracle and Rayleigh sampling") {
    auto gen = oracle::rng(21);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::MatrixXd h = oracle::random_symmetric(gen, 20);
      const Eigen::MatrixXd g = oracle::random_spd(gen, 20);
      const auto e = eig_smallest(DenseSymmetric(h), DenseSymmetric(g));
      CHECK(e.value == doctest::Approx(oracle::pencil_min(h, g)).epsilon(1e-10));
      CHECK(e.vector.dot(g * e.vector) == doctest::Approx(1.0));
      const double residual = (h * e.vector - e.value * g * e.vector).norm();
      CHECK(residual <= 1e-9 * (h.norm() + std::abs(e.value) * g.norm()));

      // Rayleigh quotients of many random vectors stay above the minimum,
      // and local descent from random restarts reaches it.
      double best = std::numeric_limits<double>::infinity();
      for (int restart = 0; restart < 50; ++restart) {
        Eigen::VectorXd x(20);
        for (auto& xi : x) xi = normal(gen);
        double rq = x.dot(h * x) / x.dot(g * x);
        CHECK(rq >= e.value - 1e-9);
        // Rayleigh-quotient gradient descent with backtracking.
        double step = 0.1;
        for (int it = 0; it < 4000 && step > 1e-14; ++it) {
          const double den = x.dot(g * x);
          const Eigen::VectorXd grad = 2.0 * (h * x - rq * g * x) / den;
          const Eigen::VectorXd trial_x = x - step * grad;
          const double trial_rq = trial_x.dot(h * trial_x) / trial_x.dot(g * trial_x);
          if (trial_rq < rq) {
            x = trial_x / std::sqrt(trial_x.dot(g * trial_x));
            rq = trial_rq;
            step *= 1.5;
          } else {
            step *= 0.5;
          }
        }
        best = std::min(best, rq);
      }
      CHECK(best == doctest::Approx(e.value).epsilon(1e-8));
    }
  }

  TEST_CASE("pencil shift identity") {
    auto gen = oracle::rng(22);
    std::uniform_real_distribution<double> uni(-5.0, 5.0);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::MatrixXd h = oracle::random_symmetric(gen, 12);
      const Eigen::MatrixXd g = oracle::random_spd(gen, 12);
      const double c = uni(gen);
      const double a = eig_smallest(DenseSymmetric(h), DenseSymmetric(g)).value;
      const double b = eig_smallest(DenseSymmetric(h + c * g), DenseSymmetric(g)).value;
      CHECK(std::abs(b - c - a) < 1e-9);
    }
  }

  TEST_CASE("lowest cluster captures a repeated eigenvalue") {
    Eigen::MatrixXd h = Eigen::Vector4d(1, 1, 2, 3).asDiagonal();
    const DenseSymmetric g(Eigen::MatrixXd::Identity(4, 4));
    const auto cluster = eig_lowest_cluster(DenseSymmetric(h), g, 1e-8);
    CHECK(cluster.values.size() == 2);
    CHECK((cluster.vectors.transpose() * cluster.vectors - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK(cluster.vectors.row(2).norm() < 1e-12);
  }

  TEST_CASE("solve_spd") {
    const DenseSymmetric id(Eigen::MatrixXd::Identity(3, 3));
    const Eigen::Vector3d b(1, -2, 3);
    CHECK((solve_spd(id, b) - b).norm() < 1e-15);
    Eigen::MatrixXd d = Eigen::Vector2d(2, 4).asDiagonal();
    CHECK((solve_spd(DenseSymmetric(d), Eigen::Vector2d(2, 4)) - Eigen::Vector2d(1, 1)).norm() < 1e-15);

    auto gen = oracle::rng(23);
    const Eigen::MatrixXd g = oracle::random_spd(gen, 30, 0.01);
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(30, -1.0, 2.0);
    const Eigen::VectorXd rhs = g * x;
    const Eigen::VectorXd sol = solve_spd(DenseSymmetric(g), rhs);
    CHECK((g * sol - rhs).norm() <= 1e-10 * rhs.norm());
    CHECK((sol - x).norm() <= 1e-8 * x.norm());

    Eigen::MatrixXd singular = Eigen::MatrixXd::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(solve_spd(DenseSymmetric(singular), Eigen::Vector2d(1, 1)), NotPositiveDefiniteError);
  }

  TEST_CASE("find_root") {
    CHECK(find_root([](double x) { return x * x - 2; }, 1, 2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(find_root([](double x) { return x; }, -1, 1)) < 1e-14);
    CHECK(find_root([](double x) { return x - 1; }, 1, 3) == 1.0);
    CHECK_THROWS_AS(find_root([](double x) { return x * x + 1; }, -1, 1), NoRootError);

    // Lennard-Jones Cauchy-Born buckling threshold against bisection.
    const auto lj = PairPotential::lennard_jones();
    auto cb = [&](double f) { return lj.d1(f) + 2 * lj.d1(2 * f); };
    const double root = find_root(cb, 0.9, 1.0);
    CHECK(std::abs(root - oracle::bisect(cb, 0.9, 1.0)) < 1e-13);
    CHECK(std::abs(cb(root)) < 1e-10);
  }

  TEST_CASE("fit_rate") {
    std::vector<std::pair<double, double>> sq, three_halves, noisy;
    for (int n : {32, 64, 128, 256, 512}) {
      const double eps = 1.0 / n;
      sq.emplace_back(eps, eps * eps);
      three_halves.emplace_back(eps, std::pow(eps, 1.5));
      noisy.emplace_back(eps, 3 * eps * eps + 0.01 * eps * eps * eps);
    }
    CHECK(fit_rate(sq) == doctest::Approx(2.0));
    CHECK(fit_rate(three_halves) == doctest::Approx(1.5));
    const double r = fit_rate(noisy);
    CHECK(r >= 1.95);
    CHECK(r <= 2.05);
    sq.resize(2);
    CHECK_THROWS_AS(fit_rate(sq), ArgumentError);
    const std::vector<std::pair<double, double>> bad = {{0.1, 1.0}, {0.05, 0.0}, {0.025, 0.1}};
    CHECK_THROWS_AS(fit_rate(bad), ArgumentError);
  }
}
