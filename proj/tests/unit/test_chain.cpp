#include "doctest.h"
#include "oracles.hpp"

#include "qnlchain/chain.hpp"
#include "qnlchain/errors.hpp"

#include <cmath>
#include <numbers>

using namespace qnlchain;
using std::numbers::pi;

TEST_SUITE("chain") {
  TEST_CASE("linear chain layout") {
    const auto y = make_linear(4, 1.0);
    for (int l = 0; l < 4; ++l) {
      CHECK(y.position(l).x() == doctest::Approx(l / 4.0));
      CHECK(y.position(l).y() == 0.0);
    }
    CHECK(y.position(4).x() == doctest::Approx(1.0));
    CHECK(y.position(-1).x() == doctest::Approx(-0.25));
    CHECK(y.period_shift().x() == 1.0);

    const auto z = make_linear(8, 0.9);
    for (int l = -3; l < 12; ++l) CHECK(z.bond(l).norm() == doctest::Approx(0.9));
    CHECK_THROWS_AS(make_linear(3, 1.0), ArgumentError);
    CHECK_THROWS_AS(make_linear(8, 0.0), ArgumentError);
  }

  TEST_CASE("circular chain layout") {
    const auto y = make_circular(4, 1.0);
    CHECK(y.radius() == doctest::Approx(std::sqrt(2.0) / 8.0));
    CHECK((y.position(1) - y.position(-1)).norm() == doctest::Approx(std::sqrt(2.0) / 4.0));
    CHECK(y.period_shift().norm() == 0.0);
    CHECK_THROWS_AS(make_circular(3, 1.0), ArgumentError);
    for (int n : {5, 8, 33}) {
      const auto c = make_circular(n, 1.1);
      for (int l = 0; l < n; ++l) {
        CHECK(c.bond(l).norm() == doctest::Approx(1.1));
        CHECK(c.turning_angle(l) == doctest::Approx(2 * pi / n));
        CHECK(c.position(l).norm() == doctest::Approx(c.radius()));
      }
    }
    for (int l = 0; l < 8; ++l) CHECK(make_linear(8, 1.0).turning_angle(l) == 0.0);
  }

  TEST_CASE("difference quotients of the reference chains") {
    const auto lin = make_linear(16, 1.2);
    CHECK(backward_diff(lin, 2).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(backward_diff(lin, 3).cwiseAbs().maxCoeff() < 1e-9);
    const int n = 24;
    const double f = 0.95;
    const auto circ = make_circular(n, f);
    const double eps = 1.0 / n;
    const Field d2 = backward_diff(circ, 2), d3 = backward_diff(circ, 3);
    for (int l = 0; l < n; ++l) {
      CHECK(d2.row(l).norm() == doctest::Approx(2 * f / eps * std::sin(pi * eps)));
      CHECK(d3.row(l).norm() == doctest::Approx(4 * f / (eps * eps) * std::pow(std::sin(pi * eps), 2)));
    }
    const Field c = Field::Constant(n, 2, 3.5);
    CHECK(backward_diff(c, 1).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("backward differences agree with a hand-rolled loop and commute with shifts") {
    auto gen = oracle::rng(11);
    const Field u = oracle::random_field(gen, 13);
    for (int order = 1; order <= 3; ++order) {
      CHECK((backward_diff(u, order) - oracle::diff(u, order)).cwiseAbs().maxCoeff() < 1e-9);
      Field shifted(13, 2);
      for (int l = 0; l < 13; ++l) shifted.row(l) = u.row(wrap_index(l - 3, 13));
      const Field a = backward_diff(shifted, order), b = backward_diff(u, order);
      for (int l = 0; l < 13; ++l) CHECK((a.row(l) - b.row(wrap_index(l - 3, 13))).norm() < 1e-9);
    }
  }

  TEST_CASE("summation by parts") {
    auto gen = oracle::rng(12);
    for (int n : {4, 7, 32}) {
      const Field v = oracle::random_field(gen, n), w = oracle::random_field(gen, n);
      // <v', w> = -<v, w^+> with w^+_l = (w_{l+1} - w_l)/eps = w'_{l+1}
      Field wf = backward_diff(w, 1);
      Field forward(n, 2);
      for (int l = 0; l < n; ++l) forward.row(l) = wf.row(wrap_index(l + 1, n));
      const double lhs = inner(backward_diff(v, 1), w);
      CHECK(std::abs(lhs + inner(v, forward)) < 1e-14 * n * n);
    }
  }

  TEST_CASE("strains and projections") {
    const auto s = make_linear(10, 1.0).strains();
    CHECK(s.nearest == doctest::Approx(1.0));
    CHECK(s.next_nearest == doctest::Approx(1.0));
    const auto c = make_circular(4, 1.0).strains();
    CHECK(c.nearest == doctest::Approx(1.0));
    CHECK(c.next_nearest == doctest::Approx(std::cos(pi / 4)));
    CHECK(make_circular(4096, 1.0).strains().next_nearest == doctest::Approx(1.0).epsilon(1e-6));

    const auto p = make_linear(6, 0.8).projections(2);
    CHECK((p.bond - Mat2{{1, 0}, {0, 0}}).norm() < 1e-15);
    CHECK((p.next_bond - Mat2{{1, 0}, {0, 0}}).norm() < 1e-15);

    for (int n : {6, 16, 31}) {
      const auto y = make_circular(n, 1.05);
      const double eps = 1.0 / n;
      for (int l = 0; l < n; ++l) {
        const auto pl = y.projections(l);
        const auto pm = y.projections(l - 1);
        CHECK((pl.bond * pl.bond - pl.bond).norm() < 1e-14);
        CHECK((pl.next_bond * pl.next_bond - pl.next_bond).norm() < 1e-14);
        CHECK((pl.bond - pl.bond.transpose()).norm() == 0.0);
        const Vec2 w = Vec2::Random();
        CHECK(((pl.next_bond + pm.next_bond - 2 * pl.bond) * w).norm() ==
              doctest::Approx(2 * w.norm() * std::pow(std::sin(pi * eps), 2)));
        CHECK(((pl.next_bond - pm.next_bond) * w).norm() == doctest::Approx(w.norm() * std::sin(2 * pi * eps)));
      }
    }
  }

  TEST_CASE("degenerate and non-uniform geometry") {
    const auto y = make_linear(6, 1.0);
    Field u = Field::Zero(6, 2);
    u(2, 0) = -1.0 / 6;  // atom 2 lands on atom 1
    const auto bad = y.displaced(u);
    CHECK_FALSE(bad.is_uniform());
    CHECK_THROWS_AS(bad.projections(2), GeometryError);
    CHECK_THROWS_AS(bad.strains(), PreconditionError);
    CHECK_THROWS_AS(y.displaced(Field::Zero(5, 2)), ArgumentError);
  }

  TEST_CASE("pairing and norms") {
    for (int n : {4, 9, 100}) {
      Field v(n, 2);
      for (int l = 0; l < n; ++l) v.row(l) << std::cos(0.3 * l), std::sin(0.3 * l);
      CHECK(l2eps_norm(v) == doctest::Approx(1.0));
      Field w(n, 2);
      for (int l = 0; l < n; ++l) w.row(l) << -v(l, 1), v(l, 0);
      CHECK(std::abs(inner(v, w)) < 1e-15);
    }
    CHECK_THROWS_AS(inner(Field::Zero(4, 2), Field::Zero(5, 2)), ArgumentError);
  }

  TEST_CASE("interface partition and seminorms") {
    CHECK_THROWS_AS(InterfacePartition(10, 1), ArgumentError);
    CHECK_THROWS_AS(InterfacePartition(10, 9), ArgumentError);
    const InterfacePartition part(10, 4);
    int atomistic = 0;
    for (int l = 1; l <= 10; ++l) atomistic += part.in_atomistic(l);
    CHECK(atomistic == 4);
    CHECK(part.is_interface(1));
    CHECK(part.is_interface(5));
    CHECK(part.is_interface(11));
    CHECK_FALSE(part.is_interface(4));

    auto gen = oracle::rng(14);
    for (int k : {2, 4, 7}) {
      const Field du = oracle::random_field(gen, 10);
      const auto s = seminorms(du, InterfacePartition(10, k));
      const double total = std::pow(l2eps_norm(du), 2);
      CHECK(std::abs(s.atomistic * s.atomistic + s.continuum * s.continuum + s.interface * s.interface - total) <
            1e-14);
    }
  }

  TEST_CASE("displacement fields") {
    auto gen = oracle::rng(15);
    const Field raw = oracle::random_field(gen, 9);
    CHECK_THROWS_AS(DisplacementField(raw, false), ArgumentError);
    const auto planar = DisplacementField::project(raw, false);
    CHECK(planar.values().colwise().sum().norm() < 1e-13);
    const auto flat = DisplacementField::project(raw, true);
    CHECK(flat.values().col(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(DisplacementField(planar.values(), true), ArgumentError);
    CHECK_NOTHROW(DisplacementField(flat.values(), true));
  }

  TEST_CASE("mean-zero basis is orthonormal and complete") {
    for (bool constrained : {false, true}) {
      for (int n : {4, 7, 12}) {
        const MeanZeroBasis basis(n, constrained);
        const Eigen::MatrixXd q = basis.matrix();
        CHECK(q.cols() == basis.dimension());
        CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).norm() < 1e-13);
        // Columns are mean-zero, and constrained columns have no y-part.
        for (Eigen::Index c = 0; c < q.cols(); ++c) {
          const Field f = unflatten(q.col(c));
          CHECK(f.colwise().sum().norm() < 1e-13);
          if (constrained) CHECK(f.col(1).cwiseAbs().maxCoeff() < 1e-15);
        }
        auto gen = oracle::rng(16);
        const Field u = oracle::random_mean_zero(gen, n, constrained);
        const Eigen::VectorXd x = flatten(u);
        CHECK((basis.expand(basis.restrict(x)) - x).norm() < 1e-13);
        const Eigen::MatrixXd a = oracle::random_symmetric(gen, 2 * n);
        CHECK((basis.compress(a) - q.transpose() * a * q).norm() < 1e-12);
      }
    }
  }

  TEST_CASE("negative norm") {
    const int n = 16;
    const NegativeNorm norm(n);
    CHECK(norm(Field::Constant(n, 2, 2.0)) < 1e-12);

    // v = N G w0 in field form, so that <v, w> = <w0', w'> for all w.
    auto gen = oracle::rng(17);
    const Field w0 = oracle::random_mean_zero(gen, n);
    const Eigen::VectorXd gw = derivative_gram(n) * flatten(w0) * n;
    const Field v = unflatten(gw);
    CHECK(norm(v) == doctest::Approx(l2eps_norm(backward_diff(w0, 1))).epsilon(1e-10));

    const Field r = oracle::random_field(gen, n);
    const double value = norm(r);
    CHECK(value == doctest::Approx(negative_norm(r)));
    for (int trial = 0; trial < 100; ++trial) {
      const Field w = oracle::random_mean_zero(gen, n);
      CHECK(inner(r, w) / l2eps_norm(backward_diff(w, 1)) <= value + 1e-10);
    }
    // ||v||_* <= ||v|| / (smallest nonzero singular value of the difference map)
    CHECK(value <= l2eps_norm(r) / (2.0 * std::sin(pi / n) * n) + 1e-12);
  }

  TEST_CASE("mu_epsilon") {
    CHECK(mu_epsilon(4) == doctest::Approx(4 * std::sqrt(2.0)));
    CHECK(std::abs(mu_epsilon(2048) - 2 * pi) < 2 * pi * pi * pi / (6.0 * 2048 * 2048) * 1.01);
    // Smallest ||u''|| / ||u'|| over constrained mean-zero fields.
    for (int n : {6, 11, 24}) {
      const MeanZeroBasis basis(n, true);
      Eigen::MatrixXd d1 = Eigen::MatrixXd::Zero(n, n), d2;
      for (int l = 0; l < n; ++l) {
        d1(l, l) = n;
        d1(l, wrap_index(l - 1, n)) = -n;
      }
      d2 = d1 * d1;
      Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, basis.dimension());
      const Eigen::MatrixXd full = basis.matrix();
      for (int l = 0; l < n; ++l) q.row(l) = full.row(2 * l);
      const Eigen::MatrixXd h = q.transpose() * d2.transpose() * d2 * q;
      const Eigen::MatrixXd g = q.transpose() * d1.transpose() * d1 * q;
      CHECK(std::sqrt(oracle::pencil_min(h, g)) == doctest::Approx(mu_epsilon(n)).epsilon(1e-10));
    }
  }

  TEST_CASE("field flattening and kind names") {
    auto gen = oracle::rng(18);
    const Field f = oracle::random_field(gen, 5);
    const Eigen::VectorXd x = flatten(f);
    CHECK(x(2) == f(1, 0));
    CHECK(x(3) == f(1, 1));
    CHECK((unflatten(x) - f).norm() == 0.0);
    CHECK(chain_kind_from_string(to_string(ChainKind::Circular)) == ChainKind::Circular);
    CHECK(chain_kind_from_string("linear") == ChainKind::Linear);
    CHECK_THROWS_AS(chain_kind_from_string("helix"), ArgumentError);
  }
}
