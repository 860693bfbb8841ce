#include "qnlchain/models.hpp"

#include "qnlchain/errors.hpp"

#include <cmath>

namespace qnlchain {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Atomistic: return "a";
    case ModelKind::CauchyBorn: return "cb";
    default: return "qnl";
  }
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "a" || name == "atomistic") return ModelKind::Atomistic;
  if (name == "cb") return ModelKind::CauchyBorn;
  if (name == "qnl") return ModelKind::QuasiNonlocal;
  throw ArgumentError("unknown model '" + name + "' (expected a, cb or qnl)");
}

ModelSpec ModelSpec::atomistic(PairPotential p, double alpha) {
  return ModelSpec{ModelKind::Atomistic, std::move(p), alpha, std::nullopt};
}

ModelSpec ModelSpec::cauchy_born(PairPotential p, double alpha) {
  return ModelSpec{ModelKind::CauchyBorn, std::move(p), alpha, std::nullopt};
}

ModelSpec ModelSpec::quasi_nonlocal(PairPotential p, double alpha, std::optional<int> k) {
  return ModelSpec{ModelKind::QuasiNonlocal, std::move(p), alpha, k};
}

ModelSpec ModelSpec::reference() const { return atomistic(potential, bond_angle); }

int ModelSpec::interface_index(int n) const {
  const int k = interface_k.value_or(n / 2);
  InterfacePartition check(n, k);
  return k;
}

InterfacePartition ModelSpec::partition(int n) const { return InterfacePartition(n, interface_index(n)); }

std::string ModelSpec::name() const { return to_string(kind); }

std::vector<PairTerm> pair_terms(const ModelSpec& model, int n) {
  if (model.bond_angle < 0.0) throw ArgumentError("bond-angle stiffness must be non-negative");
  std::vector<PairTerm> terms;
  terms.reserve(static_cast<std::size_t>(3 * n));
  // Bond l joins atoms l-1 and l; its next-nearest partner joins l-1 and l+1.
  for (int l = 1; l <= n; ++l) terms.push_back({wrap_index(l - 1, n), 1, 1.0, 1.0});
  switch (model.kind) {
    case ModelKind::Atomistic:
      for (int l = 1; l <= n; ++l) terms.push_back({wrap_index(l - 1, n), 2, 1.0, 1.0});
      break;
    case ModelKind::CauchyBorn:
      for (int l = 1; l <= n; ++l) terms.push_back({wrap_index(l - 1, n), 1, 1.0, 2.0});
      break;
    case ModelKind::QuasiNonlocal: {
      const int k = model.interface_index(n);
      for (int l = 1; l <= k; ++l) terms.push_back({wrap_index(l - 1, n), 2, 1.0, 1.0});
      for (int l = k + 2; l <= n; ++l) terms.push_back({wrap_index(l - 1, n), 1, 1.0, 2.0});
      terms.push_back({0, 1, 0.5, 2.0});
      terms.push_back({k, 1, 0.5, 2.0});
      break;
    }
  }
  return terms;
}

namespace {

struct PairGeometry {
  Vec2 dir;
  double length;  // |d| with d = (y_j - y_i) / eps
};

PairGeometry pair_geometry(const ChainGeometry& y, const PairTerm& t) {
  const Vec2 d = (y.position(t.site + t.span) - y.position(t.site)) * y.size();
  const double r = d.norm();
  if (r == 0.0) throw GeometryError("coincident atoms at site " + std::to_string(t.site));
  return {d / r, r};
}

struct AngleGeometry {
  Vec2 na, nb;
  double la, lb, c;
};

AngleGeometry angle_geometry(const ChainGeometry& y, int l) {
  const Vec2 a = y.bond(l);
  const Vec2 b = y.bond(l + 1);
  const double la = a.norm();
  const double lb = b.norm();
  if (la == 0.0 || lb == 0.0) throw GeometryError("coincident atoms at site " + std::to_string(l));
  const double cross = a.x() * b.y() - a.y() * b.x();
  if (a.dot(b) < 0.0 && std::abs(cross) <= 1e-14 * la * lb) {
    throw DomainError("turning angle of pi at site " + std::to_string(l));
  }
  const Vec2 na = a / la;
  const Vec2 nb = b / lb;
  return {na, nb, la, lb, na.dot(nb)};
}

void add_block(Eigen::MatrixXd& h, int i, int j, const Mat2& m) {
  h.block<2, 2>(2 * i, 2 * j) += m;
}

}  // namespace

double energy(const ModelSpec& model, const ChainGeometry& y) {
  const int n = y.size();
  const double eps = y.epsilon();
  double e = 0.0;
  for (const PairTerm& t : pair_terms(model, n)) {
    const PairGeometry g = pair_geometry(y, t);
    e += eps * t.weight * model.potential(t.scale * g.length);
  }
  if (model.bond_angle != 0.0) {
    for (int l = 0; l < n; ++l) e += eps * model.bond_angle * (1.0 - angle_geometry(y, l).c);
  }
  return e;
}

Field first_variation(const ModelSpec& model, const ChainGeometry& y) {
  const int n = y.size();
  Field grad = Field::Zero(n, 2);
  for (const PairTerm& t : pair_terms(model, n)) {
    const PairGeometry g = pair_geometry(y, t);
    const Vec2 force = t.weight * t.scale * model.potential.d1(t.scale * g.length) * g.dir;
    grad.row(wrap_index(t.site + t.span, n)) += force.transpose();
    grad.row(t.site) -= force.transpose();
  }
  if (model.bond_angle != 0.0) {
    const double alpha = model.bond_angle;
    for (int l = 0; l < n; ++l) {
      const AngleGeometry a = angle_geometry(y, l);
      const Vec2 ga = (a.nb - a.c * a.na) / a.la;
      const Vec2 gb = (a.na - a.c * a.nb) / a.lb;
      grad.row(wrap_index(l - 1, n)) += alpha * ga.transpose();
      grad.row(l) -= alpha * (ga - gb).transpose();
      grad.row(wrap_index(l + 1, n)) -= alpha * gb.transpose();
    }
  }
  // Euclidean gradient -> representer in the eps-weighted pairing.
  return grad * static_cast<double>(n);
}

Eigen::MatrixXd bond_angle_hessian(double alpha, const ChainGeometry& y) {
  const int n = y.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  if (alpha == 0.0) return h;
  const Mat2 id = Mat2::Identity();
  for (int l = 0; l < n; ++l) {
    const AngleGeometry a = angle_geometry(y, l);
    const Vec2 ta = a.nb - a.c * a.na;
    const Vec2 tb = a.na - a.c * a.nb;
    const Mat2 pa = id - a.na * a.na.transpose();
    const Mat2 pb = id - a.nb * a.nb.transpose();
    Mat2 d[2][2];
    d[0][0] = -(ta * a.na.transpose() + a.na * ta.transpose() + a.c * pa) / (a.la * a.la);
    d[1][1] = -(tb * a.nb.transpose() + a.nb * tb.transpose() + a.c * pb) / (a.lb * a.lb);
    d[0][1] = pa * pb / (a.la * a.lb);
    d[1][0] = d[0][1].transpose();
    // a = (y_l - y_{l-1})/eps, b = (y_{l+1} - y_l)/eps
    const int sites[3] = {wrap_index(l - 1, n), l, wrap_index(l + 1, n)};
    const double sign[2][3] = {{-1.0, 1.0, 0.0}, {0.0, -1.0, 1.0}};
    const double coef = -alpha * n;
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) {
        Mat2 block = Mat2::Zero();
        for (int x = 0; x < 2; ++x) {
          for (int z = 0; z < 2; ++z) block += sign[x][p] * sign[z][q] * d[x][z];
        }
        if (!block.isZero(0.0)) add_block(h, sites[p], sites[q], coef * block);
      }
    }
  }
  return h;
}

Eigen::MatrixXd hessian_full(const ModelSpec& model, const ChainGeometry& y) {
  const int n = y.size();
  Eigen::MatrixXd h = bond_angle_hessian(model.bond_angle, y);
  const Mat2 id = Mat2::Identity();
  for (const PairTerm& t : pair_terms(model, n)) {
    const PairGeometry g = pair_geometry(y, t);
    const double r = t.scale * g.length;
    const Mat2 nn = g.dir * g.dir.transpose();
    const Mat2 k = t.weight * n *
                   (t.scale * t.scale * model.potential.d2(r) * nn +
                    t.scale * model.potential.d1(r) / g.length * (id - nn));
    const int i = t.site;
    const int j = wrap_index(t.site + t.span, n);
    add_block(h, i, i, k);
    add_block(h, j, j, k);
    add_block(h, i, j, -k);
    add_block(h, j, i, -k);
  }
  return h;
}

double SecondVariation::form(const Field& u, const Field& v) const {
  return flatten(u).dot(full * flatten(v));
}

SecondVariation second_variation(const ModelSpec& model, const ChainGeometry& y, bool constrained) {
  if (!y.is_uniform()) throw PreconditionError("second variation needs a uniform reference chain");
  if (constrained && y.kind() != ChainKind::Linear) {
    throw PreconditionError("line-constrained displacements need a linear chain");
  }
  MeanZeroBasis basis(y.size(), constrained);
  Eigen::MatrixXd full = hessian_full(model, y);
  DenseSymmetric reduced(basis.compress(full), 1e-10);
  return SecondVariation{std::move(basis), std::move(full), std::move(reduced)};
}

VariationBundle variations(const ModelSpec& model, const ChainGeometry& y, bool constrained) {
  return VariationBundle{energy(model, y), first_variation(model, y), second_variation(model, y, constrained)};
}

GhostForce ghost_force(const ModelSpec& model, const ChainGeometry& y) {
  if (model.kind == ModelKind::Atomistic) {
    throw ArgumentError("ghost force is measured against the atomistic model");
  }
  if (!y.is_uniform()) throw PreconditionError("ghost force needs a uniform reference chain");
  Field field = first_variation(model, y) - first_variation(model.reference(), y);
  const double norm = negative_norm(field);
  return GhostForce{std::move(field), norm};
}

}  // namespace qnlchain
