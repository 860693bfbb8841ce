#pragma once

#include "qnlchain/chain.hpp"
#include "qnlchain/numerics.hpp"
#include "qnlchain/potential.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qnlchain {

enum class ModelKind { Atomistic, CauchyBorn, QuasiNonlocal };

const char* to_string(ModelKind kind);
/// Accepts "a"/"atomistic", "cb", "qnl".
ModelKind model_kind_from_string(const std::string& name);

/// Energy model: pair interactions of the given kind plus an optional
/// bond-angle term alpha * (1 - cos beta) per atom.
struct ModelSpec {
  ModelKind kind = ModelKind::Atomistic;
  PairPotential potential = PairPotential::lennard_jones();
  double bond_angle = 0.0;
  /// Last atomistic site of the coupled model; defaults to floor(N/2).
  std::optional<int> interface_k;

  static ModelSpec atomistic(PairPotential p = PairPotential::lennard_jones(), double alpha = 0.0);
  static ModelSpec cauchy_born(PairPotential p = PairPotential::lennard_jones(), double alpha = 0.0);
  static ModelSpec quasi_nonlocal(PairPotential p = PairPotential::lennard_jones(), double alpha = 0.0,
                                  std::optional<int> k = std::nullopt);

  /// Same potential and bond-angle stiffness, fully atomistic.
  ModelSpec reference() const;
  /// Resolved interface position for an N-site chain (validated).
  int interface_index(int n) const;
  InterfacePartition partition(int n) const;
  std::string name() const;
};

/// One pair interaction between atoms `site` and `site + span` whose
/// energy is eps * weight * phi(scale * |y_{site+span} - y_site| / eps).
struct PairTerm {
  int site;
  int span;
  double weight;
  double scale;
};

std::vector<PairTerm> pair_terms(const ModelSpec& model, int n);

/// Total energy per period.
double energy(const ModelSpec& model, const ChainGeometry& y);

/// Riesz representer g of the first variation: <g, v> = dE(y)[v].
Field first_variation(const ModelSpec& model, const ChainGeometry& y);

/// Interleaved 2N x 2N Hessian in atom positions, valid for any chain:
/// u . H u = d^2E(y)[u, u].
Eigen::MatrixXd hessian_full(const ModelSpec& model, const ChainGeometry& y);

/// Bond-angle part alone, for the same coordinates.
Eigen::MatrixXd bond_angle_hessian(double alpha, const ChainGeometry& y);

struct SecondVariation {
  MeanZeroBasis basis;
  Eigen::MatrixXd full;
  DenseSymmetric reduced;  // Q^T full Q

  double form(const Field& u, const Field& v) const;
};

/// Second variation at a uniform reference chain on the mean-zero (and
/// optionally line-constrained) subspace. Throws PreconditionError for a
/// deformed chain or a constrained circular chain.
SecondVariation second_variation(const ModelSpec& model, const ChainGeometry& y, bool constrained);

struct VariationBundle {
  double energy;
  Field gradient;
  SecondVariation hessian;
};

VariationBundle variations(const ModelSpec& model, const ChainGeometry& y, bool constrained);

struct GhostForce {
  Field field;
  double dual_norm;
};

/// First-variation mismatch against the atomistic model at a uniform chain.
GhostForce ghost_force(const ModelSpec& model, const ChainGeometry& y);

}  // namespace qnlchain
