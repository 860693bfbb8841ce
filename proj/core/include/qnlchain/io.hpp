#pragma once

#include "qnlchain/analysis.hpp"
#include "qnlchain/chain.hpp"
#include "qnlchain/stability.hpp"

#include <Eigen/Dense>

#include <optional>
#include <ostream>
#include <span>
#include <string>

namespace qnlchain {

/// Shortest round-trip decimal form, independent of the C++ locale.
/// Non-finite values print as nan, inf, -inf.
std::string format_number(double x);
std::string format_optional(const std::optional<double>& x);

/// index,x,y
void write_field_csv(std::ostream& out, const Field& field);
/// Dense row-major matrix, no header.
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

/// model,kind,N,F,constrained,alpha,numeric_inf,analytic_value,branch,gap,flags
void write_stability_csv(std::ostream& out, std::span<const StabilityReport> reports);

/// model,kind,N,eps,K,alpha,error,tau_norm,bound,rate_so_far,unorm1,unorm2,unorm3,flags
void write_sweep_csv(std::ostream& out, const std::string& model, ChainKind kind,
                     std::span<const SweepRecord> records);

}  // namespace qnlchain
