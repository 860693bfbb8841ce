#include "qnlchain/io.hpp"

#include <fmt/format.h>

#include <cmath>

namespace qnlchain {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{}", x);
}

std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : ""; }

void write_field_csv(std::ostream& out, const Field& field) {
  out << "index,x,y\n";
  for (Eigen::Index l = 0; l < field.rows(); ++l) {
    out << l << ',' << format_number(field(l, 0)) << ',' << format_number(field(l, 1)) << '\n';
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_number(m(i, j));
    }
    out << '\n';
  }
}

void write_stability_csv(std::ostream& out, std::span<const StabilityReport> reports) {
  out << "model,kind,N,F,constrained,alpha,numeric_inf,analytic_value,branch,gap,flags\n";
  for (const auto& r : reports) {
    out << r.model << ',' << to_string(r.kind) << ',' << r.n << ',' << format_number(r.strain) << ','
        << (r.constrained ? "true" : "false") << ',' << format_number(r.alpha) << ','
        << format_number(r.numeric_inf) << ',' << format_number(r.analytic.value) << ','
        << to_string(r.analytic.branch) << ',' << format_number(r.gap) << ',' << r.flags() << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::string& model, ChainKind kind,
                     std::span<const SweepRecord> records) {
  out << "model,kind,N,eps,K,alpha,error,tau_norm,bound,rate_so_far,unorm1,unorm2,unorm3,flags\n";
  for (const auto& r : records) {
    out << model << ',' << to_string(kind) << ',' << r.n << ',' << format_number(r.eps) << ',' << r.k << ','
        << format_number(r.alpha) << ',' << format_number(r.error) << ',' << format_number(r.tau_norm) << ','
        << format_optional(r.bounds.error_bound) << ',' << format_optional(r.rate_so_far) << ','
        << format_number(r.norms.d1) << ',' << format_number(r.norms.d2) << ',' << format_number(r.norms.d3)
        << ',' << r.flag_string() << '\n';
  }
}

}  // namespace qnlchain
