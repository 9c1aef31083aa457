#include "wgs/rdm.hpp"

#include <cmath>

#include "eval_internal.hpp"
#include "wgs/errors.hpp"

namespace wgs {

Eigen::MatrixXcd reduced_density_matrix(const Ansatz& a, const Eigen::VectorXd& x,
                                        std::span<const int> subset, const RdmOptions& opts) {
  const detail::PreparedState st = detail::prepare_state(a, x);
  return detail::rdm_normalized(a, x, st, subset, opts);
}

Eigen::MatrixXcd hadamard_factor(const Ansatz& a, const Eigen::VectorXd& x,
                                 std::span<const int> subset, int env_site, int branch_j,
                                 int branch_k) {
  const detail::PreparedState st = detail::prepare_state(a, x);
  const detail::Subset sub = detail::make_subset(a, subset, static_cast<int>(subset.size()));
  for (int s : sub.sites)
    if (s == env_site) throw ConfigError("hadamard_factor: environment site inside the subset");
  std::vector<Eigen::MatrixXcd> tables;
  Eigen::MatrixXcd vs;
  detail::fill_env_phase_tables(a, x, sub, env_site, tables);
  detail::fill_phase_vectors(sub, tables, vs);
  return detail::factor_from_vectors(sub, vs, st.deform(a, env_site, branch_j),
                                     st.deform(a, env_site, branch_k));
}

Complex expectation_value_complex(const Ansatz& a, const Eigen::VectorXd& x,
                                  const Eigen::MatrixXcd& op, std::span<const int> subset,
                                  const RdmOptions& opts) {
  const Eigen::MatrixXcd rho = reduced_density_matrix(a, x, subset, opts);
  if (op.rows() != rho.rows() || op.cols() != rho.cols())
    throw ConfigError("expectation_value: operator dimension mismatch");
  return (op * rho).trace();
}

double expectation_value(const Ansatz& a, const Eigen::VectorXd& x, const Eigen::MatrixXcd& op,
                         std::span<const int> subset, const RdmOptions& opts) {
  const Complex v = expectation_value_complex(a, x, op, subset, opts);
  if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real())))
    throw NumericalAbort("expectation_value: imaginary residue too large for a Hermitian operator");
  return v.real();
}

double choose_shift(std::span<const double> log_magnitudes) {
  double best = -std::numeric_limits<double>::infinity();
  for (double v : log_magnitudes) best = std::max(best, v);
  return std::isfinite(best) ? best : 0.0;
}

}  // namespace wgs
