#pragma once

#include <Eigen/Dense>
#include <span>

#include "wgs/varstate.hpp"

namespace wgs {

struct RdmOptions {
  int subset_cap = 3;        // cost is exponential in |A|
  double shift_offset = 0.0; // test hook: any admissible shift yields the same rho
};

/// rho_A of the variational state over the sites of `subset` (kept in the
/// given order), computed through the per-environment-site Hadamard factors
/// with log-space accumulation. Returns the normalised matrix.
Eigen::MatrixXcd reduced_density_matrix(const Ansatz& a, const Eigen::VectorXd& x,
                                        std::span<const int> subset, const RdmOptions& opts = {});

/// Contribution of environment site c to rho_A for branch pair (j, k):
/// entries sum_s d_{cs}^j d_{cs}^{k*} exp[i sum_{p}(Phi^{r_p,s} - Phi^{r'_p,s})].
Eigen::MatrixXcd hadamard_factor(const Ansatz& a, const Eigen::VectorXd& x,
                                 std::span<const int> subset, int env_site, int branch_j,
                                 int branch_k);

/// tr(O rho_A); Hermitian O must give a real value (residue checked).
double expectation_value(const Ansatz& a, const Eigen::VectorXd& x, const Eigen::MatrixXcd& op,
                         std::span<const int> subset, const RdmOptions& opts = {});
Complex expectation_value_complex(const Ansatz& a, const Eigen::VectorXd& x,
                                  const Eigen::MatrixXcd& op, std::span<const int> subset,
                                  const RdmOptions& opts = {});

/// Shift constant for the log-sum stabilisation: the maximum finite log
/// magnitude, so the largest exponentiated element has modulus 1.
double choose_shift(std::span<const double> log_magnitudes);

}  // namespace wgs
