#pragma once

// Shared evaluation machinery behind the reduced-density-matrix and gradient
// paths. Everything here is a pure function of (ansatz, x); per-evaluation
// scratch stays local so concurrent evaluations need no locking.

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "wgs/rdm.hpp"
#include "wgs/varstate.hpp"

namespace wgs::detail {

struct PreparedState {
  ParameterParts parts;
  std::vector<CayleyResult> cayley;  // per local-symmetry class

  const Eigen::VectorXcd& deform(const Ansatz& a, int site, int branch) const {
    return parts.deform[a.site_class(site)][branch];
  }
  const Eigen::MatrixXcd& unitary(const Ansatz& a, int site) const {
    return cayley[a.site_class(site)].u;
  }
};

PreparedState prepare_state(const Ansatz& a, const Eigen::VectorXd& x);

struct Subset {
  std::vector<int> sites;   // tau order = caller order
  int levels = 0;
  int dim = 1;              // levels^|sites|
  std::vector<int> stride;  // site 0 of the subset is most significant
};

Subset make_subset(const Ansatz& a, std::span<const int> subset, int cap);

inline int subset_level(const Subset& s, int r, int p) { return (r / s.stride[p]) % s.levels; }

/// Element-wise log accumulator over a dim x dim grid: log magnitudes and
/// phases are summed separately, exact zeros are counted instead of logged.
struct LogGrid {
  Eigen::ArrayXXd log_mag;
  Eigen::ArrayXXd phase;
  Eigen::ArrayXXi zeros;

  void init(int dim) {
    log_mag = Eigen::ArrayXXd::Zero(dim, dim);
    phase = Eigen::ArrayXXd::Zero(dim, dim);
    zeros = Eigen::ArrayXXi::Zero(dim, dim);
  }
  void multiply(const Eigen::MatrixXcd& factor);
  double max_finite_log() const;
  Eigen::MatrixXcd exp_shifted(double shift) const;
};

/// Sum of two accumulators (prefix + suffix products).
LogGrid combine(const LogGrid& a, const LogGrid& b);

/// tables[p](q, s) = exp(i Phi_{sites[p], c}^{q, s}) for q, s in 0..n-1.
void fill_env_phase_tables(const Ansatz& a, const Eigen::VectorXd& x, const Subset& sub, int c,
                           std::vector<Eigen::MatrixXcd>& tables);

/// vs.col(s)(r) = prod_p tables[p](level_p(r), s): the unit-modulus vectors
/// whose outer products v_s v_s^dagger build a Hadamard factor.
void fill_phase_vectors(const Subset& sub, const std::vector<Eigen::MatrixXcd>& tables,
                        Eigen::MatrixXcd& vs);

/// F^{jk} = sum_s (d_j)_s conj((d_k)_s) v_s v_s^dagger.
Eigen::MatrixXcd factor_from_vectors(const Subset& sub, const Eigen::MatrixXcd& vs,
                                     const Eigen::VectorXcd& d_j, const Eigen::VectorXcd& d_k);

/// |D_A^j>: entry r is prod_p d(site_p, j)_{level_p(r)}.
Eigen::VectorXcd deform_product_vector(const Ansatz& a, const PreparedState& st, const Subset& sub,
                                       int branch);

/// w(r) = exp(i sum_{p<q} Phi_{site_p site_q}^{r_p, r_q}): diagonal of the
/// product of phase gates internal to the subset.
Eigen::VectorXcd internal_gate_diagonal(const Ansatz& a, const Eigen::VectorXd& x, const Subset& sub);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Full normalised rho_A. trace_out, when non-null, receives the (shifted)
/// trace of the pre-gate matrix rho-tilde.
Eigen::MatrixXcd rdm_normalized(const Ansatz& a, const Eigen::VectorXd& x, const PreparedState& st,
                                std::span<const int> subset, const RdmOptions& opts,
                                double* trace_out = nullptr);

}  // namespace wgs::detail
