#include "eval_internal.hpp"

#include <cmath>
#include <limits>

#include "wgs/errors.hpp"

namespace wgs::detail {

PreparedState prepare_state(const Ansatz& a, const Eigen::VectorXd& x) {
  PreparedState st;
  st.parts = unpack(a, x);
  st.cayley.reserve(st.parts.atilde.size());
  for (const auto& at : st.parts.atilde) st.cayley.push_back(cayley(at));
  return st;
}

Subset make_subset(const Ansatz& a, std::span<const int> subset, int cap) {
  if (subset.empty() || static_cast<int>(subset.size()) > cap)
    throw ConfigError("rdm: subset size must be between 1 and the configured cap");
  Subset s;
  s.sites.assign(subset.begin(), subset.end());
  for (std::size_t i = 0; i < s.sites.size(); ++i) {
    if (s.sites[i] < 0 || s.sites[i] >= a.num_sites()) throw ConfigError("rdm: site out of range");
    for (std::size_t j = i + 1; j < s.sites.size(); ++j)
      if (s.sites[i] == s.sites[j]) throw ConfigError("rdm: subset sites must be distinct");
  }
  s.levels = a.levels;
  const int M = static_cast<int>(s.sites.size());
  s.stride.resize(M);
  for (int p = M - 1; p >= 0; --p) {  // site 0 of the subset most significant
    s.stride[p] = s.dim;
    s.dim *= s.levels;
  }
  return s;
}

void LogGrid::multiply(const Eigen::MatrixXcd& factor) {
  const int dim = static_cast<int>(factor.rows());
  for (int col = 0; col < dim; ++col) {
    for (int row = 0; row < dim; ++row) {
      const Complex z = factor(row, col);
      const double mag = std::abs(z);
      if (mag == 0.0) {
        zeros(row, col) += 1;
      } else {
        log_mag(row, col) += std::log(mag);
        phase(row, col) += std::arg(z);
      }
    }
  }
}

double LogGrid::max_finite_log() const {
  double best = -std::numeric_limits<double>::infinity();
  for (int col = 0; col < log_mag.cols(); ++col)
    for (int row = 0; row < log_mag.rows(); ++row)
      if (zeros(row, col) == 0) best = std::max(best, log_mag(row, col));
  return best;
}

Eigen::MatrixXcd LogGrid::exp_shifted(double shift) const {
  Eigen::MatrixXcd out(log_mag.rows(), log_mag.cols());
  for (int col = 0; col < log_mag.cols(); ++col)
    for (int row = 0; row < log_mag.rows(); ++row)
      out(row, col) = zeros(row, col) > 0
                          ? Complex(0.0, 0.0)
                          : std::polar(std::exp(log_mag(row, col) - shift), phase(row, col));
  return out;
}

LogGrid combine(const LogGrid& a, const LogGrid& b) {
  LogGrid out;
  out.log_mag = a.log_mag + b.log_mag;
  out.phase = a.phase + b.phase;
  out.zeros = a.zeros + b.zeros;
  return out;
}

void fill_env_phase_tables(const Ansatz& a, const Eigen::VectorXd& x, const Subset& sub, int c,
                           std::vector<Eigen::MatrixXcd>& tables) {
  const int n = sub.levels;
  const int M = static_cast<int>(sub.sites.size());
  tables.resize(M);
  for (int p = 0; p < M; ++p) {
    tables[p].resize(n, n);
    for (int q = 0; q < n; ++q)
      for (int s = 0; s < n; ++s)
        tables[p](q, s) = std::polar(1.0, a.phase_entry(x, sub.sites[p], c, q, s));
  }
}

void fill_phase_vectors(const Subset& sub, const std::vector<Eigen::MatrixXcd>& tables,
                        Eigen::MatrixXcd& vs) {
  const int n = sub.levels;
  const int M = static_cast<int>(sub.sites.size());
  vs.resize(sub.dim, n);
  for (int s = 0; s < n; ++s)
    for (int r = 0; r < sub.dim; ++r) {
      Complex v = tables[0](subset_level(sub, r, 0), s);
      for (int p = 1; p < M; ++p) v *= tables[p](subset_level(sub, r, p), s);
      vs(r, s) = v;
    }
}

Eigen::MatrixXcd factor_from_vectors(const Subset& sub, const Eigen::MatrixXcd& vs,
                                     const Eigen::VectorXcd& d_j, const Eigen::VectorXcd& d_k) {
  Eigen::MatrixXcd f = Eigen::MatrixXcd::Zero(sub.dim, sub.dim);
  for (int s = 0; s < sub.levels; ++s) {
    const Complex w = d_j[s] * std::conj(d_k[s]);
    if (w == Complex(0.0, 0.0)) continue;
    f.noalias() += w * vs.col(s) * vs.col(s).adjoint();
  }
  return f;
}

Eigen::VectorXcd deform_product_vector(const Ansatz& a, const PreparedState& st, const Subset& sub,
                                       int branch) {
  const int M = static_cast<int>(sub.sites.size());
  Eigen::VectorXcd out(sub.dim);
  for (int r = 0; r < sub.dim; ++r) {
    Complex v = 1.0;
    for (int p = 0; p < M; ++p) v *= st.deform(a, sub.sites[p], branch)[subset_level(sub, r, p)];
    out[r] = v;
  }
  return out;
}

Eigen::VectorXcd internal_gate_diagonal(const Ansatz& a, const Eigen::VectorXd& x, const Subset& sub) {
  const int M = static_cast<int>(sub.sites.size());
  Eigen::VectorXcd w(sub.dim);
  for (int r = 0; r < sub.dim; ++r) {
    double angle = 0.0;
    for (int p = 0; p < M; ++p)
      for (int q = p + 1; q < M; ++q)
        angle += a.phase_entry(x, sub.sites[p], sub.sites[q], subset_level(sub, r, p),
                               subset_level(sub, r, q));
    w[r] = std::polar(1.0, angle);
  }
  return w;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXcd rdm_normalized(const Ansatz& a, const Eigen::VectorXd& x, const PreparedState& st,
                                std::span<const int> subset, const RdmOptions& opts,
                                double* trace_out) {
  const Subset sub = make_subset(a, subset, opts.subset_cap);
  const int m = a.branches;
  const int dim = sub.dim;
  const int N = a.num_sites();

  // Accumulate environment factors in log space per branch pair (j <= k);
  // the mirror pairs are adjoints.
  std::vector<LogGrid> grids(static_cast<std::size_t>(m) * m);
  auto grid_at = [&](int j, int k) -> LogGrid& { return grids[static_cast<std::size_t>(j) * m + k]; };
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) grid_at(j, k).init(dim);

  std::vector<Eigen::MatrixXcd> tables;
  Eigen::MatrixXcd vs;
  std::vector<bool> in_subset(N, false);
  for (int s : sub.sites) in_subset[s] = true;

  for (int c = 0; c < N; ++c) {
    if (in_subset[c]) continue;
    fill_env_phase_tables(a, x, sub, c, tables);
    fill_phase_vectors(sub, tables, vs);
    for (int j = 0; j < m; ++j)
      for (int k = j; k < m; ++k)
        grid_at(j, k).multiply(
            factor_from_vectors(sub, vs, st.deform(a, c, j), st.deform(a, c, k)));
  }

  double shift = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) shift = std::max(shift, grid_at(j, k).max_finite_log());
  if (!std::isfinite(shift)) shift = 0.0;  // every element vanished
  shift += opts.shift_offset;

  Eigen::MatrixXcd rho_tilde = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Eigen::VectorXcd> dvec(m);
  for (int j = 0; j < m; ++j) dvec[j] = deform_product_vector(a, st, sub, j);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      const Eigen::MatrixXcd rho_jk = grid_at(j, k).exp_shifted(shift);
      const Complex weight = st.parts.alpha[j] * std::conj(st.parts.alpha[k]);
      Eigen::MatrixXcd term =
          (weight * rho_jk.array() * (dvec[j] * dvec[k].adjoint()).array()).matrix();
      rho_tilde += term;
      if (k != j) rho_tilde += term.adjoint();
    }

  const double trace = rho_tilde.trace().real();
  const double scale = rho_tilde.cwiseAbs().maxCoeff();
  if (!std::isfinite(trace) || trace <= 0.0 || trace < scale * 1e-13)
    throw DegenerateStateError("rdm: state norm vanishes (zero trace)");
  if (trace_out) *trace_out = trace;

  const Eigen::VectorXcd w = internal_gate_diagonal(a, x, sub);
  Eigen::MatrixXcd rho_check = (rho_tilde.array() * (w * w.adjoint()).array()).matrix();

  Eigen::MatrixXcd u_total = st.unitary(a, sub.sites[0]);
  for (std::size_t p = 1; p < sub.sites.size(); ++p) u_total = kron(u_total, st.unitary(a, sub.sites[p]));
  return u_total * rho_check * u_total.adjoint() / trace;
}

}  // namespace wgs::detail
