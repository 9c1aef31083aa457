#include "wgs/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "wgs/errors.hpp"

namespace wgs::oracle {

namespace {

std::size_t checked_dimension(int levels, int num_sites, std::size_t cap) {
  std::size_t dim = 1;
  for (int i = 0; i < num_sites; ++i) {
    dim *= static_cast<std::size_t>(levels);
    if (dim > cap) throw CapExceededError("oracle: Hilbert space dimension exceeds the cap");
  }
  return dim;
}

}  // namespace

Eigen::VectorXcd build_state(const Ansatz& a, const Eigen::VectorXd& x, std::size_t dim_cap) {
  const int n = a.levels;
  const int N = a.num_sites();
  const std::size_t dim = checked_dimension(n, N, dim_cap);
  const ParameterParts parts = unpack(a, x);

  std::vector<int> digits(N, 0);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t b = 0; b < dim; ++b) {
    // decode with site 0 most significant
    std::size_t rest = b;
    for (int site = N - 1; site >= 0; --site) {
      digits[site] = static_cast<int>(rest % n);
      rest /= n;
    }
    double angle = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) angle += a.phase_entry(x, p, q, digits[p], digits[q]);
    Complex amp = 0.0;
    for (int j = 0; j < a.branches; ++j) {
      Complex prod = parts.alpha[j];
      for (int site = 0; site < N; ++site)
        prod *= parts.deform[a.site_class(site)][j][digits[site]];
      amp += prod;
    }
    psi[static_cast<Eigen::Index>(b)] = amp * std::polar(1.0, angle);
  }

  // local unitaries, one site at a time
  for (int site = 0; site < N; ++site) {
    const Eigen::MatrixXcd u = cayley(parts.atilde[a.site_class(site)]).u;
    std::size_t stride = 1;
    for (int k = site + 1; k < N; ++k) stride *= n;
    const std::size_t block = stride * n;
    Eigen::VectorXcd scratch(n);
    for (std::size_t base = 0; base < dim; base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (int s = 0; s < n; ++s) scratch[s] = psi[base + off + s * stride];
        for (int s = 0; s < n; ++s) {
          Complex v = 0.0;
          for (int t = 0; t < n; ++t) v += u(s, t) * scratch[t];
          psi[base + off + s * stride] = v;
        }
      }
    }
  }

  const double norm = psi.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw DegenerateStateError("oracle: state vector has zero norm");
  return psi / norm;
}

Eigen::MatrixXcd brute_force_rdm(const Eigen::VectorXcd& psi, int levels, int num_sites,
                                 std::span<const int> subset) {
  const std::size_t dim = static_cast<std::size_t>(psi.size());
  const int M = static_cast<int>(subset.size());
  std::size_t sub_dim = 1;
  for (int i = 0; i < M; ++i) sub_dim *= levels;

  // reshape psi into (subset levels) x (environment configurations)
  std::vector<int> digits(num_sites, 0);
  Eigen::MatrixXcd reshaped(sub_dim, dim / sub_dim);
  std::vector<std::size_t> env_counter_for;  // per-digit: 1 if env site
  for (std::size_t b = 0; b < dim; ++b) {
    std::size_t rest = b;
    for (int site = num_sites - 1; site >= 0; --site) {
      digits[site] = static_cast<int>(rest % levels);
      rest /= levels;
    }
    std::size_t row = 0;
    for (int p = 0; p < M; ++p) row = row * levels + digits[subset[p]];
    std::size_t col = 0;
    for (int site = 0; site < num_sites; ++site) {
      bool in_subset = false;
      for (int p = 0; p < M; ++p) in_subset |= (subset[p] == site);
      if (!in_subset) col = col * levels + digits[site];
    }
    reshaped(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = psi[b];
  }
  Eigen::MatrixXcd rho = reshaped * reshaped.adjoint();
  const double trace = rho.trace().real();
  if (!(trace > 0.0)) throw DegenerateStateError("brute_force_rdm: zero trace");
  return rho / trace;
}

Complex state_expectation(const Eigen::VectorXcd& psi, int levels, int num_sites,
                          const Eigen::MatrixXcd& op, std::span<const int> subset) {
  const Eigen::MatrixXcd rho = brute_force_rdm(psi, levels, num_sites, subset);
  if (op.rows() != rho.rows()) throw ConfigError("state_expectation: operator dimension mismatch");
  return (op * rho).trace();
}

Eigen::MatrixXcd assemble_hamiltonian(const Geometry& g, const Model& model, int levels,
                                      std::size_t dim_cap) {
  const int N = g.num_sites();
  const std::size_t dim = checked_dimension(levels, N, dim_cap);
  const auto hs = bond_hamiltonians(g, model, levels);

  Eigen::MatrixXcd h_full = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<std::size_t> stride(N, 1);
  for (int site = N - 2; site >= 0; --site) stride[site] = stride[site + 1] * levels;

  std::vector<int> digits(N, 0);
  const auto& bonds = g.bonds();
  for (std::size_t b = 0; b < dim; ++b) {
    std::size_t rest = b;
    for (int site = N - 1; site >= 0; --site) {
      digits[site] = static_cast<int>(rest % levels);
      rest /= levels;
    }
    for (std::size_t i = 0; i < bonds.size(); ++i) {
      const int sa = digits[bonds[i].a], sb = digits[bonds[i].b];
      const int col_pair = sa * levels + sb;
      for (int sa2 = 0; sa2 < levels; ++sa2)
        for (int sb2 = 0; sb2 < levels; ++sb2) {
          const Complex v = hs[i](sa2 * levels + sb2, col_pair);
          if (v == Complex(0.0, 0.0)) continue;
          const std::ptrdiff_t delta =
              static_cast<std::ptrdiff_t>(sa2 - sa) * static_cast<std::ptrdiff_t>(stride[bonds[i].a]) +
              static_cast<std::ptrdiff_t>(sb2 - sb) * static_cast<std::ptrdiff_t>(stride[bonds[i].b]);
          h_full(static_cast<Eigen::Index>(b) + delta, static_cast<Eigen::Index>(b)) +=
              static_cast<double>(bonds[i].multiplicity) * v;
        }
    }
  }
  return h_full;
}

GroundState exact_ground(const Geometry& g, const Model& model, int levels, std::size_t dim_cap) {
  const Eigen::MatrixXcd h = assemble_hamiltonian(g, model, levels, dim_cap);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalAbort("exact_ground: eigensolver failed");
  GroundState gs;
  gs.energy = solver.eigenvalues()(0);
  gs.vector = solver.eigenvectors().col(0);
  const double residual = (h * gs.vector - gs.energy * gs.vector).norm();
  if (residual > 1e-9 * std::max(1.0, std::abs(gs.energy)))
    throw NumericalAbort("exact_ground: eigenpair residual too large");
  return gs;
}

}  // namespace wgs::oracle
