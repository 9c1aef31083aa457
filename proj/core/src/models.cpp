#include "wgs/models.hpp"

#include <cmath>

#include "eval_internal.hpp"
#include "wgs/errors.hpp"
#include "wgs/rdm.hpp"

namespace wgs {

Model Model::xy(double field, double gamma) {
  Model m;
  m.kind = ModelKind::XY;
  m.field = field;
  m.gamma = gamma;
  return m;
}

Model Model::bose_hubbard(double hopping, double mu, double repulsion) {
  Model m;
  m.kind = ModelKind::BoseHubbard;
  m.hopping = hopping;
  m.mu = mu;
  m.repulsion = repulsion;
  return m;
}

double& Model::param(const std::string& name) {
  if (name == "B") return field;
  if (name == "gamma") return gamma;
  if (name == "J") return hopping;
  if (name == "U") return repulsion;
  if (name == "mu") return mu;
  throw ConfigError("unknown model parameter: " + name);
}

double Model::param(const std::string& name) const { return const_cast<Model*>(this)->param(name); }

std::map<std::string, double> Model::point() const {
  if (kind == ModelKind::XY) return {{"B", field}, {"gamma", gamma}};
  return {{"J", hopping}, {"U", repulsion}, {"mu", mu}};
}

Eigen::Matrix2cd pauli(int i) {
  Eigen::Matrix2cd p;
  const Complex i1(0.0, 1.0);
  switch (i) {
    case 0: p << 0, 1, 1, 0; break;
    case 1: p << 0, -i1, i1, 0; break;
    case 2: p << 1, 0, 0, -1; break;
    default: throw ConfigError("pauli index must be 0, 1 or 2");
  }
  return p;
}

Eigen::MatrixXcd annihilation_operator(int levels) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) b(k - 1, k) = std::sqrt(static_cast<double>(k));
  return b;
}

Eigen::MatrixXcd number_operator(int levels) {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(levels, levels);
  for (int k = 0; k < levels; ++k) n(k, k) = k;
  return n;
}

Eigen::MatrixXcd xy_bond_hamiltonian(const Model& m, int levels, int z_a, int z_b) {
  if (levels != 2) throw ConfigError("the XY model requires 2 levels per site");
  const Eigen::Matrix2cd sx = pauli(0), sy = pauli(1), sz = pauli(2);
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::MatrixXcd h = 0.5 * (1.0 + m.gamma) * detail::kron(sx, sx) +
                       0.5 * (1.0 - m.gamma) * detail::kron(sy, sy);
  h += (m.field / z_a) * detail::kron(sz, id);
  h += (m.field / z_b) * detail::kron(id, sz);
  return h;
}

Eigen::MatrixXcd bh_bond_hamiltonian(const Model& m, int levels, int z_a, int z_b) {
  if (levels < 2) throw ConfigError("the Bose-Hubbard model requires at least 2 levels");
  const Eigen::MatrixXcd b = annihilation_operator(levels);
  const Eigen::MatrixXcd bd = b.adjoint();
  const Eigen::MatrixXcd n = number_operator(levels);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(levels, levels);
  const Eigen::MatrixXcd onsite =
      0.5 * m.repulsion * (n * (n - id)) - m.mu * n;
  Eigen::MatrixXcd h = -m.hopping * (detail::kron(bd, b) + detail::kron(b, bd));
  h += (1.0 / z_a) * detail::kron(onsite, id);
  h += (1.0 / z_b) * detail::kron(id, onsite);
  return h;
}

Eigen::MatrixXcd bond_hamiltonian(const Model& m, int levels, int z_a, int z_b) {
  return m.kind == ModelKind::XY ? xy_bond_hamiltonian(m, levels, z_a, z_b)
                                 : bh_bond_hamiltonian(m, levels, z_a, z_b);
}

std::vector<Eigen::MatrixXcd> bond_hamiltonians(const Geometry& g, const Model& m, int levels) {
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(g.bonds().size());
  for (const Bond& b : g.bonds())
    out.push_back(bond_hamiltonian(m, levels, g.coordination(b.a), g.coordination(b.b)));
  return out;
}

double energy(const Ansatz& a, const Model& m, const Eigen::VectorXd& x) {
  const auto hs = bond_hamiltonians(a.geometry, m, a.levels);
  const detail::PreparedState st = detail::prepare_state(a, x);
  Complex e = 0.0;
  const auto& bonds = a.geometry.bonds();
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    const std::array<int, 2> subset = {bonds[i].a, bonds[i].b};
    const Eigen::MatrixXcd rho = detail::rdm_normalized(a, x, st, subset, RdmOptions{});
    e += static_cast<double>(bonds[i].multiplicity) * (hs[i] * rho).trace();
  }
  if (std::abs(e.imag()) > 1e-10 * (1.0 + std::abs(e.real())))
    throw NumericalAbort("energy: imaginary residue too large");
  return e.real();
}

double mean_density(const Ansatz& a, const Eigen::VectorXd& x) {
  const Eigen::MatrixXcd n_op = number_operator(a.levels);
  const detail::PreparedState st = detail::prepare_state(a, x);
  double sum = 0.0;
  for (int site = 0; site < a.num_sites(); ++site) {
    const std::array<int, 1> subset = {site};
    sum += (n_op * detail::rdm_normalized(a, x, st, subset, RdmOptions{})).trace().real();
  }
  return sum / a.num_sites();
}

double mean_compressibility(const Ansatz& a, const Eigen::VectorXd& x) {
  const Eigen::MatrixXcd n_op = number_operator(a.levels);
  const Eigen::MatrixXcd n2_op = n_op * n_op;
  const detail::PreparedState st = detail::prepare_state(a, x);
  double sum = 0.0;
  for (int site = 0; site < a.num_sites(); ++site) {
    const std::array<int, 1> subset = {site};
    const Eigen::MatrixXcd rho = detail::rdm_normalized(a, x, st, subset, RdmOptions{});
    const double n1 = (n_op * rho).trace().real();
    const double n2 = (n2_op * rho).trace().real();
    double var = n2 - n1 * n1;
    if (var < -1e-10) throw NumericalAbort("compressibility: negative occupation variance");
    var = std::max(var, 0.0);
    sum += std::sqrt(var);
  }
  return sum / a.num_sites();
}

Eigen::Matrix3d correlation_matrix(const Ansatz& a, const Eigen::VectorXd& x, int site_a,
                                   int site_b) {
  if (a.levels != 2) throw ConfigError("correlation_matrix requires 2 levels per site");
  const detail::PreparedState st = detail::prepare_state(a, x);
  const std::array<int, 2> pair = {site_a, site_b};
  const std::array<int, 1> sa = {site_a}, sb = {site_b};
  const Eigen::MatrixXcd rho_ab = detail::rdm_normalized(a, x, st, pair, RdmOptions{});
  const Eigen::MatrixXcd rho_a = detail::rdm_normalized(a, x, st, sa, RdmOptions{});
  const Eigen::MatrixXcd rho_b = detail::rdm_normalized(a, x, st, sb, RdmOptions{});
  Eigen::Matrix3d c;
  for (int i = 0; i < 3; ++i) {
    const double mean_i = (pauli(i) * rho_a).trace().real();
    for (int j = 0; j < 3; ++j) {
      const double mean_j = (pauli(j) * rho_b).trace().real();
      const Complex two = (detail::kron(pauli(i), pauli(j)) * rho_ab).trace();
      if (std::abs(two.imag()) > 1e-10 * (1.0 + std::abs(two.real())))
        throw NumericalAbort("correlation_matrix: imaginary residue too large");
      c(i, j) = two.real() - mean_i * mean_j;
    }
  }
  return c;
}

double max_singular_value(const Eigen::Matrix3d& c) {
  return c.jacobiSvd().singularValues()(0);
}

namespace {

int displaced_site(const Geometry& g, int site, std::array<int, 2> displacement) {
  auto c = g.coords(site);
  c[0] += displacement[0];
  c[1] += displacement[1];
  const int out = g.site_at(c);
  if (out < 0) throw ConfigError("displacement leaves an open lattice");
  return out;
}

}  // namespace

double density_density_correlation(const Ansatz& a, const Eigen::VectorXd& x,
                                   std::array<int, 2> displacement, double* raw) {
  if (a.geometry.dimension() == 1) displacement[1] = 0;
  const Eigen::MatrixXcd n_op = number_operator(a.levels);
  const Eigen::MatrixXcd nn = detail::kron(n_op, n_op);
  const detail::PreparedState st = detail::prepare_state(a, x);
  double sum = 0.0, density = 0.0;
  for (int site = 0; site < a.num_sites(); ++site) {
    const int other = displaced_site(a.geometry, site, displacement);
    if (other == site) throw ConfigError("density_density: displacement must be nonzero");
    const std::array<int, 2> pair = {site, other};
    sum += (nn * detail::rdm_normalized(a, x, st, pair, RdmOptions{})).trace().real();
    const std::array<int, 1> single = {site};
    density += (n_op * detail::rdm_normalized(a, x, st, single, RdmOptions{})).trace().real();
  }
  sum /= a.num_sites();
  density /= a.num_sites();
  if (raw) *raw = sum;
  return sum - density * density;
}

double mean_two_point_correlation(const Ansatz& a, const Eigen::VectorXd& x, int pauli_i,
                                  int pauli_j, std::array<int, 2> displacement) {
  if (a.levels != 2) throw ConfigError("mean_two_point_correlation requires 2 levels per site");
  if (a.geometry.dimension() == 1) displacement[1] = 0;
  const detail::PreparedState st = detail::prepare_state(a, x);
  const Eigen::Matrix2cd si = pauli(pauli_i), sj = pauli(pauli_j);
  double sum = 0.0;
  for (int site = 0; site < a.num_sites(); ++site) {
    const int other = displaced_site(a.geometry, site, displacement);
    const std::array<int, 1> sa = {site}, sb = {other};
    const double mi = (si * detail::rdm_normalized(a, x, st, sa, RdmOptions{})).trace().real();
    const double mj = (sj * detail::rdm_normalized(a, x, st, sb, RdmOptions{})).trace().real();
    double two;
    if (other == site) {
      const Eigen::Matrix2cd prod = si * sj;
      const Complex v = (prod * detail::rdm_normalized(a, x, st, sa, RdmOptions{})).trace();
      if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real())))
        throw NumericalAbort("two_point: imaginary residue too large");
      two = v.real();
    } else {
      const std::array<int, 2> pair = {site, other};
      const Complex v =
          (detail::kron(si, sj) * detail::rdm_normalized(a, x, st, pair, RdmOptions{})).trace();
      if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real())))
        throw NumericalAbort("two_point: imaginary residue too large");
      two = v.real();
    }
    sum += two - mi * mj;
  }
  return sum / a.num_sites();
}

}  // namespace wgs
