#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "wgs/varstate.hpp"

namespace wgs {

enum class ModelKind { XY, BoseHubbard };

/// Hamiltonian selection with its couplings. Single-site terms are absorbed
/// evenly into the incident bond terms (1/z per incident bond slot).
struct Model {
  ModelKind kind = ModelKind::XY;
  // XY with transverse field: (1+gamma)/2 XX + (1-gamma)/2 YY + B sum_a Z_a
  double field = 0.0;  // B
  double gamma = 1.0;
  // Bose-Hubbard (energies in units of the repulsion U by default)
  double hopping = 0.0;    // J
  double repulsion = 1.0;  // U
  double mu = 0.0;

  static Model xy(double field, double gamma);
  static Model bose_hubbard(double hopping, double mu, double repulsion = 1.0);

  /// Named access for sweeps: "B", "gamma", "J", "mu", "U".
  double& param(const std::string& name);
  double param(const std::string& name) const;
  std::map<std::string, double> point() const;
  int required_levels() const { return kind == ModelKind::XY ? 2 : 0; }  // 0 = any n >= 2
};

// Pauli matrices and truncated ladder operators.
Eigen::Matrix2cd pauli(int i);  // 0 -> x, 1 -> y, 2 -> z
Eigen::MatrixXcd annihilation_operator(int levels);
Eigen::MatrixXcd number_operator(int levels);

Eigen::MatrixXcd xy_bond_hamiltonian(const Model& m, int levels, int z_a, int z_b);
Eigen::MatrixXcd bh_bond_hamiltonian(const Model& m, int levels, int z_a, int z_b);
Eigen::MatrixXcd bond_hamiltonian(const Model& m, int levels, int z_a, int z_b);

/// One Hermitian matrix per geometry bond (aligned with geometry.bonds()).
std::vector<Eigen::MatrixXcd> bond_hamiltonians(const Geometry& g, const Model& m, int levels);

/// E(x) = sum over bonds (with multiplicity) of tr H_ab rho_ab.
double energy(const Ansatz& a, const Model& m, const Eigen::VectorXd& x);

/// (1/N) sum_a <n_a>.
double mean_density(const Ansatz& a, const Eigen::VectorXd& x);

/// (1/N) sum_a sqrt(<n_a^2> - <n_a>^2); small negative variances are clamped,
/// ones beyond -1e-10 raise NumericalAbort.
double mean_compressibility(const Ansatz& a, const Eigen::VectorXd& x);

/// C_ij = <s_i^(a) s_j^(b)> - <s_i^(a)><s_j^(b)>, i,j in {x,y,z}; n = 2 only.
Eigen::Matrix3d correlation_matrix(const Ansatz& a, const Eigen::VectorXd& x, int site_a, int site_b);
double max_singular_value(const Eigen::Matrix3d& c);

/// gamma_d = (1/N) sum_a <n_a n_{a+d}> - rho^2 for a nonzero displacement d.
/// The raw (1/N) sum_a <n_a n_{a+d}> is returned through `raw` when non-null.
double density_density_correlation(const Ansatz& a, const Eigen::VectorXd& x,
                                   std::array<int, 2> displacement, double* raw = nullptr);

/// (1/N) sum_a [ <s_i^(a) s_j^(a+d)> - <s_i^(a)><s_j^(a+d)> ]; n = 2 only.
/// Zero displacement is allowed and treats s_i s_j as a single-site operator.
double mean_two_point_correlation(const Ansatz& a, const Eigen::VectorXd& x, int pauli_i,
                                  int pauli_j, std::array<int, 2> displacement);

}  // namespace wgs
