#pragma once

#include <Eigen/Dense>
#include <span>

#include "wgs/models.hpp"
#include "wgs/varstate.hpp"

namespace wgs::oracle {

/// Builds the full n^N state vector by literal evaluation of the ansatz:
/// deform |+>^N per branch, apply every phase gate, sum branches, apply the
/// local unitaries, normalise. Site 0 is the most significant basis digit.
/// Deliberately shares no kernels with the reduced-density-matrix engine.
Eigen::VectorXcd build_state(const Ansatz& a, const Eigen::VectorXd& x,
                             std::size_t dim_cap = std::size_t{1} << 20);

/// Exact partial trace onto `subset` (kept in the given order).
Eigen::MatrixXcd brute_force_rdm(const Eigen::VectorXcd& psi, int levels, int num_sites,
                                 std::span<const int> subset);

/// <psi|O_subset|psi> / <psi|psi> with O acting on `subset`.
Complex state_expectation(const Eigen::VectorXcd& psi, int levels, int num_sites,
                          const Eigen::MatrixXcd& op, std::span<const int> subset);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXcd vector;
};

/// Dense exact diagonalisation of the assembled bond Hamiltonian.
GroundState exact_ground(const Geometry& g, const Model& model, int levels,
                         std::size_t dim_cap = 4096);

/// The assembled Hamiltonian as a dense matrix (sum of embedded bond terms,
/// weighted by bond multiplicity).
Eigen::MatrixXcd assemble_hamiltonian(const Geometry& g, const Model& model, int levels,
                                      std::size_t dim_cap = 4096);

}  // namespace wgs::oracle
