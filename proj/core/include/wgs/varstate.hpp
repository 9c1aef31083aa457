#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "wgs/geometry.hpp"

namespace wgs {

using Complex = std::complex<double>;

/// Optional periodic sharing of the site-local parameters (deformations and
/// unitary generators): sites whose coordinates agree modulo the period
/// vector share one parameter set. Off by default; enforcing such symmetry
/// tends to trap the minimiser, so it is an explicit opt-in.
struct LocalSymmetry {
  int num_classes = 0;
  std::vector<int> site_class;  // size N

  static LocalSymmetry identity(int num_sites);
  static LocalSymmetry periodic(const Geometry& g, const std::array<int, 2>& periods);
  bool trivial() const { return num_classes == static_cast<int>(site_class.size()); }
};

/// Block offsets of the flat real parameter vector x. Layout (fixed):
///   [ phases | deformations (Re,Im per entry, branch-major) |
///     superposition coefficients (Re,Im) | unitary generators ]
/// Phase matrices are (n-1)x(n-1); symmetric index maps store the upper
/// triangle including the diagonal, the None map stores all entries row-major.
/// Deformation and superposition parameters are stored as offsets from 1:
/// stored 0 means coefficient 1, so the zero vector is the plain |+...+>
/// state. Unitary generators store, per class: n diagonal reals then the
/// strict upper triangle row-major as (Re, Im).
struct Layout {
  int num_sites = 0;
  int levels = 0;    // n
  int branches = 0;  // m
  int num_phase_matrices = 0;
  bool symmetric_phases = false;
  int num_classes = 0;

  std::size_t phase_entries_per_matrix = 0;
  std::size_t phase_offset = 0, phase_size = 0;
  std::size_t deform_offset = 0, deform_size = 0;
  std::size_t alpha_offset = 0, alpha_size = 0;
  std::size_t unitary_offset = 0, unitary_size = 0;
  std::size_t total = 0;  // K

  // s, t are upper indices in 1..n-1.
  std::size_t phase_index(int r, int s, int t) const;
  std::size_t deform_index(int cls, int branch, int level, bool imag) const;
  std::size_t alpha_index(int branch, bool imag) const;
  std::size_t unitary_base(int cls) const { return unitary_offset + static_cast<std::size_t>(cls) * levels * levels; }
  std::size_t unitary_diag_index(int cls, int k) const { return unitary_base(cls) + k; }
  std::size_t unitary_upper_index(int cls, int k, int l, bool imag) const;
};

/// The variational state family over a geometry: n levels per site, m
/// superposed branches, a phase-index map, and optional local symmetry.
/// Immutable after construction; shared concurrent reads are safe.
struct Ansatz {
  Geometry geometry;
  int levels = 2;
  int branches = 1;
  PhaseIndexMap phases;
  LocalSymmetry local_sym;
  Layout layout;

  static Ansatz make(Geometry g, int levels, int branches, PhaseMode mode,
                     int cutoff_distance = -1,
                     std::optional<std::array<int, 2>> local_periods = std::nullopt);
  Ansatz with_branches(int new_branches) const;

  int num_sites() const { return geometry.num_sites(); }
  int site_class(int site) const { return local_sym.site_class[site]; }

  /// Phi_{ab}^{st} with every storage convention applied: zero when s or t is
  /// level 0 or the pair is frozen; transposed access for b < a in None mode.
  double phase_entry(const Eigen::VectorXd& x, int site_a, int site_b, int s, int t) const;
  /// Flat index of the stored parameter behind phase_entry, or nullopt when
  /// the entry is not a parameter (level 0 or frozen pair).
  std::optional<std::size_t> phase_slot(int site_a, int site_b, int s, int t) const;
};

Layout make_layout(int num_sites, int levels, int branches, int num_phase_matrices,
                   bool symmetric_phases, int num_classes);

/// Structured view of the parameter vector. Deformations and superposition
/// coefficients hold the complex *values* (stored offsets already applied).
struct ParameterParts {
  std::vector<Eigen::MatrixXd> phase;                    // R matrices, (n-1)x(n-1)
  std::vector<std::vector<Eigen::VectorXcd>> deform;     // [class][branch], length n, [0] == 1
  Eigen::VectorXcd alpha;                                // m
  std::vector<Eigen::MatrixXcd> atilde;                  // per class, upper triangular
};

Eigen::VectorXd pack(const Ansatz& a, const ParameterParts& parts);
ParameterParts unpack(const Ansatz& a, const Eigen::VectorXd& x);

struct CayleyResult {
  Eigen::MatrixXcd u;               // (i1 + A)(i1 - A)^{-1}
  Eigen::MatrixXcd resolvent_minus;  // (i1 - A)^{-1}
  Eigen::MatrixXcd resolvent_plus;   // (i1 + A)^{-1}
};

/// Cayley transform of A = Atilde + Atilde^dagger. Throws CayleySingularError
/// if the generator is non-finite or the solve breaks down.
CayleyResult cayley(const Eigen::MatrixXcd& atilde);

/// Diagonal of the two-site phase gate W_Phi as a length n^2 vector
/// (entries with either level 0 are exactly 1).
Eigen::VectorXcd phase_gate_diagonal(const Eigen::MatrixXd& phi, int levels);

struct InitRanges {
  std::array<double, 2> phase = {-5.0, 5.0};
  std::array<double, 2> deform = {-5.0, 5.0};
  std::array<double, 2> alpha = {-5.0, 5.0};
  std::array<double, 2> unitary = {-5.0, 5.0};
};

Eigen::VectorXd random_init(const Ansatz& a, std::uint64_t seed, const InitRanges& ranges = {});

/// Extends x by one superposition branch: existing parameters are preserved
/// bit-exactly, the new branch's deformations are drawn from deform_range and
/// the new coefficient gets modulus <= alpha_scale.
Eigen::VectorXd extend_superposition(const Ansatz& a, const Eigen::VectorXd& x, std::uint64_t seed,
                                     double alpha_scale = 0.1,
                                     std::array<double, 2> deform_range = {-5.0, 5.0});

}  // namespace wgs
