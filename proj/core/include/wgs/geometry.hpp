#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace wgs {

/// Unordered nearest-neighbour pair, a < b. On very small periodic lattices
/// (L = 2) both directions along an axis reach the same neighbour; such pairs
/// are deduplicated and carry multiplicity 2 so energy sums stay correct.
struct Bond {
  int a = 0;
  int b = 0;
  int multiplicity = 1;
};

struct GeometrySpec {
  int dimension = 1;                       // 1 or 2
  std::array<int, 2> lengths = {2, 1};     // sites per axis (axis 1 unused in 1D)
  std::array<bool, 2> pbc = {true, true};
};

/// Regular lattice (ring or torus/strip): site set, bond list, coordinates.
/// Sites are indexed row-major: index = c0 * L1 + c1.
class Geometry {
 public:
  static Geometry build(const GeometrySpec& spec);

  int dimension() const { return spec_.dimension; }
  int num_sites() const { return num_sites_; }
  int length(int axis) const { return spec_.lengths[axis]; }
  bool periodic(int axis) const { return spec_.pbc[axis]; }
  bool fully_periodic() const;
  const GeometrySpec& spec() const { return spec_; }

  const std::vector<Bond>& bonds() const { return bonds_; }

  /// Incident bond slots of a site, counted with multiplicity.
  int coordination(int site) const { return coordination_[site]; }

  std::array<int, 2> coords(int site) const;
  /// Maps coordinates to a site index, wrapping along periodic axes.
  /// Returns -1 if the coordinate falls outside an open axis.
  int site_at(std::array<int, 2> c) const;

  /// Minimal number of lattice steps between two sites.
  int graph_distance(int a, int b) const;

  /// Canonical representative of the displacement orbit of (a, b) under the
  /// lattice symmetry group (translations + point group). Components are
  /// wrapped to at most L/2, made nonnegative, and sorted descending when the
  /// two axes are exchangeable (square torus). 1-D returns {distance, 0}.
  std::array<int, 2> displacement_class(int a, int b) const;

 private:
  GeometrySpec spec_;
  int num_sites_ = 0;
  std::vector<Bond> bonds_;
  std::vector<int> coordination_;
};

enum class PhaseMode { None, Orbit, Distance, Cutoff };

const char* to_string(PhaseMode mode);
PhaseMode phase_mode_from_string(const std::string& s);

/// Symmetric map nu: V x V -> {0..R-1} assigning a shared phase matrix to
/// every site pair. In Cutoff mode pairs beyond the distance threshold map to
/// kFrozen; their phases are identically zero and carry no parameters.
struct PhaseIndexMap {
  static constexpr int kFrozen = -2;

  PhaseMode mode = PhaseMode::None;
  int num_sites = 0;
  int num_matrices = 0;  // R: number of free phase matrices
  int cutoff_distance = -1;
  std::vector<int> nu;  // N*N, -1 on the diagonal

  int operator()(int a, int b) const { return nu[static_cast<std::size_t>(a) * num_sites + b]; }
  /// Phase matrices are symmetric in their upper indices whenever one matrix
  /// can serve a pair in both orientations (every mode except None).
  bool symmetric() const { return mode != PhaseMode::None; }
};

PhaseIndexMap build_phase_index_map(const Geometry& g, PhaseMode mode, int cutoff_distance = -1);

/// The closed-form matrix count the source material quotes for an L x L
/// torus; kept for reporting only (enumeration is authoritative, the formula
/// disagrees with explicit counts).
int square_lattice_phase_count_formula(int L);

}  // namespace wgs
