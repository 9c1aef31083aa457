#include "wgs/geometry.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "wgs/errors.hpp"

namespace wgs {

Geometry Geometry::build(const GeometrySpec& spec) {
  if (spec.dimension != 1 && spec.dimension != 2)
    throw ConfigError("geometry: dimension must be 1 or 2");
  GeometrySpec s = spec;
  if (s.dimension == 1) {
    s.lengths[1] = 1;
    s.pbc[1] = true;
  }
  for (int axis = 0; axis < s.dimension; ++axis) {
    if (s.lengths[axis] < 2) throw ConfigError("geometry: each length must be >= 2");
  }

  Geometry g;
  g.spec_ = s;
  g.num_sites_ = s.lengths[0] * s.lengths[1];

  // Enumerate forward neighbours along each axis, then deduplicate unordered
  // pairs, recording multiplicity (L=2 wrap produces the same pair twice).
  std::map<std::pair<int, int>, int> pair_count;
  for (int site = 0; site < g.num_sites_; ++site) {
    auto c = g.coords(site);
    for (int axis = 0; axis < s.dimension; ++axis) {
      auto cn = c;
      cn[axis] += 1;
      if (cn[axis] == s.lengths[axis]) {
        if (!s.pbc[axis]) continue;
        cn[axis] = 0;
      }
      int other = g.site_at(cn);
      if (other == site) continue;  // L=1 axis, cannot happen with length >= 2
      auto key = std::minmax(site, other);
      pair_count[{key.first, key.second}] += 1;
    }
  }
  for (const auto& [pair, count] : pair_count)
    g.bonds_.push_back(Bond{pair.first, pair.second, count});
  std::sort(g.bonds_.begin(), g.bonds_.end(),
            [](const Bond& x, const Bond& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

  g.coordination_.assign(g.num_sites_, 0);
  for (const Bond& b : g.bonds_) {
    g.coordination_[b.a] += b.multiplicity;
    g.coordination_[b.b] += b.multiplicity;
  }
  return g;
}

bool Geometry::fully_periodic() const {
  for (int axis = 0; axis < spec_.dimension; ++axis)
    if (!spec_.pbc[axis]) return false;
  return true;
}

std::array<int, 2> Geometry::coords(int site) const {
  return {site / spec_.lengths[1], site % spec_.lengths[1]};
}

int Geometry::site_at(std::array<int, 2> c) const {
  for (int axis = 0; axis < 2; ++axis) {
    int len = spec_.lengths[axis];
    if (spec_.pbc[axis]) {
      c[axis] %= len;
      if (c[axis] < 0) c[axis] += len;
    } else if (c[axis] < 0 || c[axis] >= len) {
      return -1;
    }
  }
  return c[0] * spec_.lengths[1] + c[1];
}

namespace {

// Minimal |delta| along one axis, honouring wrap. |delta| < len on entry.
int axis_distance(int delta, int len, bool pbc) {
  delta = std::abs(delta);
  if (pbc) delta = std::min(delta, len - delta);
  return delta;
}

}  // namespace

int Geometry::graph_distance(int a, int b) const {
  auto ca = coords(a), cb = coords(b);
  int d = 0;
  for (int axis = 0; axis < spec_.dimension; ++axis)
    d += axis_distance(cb[axis] - ca[axis], spec_.lengths[axis], spec_.pbc[axis]);
  return d;
}

std::array<int, 2> Geometry::displacement_class(int a, int b) const {
  if (a == b) throw ConfigError("displacement_class: sites must differ");
  auto ca = coords(a), cb = coords(b);
  std::array<int, 2> d = {0, 0};
  for (int axis = 0; axis < spec_.dimension; ++axis)
    d[axis] = axis_distance(cb[axis] - ca[axis], spec_.lengths[axis], spec_.pbc[axis]);
  // Axes are exchangeable only on a square torus (the 8-element point group);
  // otherwise reflections per axis are the only point symmetries.
  if (spec_.dimension == 2 && spec_.lengths[0] == spec_.lengths[1] && fully_periodic()) {
    if (d[1] > d[0]) std::swap(d[0], d[1]);
  }
  return d;
}

const char* to_string(PhaseMode mode) {
  switch (mode) {
    case PhaseMode::None: return "none";
    case PhaseMode::Orbit: return "orbit";
    case PhaseMode::Distance: return "distance";
    case PhaseMode::Cutoff: return "cutoff";
  }
  return "?";
}

PhaseMode phase_mode_from_string(const std::string& s) {
  if (s == "none") return PhaseMode::None;
  if (s == "orbit") return PhaseMode::Orbit;
  if (s == "distance") return PhaseMode::Distance;
  if (s == "cutoff") return PhaseMode::Cutoff;
  throw ConfigError("unknown phase mode: " + s);
}

PhaseIndexMap build_phase_index_map(const Geometry& g, PhaseMode mode, int cutoff_distance) {
  const int n = g.num_sites();
  PhaseIndexMap map;
  map.mode = mode;
  map.num_sites = n;
  map.cutoff_distance = cutoff_distance;
  map.nu.assign(static_cast<std::size_t>(n) * n, -1);

  if (mode != PhaseMode::None && !g.fully_periodic())
    throw ConfigError("phase symmetrisation requires full periodic boundary conditions");
  if (mode == PhaseMode::Cutoff && cutoff_distance < 0)
    throw ConfigError("cutoff mode requires a nonnegative cutoff distance");

  auto set = [&](int a, int b, int r) {
    map.nu[static_cast<std::size_t>(a) * n + b] = r;
    map.nu[static_cast<std::size_t>(b) * n + a] = r;
  };

  if (mode == PhaseMode::None) {
    int r = 0;
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) set(a, b, r++);
    map.num_matrices = r;
    return map;
  }

  // Orbit, Distance and Cutoff all share one mechanism: pairs are grouped by
  // a class label, labels are indexed in order of first appearance over the
  // sorted pair list (deterministic).
  std::map<std::array<int, 2>, int> classes;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      std::array<int, 2> label;
      if (mode == PhaseMode::Distance)
        label = {g.graph_distance(a, b), 0};
      else
        label = g.displacement_class(a, b);
      if (mode == PhaseMode::Cutoff && g.graph_distance(a, b) > cutoff_distance) {
        set(a, b, PhaseIndexMap::kFrozen);
        continue;
      }
      auto [it, inserted] = classes.try_emplace(label, static_cast<int>(classes.size()));
      set(a, b, it->second);
    }
  }
  map.num_matrices = static_cast<int>(classes.size());
  return map;
}

int square_lattice_phase_count_formula(int L) {
  int h = L / 2;
  return h * (h - 1) / 2;
}

}  // namespace wgs
