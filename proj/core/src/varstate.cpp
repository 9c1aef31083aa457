#include "wgs/varstate.hpp"

#include <cmath>

#include "wgs/errors.hpp"
#include "wgs/rng.hpp"

namespace wgs {

LocalSymmetry LocalSymmetry::identity(int num_sites) {
  LocalSymmetry ls;
  ls.num_classes = num_sites;
  ls.site_class.resize(num_sites);
  for (int i = 0; i < num_sites; ++i) ls.site_class[i] = i;
  return ls;
}

LocalSymmetry LocalSymmetry::periodic(const Geometry& g, const std::array<int, 2>& periods) {
  std::array<int, 2> p = periods;
  if (g.dimension() == 1) p[1] = 1;
  for (int axis = 0; axis < g.dimension(); ++axis) {
    if (p[axis] < 1 || g.length(axis) % p[axis] != 0)
      throw ConfigError("local symmetry periods must divide the lattice lengths");
    if (!g.periodic(axis) && p[axis] != g.length(axis))
      throw ConfigError("periodic local symmetry requires periodic boundaries");
  }
  LocalSymmetry ls;
  ls.num_classes = p[0] * p[1];
  ls.site_class.resize(g.num_sites());
  for (int s = 0; s < g.num_sites(); ++s) {
    auto c = g.coords(s);
    ls.site_class[s] = (c[0] % p[0]) * p[1] + (c[1] % p[1]);
  }
  return ls;
}

Layout make_layout(int num_sites, int levels, int branches, int num_phase_matrices,
                   bool symmetric_phases, int num_classes) {
  Layout lay;
  lay.num_sites = num_sites;
  lay.levels = levels;
  lay.branches = branches;
  lay.num_phase_matrices = num_phase_matrices;
  lay.symmetric_phases = symmetric_phases;
  lay.num_classes = num_classes;

  const std::size_t s = levels - 1;
  lay.phase_entries_per_matrix = symmetric_phases ? s * (s + 1) / 2 : s * s;
  lay.phase_offset = 0;
  lay.phase_size = static_cast<std::size_t>(num_phase_matrices) * lay.phase_entries_per_matrix;
  lay.deform_offset = lay.phase_offset + lay.phase_size;
  lay.deform_size = 2ul * branches * num_classes * s;
  lay.alpha_offset = lay.deform_offset + lay.deform_size;
  lay.alpha_size = 2ul * branches;
  lay.unitary_offset = lay.alpha_offset + lay.alpha_size;
  lay.unitary_size = static_cast<std::size_t>(num_classes) * levels * levels;
  lay.total = lay.unitary_offset + lay.unitary_size;
  return lay;
}

std::size_t Layout::phase_index(int r, int s, int t) const {
  const std::size_t base = phase_offset + static_cast<std::size_t>(r) * phase_entries_per_matrix;
  const int w = levels - 1;
  if (symmetric_phases) {
    if (s > t) std::swap(s, t);
    // upper triangle incl. diagonal, row-major, 1-based upper indices
    const int i = s - 1, j = t - 1;
    return base + static_cast<std::size_t>(i) * w - static_cast<std::size_t>(i) * (i - 1) / 2 + (j - i);
  }
  return base + static_cast<std::size_t>(s - 1) * w + (t - 1);
}

std::size_t Layout::deform_index(int cls, int branch, int level, bool imag) const {
  const int s = levels - 1;
  return deform_offset +
         2 * (static_cast<std::size_t>(branch) * num_classes * s + static_cast<std::size_t>(cls) * s +
              (level - 1)) +
         (imag ? 1 : 0);
}

std::size_t Layout::alpha_index(int branch, bool imag) const {
  return alpha_offset + 2 * static_cast<std::size_t>(branch) + (imag ? 1 : 0);
}

std::size_t Layout::unitary_upper_index(int cls, int k, int l, bool imag) const {
  // after the n diagonal entries: strict upper triangle row-major
  const int n = levels;
  const std::size_t tri = static_cast<std::size_t>(k) * n - static_cast<std::size_t>(k) * (k + 1) / 2 +
                          (l - k - 1);
  return unitary_base(cls) + n + 2 * tri + (imag ? 1 : 0);
}

Ansatz Ansatz::make(Geometry g, int levels, int branches, PhaseMode mode, int cutoff_distance,
                    std::optional<std::array<int, 2>> local_periods) {
  if (levels < 2) throw ConfigError("ansatz: levels must be >= 2");
  if (branches < 1) throw ConfigError("ansatz: branches must be >= 1");
  Ansatz a;
  a.geometry = std::move(g);
  a.levels = levels;
  a.branches = branches;
  a.phases = build_phase_index_map(a.geometry, mode, cutoff_distance);
  a.local_sym = local_periods ? LocalSymmetry::periodic(a.geometry, *local_periods)
                              : LocalSymmetry::identity(a.geometry.num_sites());
  a.layout = make_layout(a.geometry.num_sites(), levels, branches, a.phases.num_matrices,
                         a.phases.symmetric(), a.local_sym.num_classes);
  return a;
}

Ansatz Ansatz::with_branches(int new_branches) const {
  Ansatz a = *this;
  a.branches = new_branches;
  a.layout = make_layout(geometry.num_sites(), levels, new_branches, phases.num_matrices,
                         phases.symmetric(), local_sym.num_classes);
  return a;
}

double Ansatz::phase_entry(const Eigen::VectorXd& x, int site_a, int site_b, int s, int t) const {
  if (s == 0 || t == 0) return 0.0;
  const int r = phases(site_a, site_b);
  if (r == PhaseIndexMap::kFrozen) return 0.0;
  if (!phases.symmetric() && site_a > site_b) std::swap(s, t);
  return x[layout.phase_index(r, s, t)];
}

std::optional<std::size_t> Ansatz::phase_slot(int site_a, int site_b, int s, int t) const {
  if (s == 0 || t == 0) return std::nullopt;
  const int r = phases(site_a, site_b);
  if (r == PhaseIndexMap::kFrozen) return std::nullopt;
  if (!phases.symmetric() && site_a > site_b) std::swap(s, t);
  return layout.phase_index(r, s, t);
}

Eigen::VectorXd pack(const Ansatz& a, const ParameterParts& parts) {
  const Layout& lay = a.layout;
  const int n = a.levels, m = a.branches, w = n - 1;

  if (static_cast<int>(parts.phase.size()) != lay.num_phase_matrices)
    throw ConfigError("pack: wrong number of phase matrices");
  if (static_cast<int>(parts.deform.size()) != lay.num_classes)
    throw ConfigError("pack: wrong number of deformation classes");
  if (parts.alpha.size() != m) throw ConfigError("pack: wrong number of superposition coefficients");
  if (static_cast<int>(parts.atilde.size()) != lay.num_classes)
    throw ConfigError("pack: wrong number of unitary generators");

  Eigen::VectorXd x(lay.total);
  for (int r = 0; r < lay.num_phase_matrices; ++r) {
    const Eigen::MatrixXd& phi = parts.phase[r];
    if (phi.rows() != w || phi.cols() != w) throw ConfigError("pack: phase matrix has wrong shape");
    for (int s = 1; s <= w; ++s)
      for (int t = lay.symmetric_phases ? s : 1; t <= w; ++t)
        x[lay.phase_index(r, s, t)] = phi(s - 1, t - 1);
  }
  for (int cls = 0; cls < lay.num_classes; ++cls) {
    if (static_cast<int>(parts.deform[cls].size()) != m)
      throw ConfigError("pack: wrong branch count in deformations");
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXcd& d = parts.deform[cls][j];
      if (d.size() != n) throw ConfigError("pack: deformation vector has wrong length");
      if (d[0] != Complex(1.0, 0.0)) throw ConfigError("pack: deformation level-0 entry must be 1");
      for (int s = 1; s < n; ++s) {
        const Complex stored = d[s] - 1.0;  // offset storage
        x[lay.deform_index(cls, j, s, false)] = stored.real();
        x[lay.deform_index(cls, j, s, true)] = stored.imag();
      }
    }
  }
  for (int j = 0; j < m; ++j) {
    const Complex stored = parts.alpha[j] - 1.0;
    x[lay.alpha_index(j, false)] = stored.real();
    x[lay.alpha_index(j, true)] = stored.imag();
  }
  for (int cls = 0; cls < lay.num_classes; ++cls) {
    const Eigen::MatrixXcd& at = parts.atilde[cls];
    if (at.rows() != n || at.cols() != n) throw ConfigError("pack: generator has wrong shape");
    for (int k = 0; k < n; ++k) x[lay.unitary_diag_index(cls, k)] = at(k, k).real();
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        x[lay.unitary_upper_index(cls, k, l, false)] = at(k, l).real();
        x[lay.unitary_upper_index(cls, k, l, true)] = at(k, l).imag();
      }
  }
  return x;
}

ParameterParts unpack(const Ansatz& a, const Eigen::VectorXd& x) {
  const Layout& lay = a.layout;
  if (static_cast<std::size_t>(x.size()) != lay.total)
    throw ConfigError("unpack: parameter vector has wrong length");
  const int n = a.levels, m = a.branches, w = n - 1;

  ParameterParts p;
  p.phase.resize(lay.num_phase_matrices);
  for (int r = 0; r < lay.num_phase_matrices; ++r) {
    Eigen::MatrixXd phi(w, w);
    for (int s = 1; s <= w; ++s)
      for (int t = 1; t <= w; ++t) phi(s - 1, t - 1) = x[lay.phase_index(r, s, t)];
    p.phase[r] = std::move(phi);
  }
  p.deform.resize(lay.num_classes);
  for (int cls = 0; cls < lay.num_classes; ++cls) {
    p.deform[cls].resize(m);
    for (int j = 0; j < m; ++j) {
      Eigen::VectorXcd d(n);
      d[0] = 1.0;
      for (int s = 1; s < n; ++s)
        d[s] = 1.0 + Complex(x[lay.deform_index(cls, j, s, false)], x[lay.deform_index(cls, j, s, true)]);
      p.deform[cls][j] = std::move(d);
    }
  }
  p.alpha.resize(m);
  for (int j = 0; j < m; ++j)
    p.alpha[j] = 1.0 + Complex(x[lay.alpha_index(j, false)], x[lay.alpha_index(j, true)]);
  p.atilde.resize(lay.num_classes);
  for (int cls = 0; cls < lay.num_classes; ++cls) {
    Eigen::MatrixXcd at = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) at(k, k) = x[lay.unitary_diag_index(cls, k)];
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        at(k, l) = Complex(x[lay.unitary_upper_index(cls, k, l, false)],
                           x[lay.unitary_upper_index(cls, k, l, true)]);
    p.atilde[cls] = std::move(at);
  }
  return p;
}

CayleyResult cayley(const Eigen::MatrixXcd& atilde) {
  const int n = static_cast<int>(atilde.rows());
  if (!atilde.allFinite()) throw CayleySingularError("cayley: non-finite generator");
  const Eigen::MatrixXcd a = atilde + atilde.adjoint();
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Complex i1(0.0, 1.0);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_minus(i1 * id - a);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_plus(i1 * id + a);
  CayleyResult r;
  r.resolvent_minus = lu_minus.solve(id);
  r.resolvent_plus = lu_plus.solve(id);
  r.u = (i1 * id + a) * r.resolvent_minus;
  if (!r.u.allFinite() || !r.resolvent_minus.allFinite() || !r.resolvent_plus.allFinite())
    throw CayleySingularError("cayley: singular transform");
  // A Hermitian generator keeps (i1 - A) well clear of singularity; a failed
  // solve therefore indicates runaway parameters and aborts the evaluation.
  const double residual = ((i1 * id - a) * r.resolvent_minus - id).cwiseAbs().maxCoeff();
  if (!(residual < 1e-8 * (1.0 + a.cwiseAbs().maxCoeff())))
    throw CayleySingularError("cayley: solve residual too large");
  return r;
}

Eigen::VectorXcd phase_gate_diagonal(const Eigen::MatrixXd& phi, int levels) {
  Eigen::VectorXcd diag(levels * levels);
  for (int s = 0; s < levels; ++s)
    for (int t = 0; t < levels; ++t) {
      const double angle = (s == 0 || t == 0) ? 0.0 : phi(s - 1, t - 1);
      diag[s * levels + t] = std::polar(1.0, angle);
    }
  return diag;
}

Eigen::VectorXd random_init(const Ansatz& a, std::uint64_t seed, const InitRanges& ranges) {
  const Layout& lay = a.layout;
  Eigen::VectorXd x(lay.total);
  Rng rng(seed);
  for (std::size_t i = lay.phase_offset; i < lay.phase_offset + lay.phase_size; ++i)
    x[i] = rng.uniform(ranges.phase[0], ranges.phase[1]);
  for (std::size_t i = lay.deform_offset; i < lay.deform_offset + lay.deform_size; ++i)
    x[i] = rng.uniform(ranges.deform[0], ranges.deform[1]);
  for (std::size_t i = lay.alpha_offset; i < lay.alpha_offset + lay.alpha_size; ++i)
    x[i] = rng.uniform(ranges.alpha[0], ranges.alpha[1]);
  for (std::size_t i = lay.unitary_offset; i < lay.unitary_offset + lay.unitary_size; ++i)
    x[i] = rng.uniform(ranges.unitary[0], ranges.unitary[1]);
  return x;
}

Eigen::VectorXd extend_superposition(const Ansatz& a, const Eigen::VectorXd& x, std::uint64_t seed,
                                     double alpha_scale, std::array<double, 2> deform_range) {
  const Layout& old_lay = a.layout;
  if (static_cast<std::size_t>(x.size()) != old_lay.total)
    throw ConfigError("extend_superposition: parameter vector has wrong length");
  const Ansatz ext = a.with_branches(a.branches + 1);
  const Layout& lay = ext.layout;
  const int n = a.levels, m = a.branches;

  Eigen::VectorXd y(lay.total);
  Rng rng(seed);

  // phases unchanged
  y.segment(lay.phase_offset, lay.phase_size) = x.segment(old_lay.phase_offset, old_lay.phase_size);
  // existing branches copied, new branch random (branch-major: new block is
  // contiguous at the end of the deformation block)
  y.segment(lay.deform_offset, old_lay.deform_size) =
      x.segment(old_lay.deform_offset, old_lay.deform_size);
  for (int cls = 0; cls < lay.num_classes; ++cls)
    for (int s = 1; s < n; ++s) {
      y[lay.deform_index(cls, m, s, false)] = rng.uniform(deform_range[0], deform_range[1]);
      y[lay.deform_index(cls, m, s, true)] = rng.uniform(deform_range[0], deform_range[1]);
    }
  y.segment(lay.alpha_offset, old_lay.alpha_size) = x.segment(old_lay.alpha_offset, old_lay.alpha_size);
  // new coefficient value: small modulus, uniform phase
  const double rho = alpha_scale * rng.uniform();
  const double theta = rng.uniform(0.0, 2.0 * M_PI);
  const Complex alpha_value = std::polar(rho, theta);
  y[lay.alpha_index(m, false)] = alpha_value.real() - 1.0;
  y[lay.alpha_index(m, true)] = alpha_value.imag();
  y.segment(lay.unitary_offset, lay.unitary_size) =
      x.segment(old_lay.unitary_offset, old_lay.unitary_size);
  return y;
}

}  // namespace wgs
