#pragma once

// Quadratic energy models of the Frenkel-Kontorova chain in matrix form:
//
//   E(y) = 1/2 (y - a)^T D^T E D (y - a) + 1/2 (y - b)^T K (y - b)
//
// for the fully atomistic chain, the uncoarsened atomistic-continuum chain
// and the coarsened quasicontinuum chain.

#include <cassert>
#include <span>
#include <string_view>
#include <vector>

#include "qcfk/banded.hpp"
#include "qcfk/chain_params.hpp"
#include "qcfk/partition.hpp"

namespace qcfk {

enum class Flavor { atomistic, ac, qc };

inline std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::atomistic: return "atomistic";
    case Flavor::ac: return "ac";
    case Flavor::qc: return "qc";
  }
  return "?";
}

struct QuadraticModel {
  Flavor flavor = Flavor::atomistic;
  std::vector<int> sites;           // atom index of each degree of freedom
  std::vector<double> dist_scale;   // row j of D is dist_scale[j] * (e_{j+1} - e_j)
  BandedSpdMatrix E;                // stiffness in distance space, bandwidth 1
  BandedSpdMatrix Kmis;             // misfit stiffness, bandwidth 0 or 1
  std::vector<double> a_eq;         // elastic equilibrium
  std::vector<double> b_eq;         // misfit equilibrium

  std::size_t dof() const noexcept { return sites.size(); }
  std::size_t bonds() const noexcept { return dist_scale.size(); }

  /// D y.
  std::vector<double> distances(std::span<const double> y) const {
    assert(y.size() == dof());
    std::vector<double> s(bonds());
    for (std::size_t b = 0; b < s.size(); ++b) s[b] = dist_scale[b] * (y[b + 1] - y[b]);
    return s;
  }

  /// D^T s.
  std::vector<double> distances_transpose(std::span<const double> s) const {
    assert(s.size() == bonds());
    std::vector<double> y(dof(), 0.0);
    for (std::size_t b = 0; b < s.size(); ++b) {
      y[b] -= dist_scale[b] * s[b];
      y[b + 1] += dist_scale[b] * s[b];
    }
    return y;
  }

  /// D^T E D + K, pentadiagonal.
  BandedSpdMatrix hessian() const {
    const std::size_t n = dof();
    const std::size_t nb = bonds();
    BandedSpdMatrix h(n, 2);
    auto dcoef = [&](std::size_t b, std::size_t i) { return i == b ? -dist_scale[b] : dist_scale[b]; };
    for (std::size_t b = 0; b < nb; ++b) {
      for (std::size_t c = (b > 0 ? b - 1 : 0); c <= std::min(nb - 1, b + 1); ++c) {
        const double e = E(b, c);
        if (e == 0.0) continue;
        for (std::size_t i = b; i <= b + 1; ++i)
          for (std::size_t j = c; j <= c + 1; ++j)
            if (i >= j) h.add(i, j, dcoef(b, i) * e * dcoef(c, j));
      }
    }
    for (int k = 0; k <= Kmis.bandwidth(); ++k) {
      auto band = Kmis.band(k);
      for (std::size_t j = 0; j < band.size(); ++j) h.add(j + k, j, band[j]);
    }
    return h;
  }
};

namespace detail {

/// Bond stiffness of the atomistic chain: k1 + 2 k2 inside, k1 + k2 on the
/// two end bonds, k2 between neighbouring bonds.
inline BandedSpdMatrix atomistic_stiffness(const ChainParams& p) {
  const std::size_t nb = static_cast<std::size_t>(p.bond_count());
  BandedSpdMatrix e(nb, 1);
  for (std::size_t b = 0; b < nb; ++b) {
    const bool end = b == 0 || b + 1 == nb;
    e.set(b, b, p.k1 + (end ? 1.0 : 2.0) * p.k2);
    if (b + 1 < nb) e.set(b + 1, b, p.k2);
  }
  return e;
}

/// Stiffness of a chain whose bonds are shared between atomistic and
/// continuum atoms. `atomistic` flags each degree of freedom, `continuum_weight`
/// scales k12 on each bond. The NNN spring spanning bonds b-1 and b does not
/// exist for the first bond, nor the one spanning b and b+1 for the last, so
/// the corresponding pair of flags is dropped there.
inline BandedSpdMatrix coupled_stiffness(const ChainParams& p, std::span<const char> atomistic,
                                         std::span<const double> continuum_weight) {
  const std::size_t nb = continuum_weight.size();
  assert(atomistic.size() == nb + 1);
  auto d = [&](std::size_t j) { return atomistic[j] ? 1.0 : 0.0; };
  BandedSpdMatrix e(nb, 1);
  for (std::size_t b = 0; b < nb; ++b) {
    double nnn = 0.0;
    if (b > 0) nnn += d(b - 1) + d(b + 1);
    if (b + 1 < nb) nnn += d(b) + d(b + 2);
    e.set(b, b, continuum_weight[b] * p.k12() + 0.5 * p.k1 * (d(b) + d(b + 1)) + 0.5 * p.k2 * nnn);
    if (b + 1 < nb) e.set(b + 1, b, 0.5 * p.k2 * (d(b) + d(b + 2)));
  }
  return e;
}

}  // namespace detail

/**
 * Builds the matrix form of one of the three energies. `atomistic` and `ac`
 * live on all 2M atoms; `qc` lives on the repatoms of `partition`.
 */
inline QuadraticModel assemble(const ChainParams& params, const Partition& partition, Flavor flavor) {
  params.validate();
  if (partition.M != params.M) throw invalid_input("partition built for a different chain length");
  QuadraticModel m;
  m.flavor = flavor;
  if (flavor == Flavor::qc) {
    m.sites = partition.rep;
  } else {
    m.sites.resize(static_cast<std::size_t>(params.atom_count()));
    for (int i = params.first_atom(); i <= params.last_atom(); ++i) m.sites[params.offset(i)] = i;
  }
  const std::size_t n = m.sites.size();
  const std::size_t nb = n - 1;
  m.a_eq.resize(n);
  m.b_eq.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    m.a_eq[j] = lattice_site(m.sites[j], params.a0);
    m.b_eq[j] = misfit_well(m.sites[j], params.a0);
  }

  std::vector<char> atomistic(n);
  for (std::size_t j = 0; j < n; ++j) atomistic[j] = partition.is_atomistic(m.sites[j]) ? 1 : 0;

  switch (flavor) {
    case Flavor::atomistic:
    case Flavor::ac: {
      m.dist_scale.assign(nb, 1.0);
      if (flavor == Flavor::atomistic) {
        m.E = detail::atomistic_stiffness(params);
      } else {
        std::vector<double> w(nb);
        for (std::size_t b = 0; b < nb; ++b) w[b] = 0.5 * ((atomistic[b] ? 0 : 1) + (atomistic[b + 1] ? 0 : 1));
        m.E = detail::coupled_stiffness(params, atomistic, w);
      }
      m.Kmis = BandedSpdMatrix(n, 0);
      for (std::size_t j = 0; j < n; ++j) m.Kmis.set(j, j, params.k0);
      break;
    }
    case Flavor::qc: {
      const auto& nu = partition.nu;
      m.dist_scale.resize(nb);
      for (std::size_t b = 0; b < nb; ++b) m.dist_scale[b] = 1.0 / nu[b];
      m.E = detail::coupled_stiffness(params, atomistic, partition.omega);
      // Misfit of each segment integrated exactly over the interpolated atoms,
      // end atoms counted half; the two chain ends get their missing half back
      // so that every atom carries its full misfit energy.
      m.Kmis = BandedSpdMatrix(n, 1);
      for (std::size_t b = 0; b < nb; ++b) {
        const double v = nu[b];
        const double diag = params.k0 * (2.0 * v + 1.0 / v) / 6.0;
        m.Kmis.add(b, b, diag);
        m.Kmis.add(b + 1, b + 1, diag);
        m.Kmis.add(b + 1, b, params.k0 * (v - 1.0 / v) / 6.0);
      }
      m.Kmis.add(0, 0, 0.5 * params.k0);
      m.Kmis.add(n - 1, n - 1, 0.5 * params.k0);
      break;
    }
  }
  return m;
}

/// Energy evaluated from the matrix form.
inline double energy_matrix(const QuadraticModel& m, std::span<const double> y) {
  assert(y.size() == m.dof());
  std::vector<double> ya(y.size()), yb(y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    ya[j] = y[j] - m.a_eq[j];
    yb[j] = y[j] - m.b_eq[j];
  }
  const auto s = m.distances(ya);
  return 0.5 * dot(s, m.E.multiply(s)) + 0.5 * dot(yb, m.Kmis.multiply(yb));
}

/**
 * Minimisation problem in displacements from a reference configuration:
 * mat * w = rhs, full = reference + J w. The reference holds the clamped
 * values at the two dofs of each end and the misfit wells elsewhere, so far
 * from the defect the unknowns are small and keep their relative precision.
 */
struct LinearSystem {
  BandedSpdMatrix mat;
  std::vector<double> rhs;
  std::vector<double> reference;

  std::size_t free_size() const noexcept { return rhs.size(); }
  /// Dof offsets [2, n-3] of the free unknowns in the full vector.
  std::size_t free_first() const noexcept { return 2; }
  std::size_t free_last() const noexcept { return reference.size() - 3; }

  /// reference + J w.
  std::vector<double> full(std::span<const double> w) const {
    assert(w.size() == free_size());
    std::vector<double> f = reference;
    for (std::size_t i = 0; i < w.size(); ++i) f[i + 2] += w[i];
    return f;
  }
  /// J^T (y_full - reference).
  std::vector<double> deviation(std::span<const double> y_full) const {
    assert(y_full.size() == reference.size());
    std::vector<double> w(free_size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = y_full[i + 2] - reference[i + 2];
    return w;
  }
  /// Free positions J^T reference + w.
  std::vector<double> positions(std::span<const double> w) const {
    assert(w.size() == free_size());
    std::vector<double> y(w.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = reference[i + 2] + w[i];
    return y;
  }
  /// J^T v.
  std::vector<double> restrict(std::span<const double> v_full) const {
    assert(v_full.size() == reference.size());
    return {v_full.begin() + 2, v_full.end() - 2};
  }
  /// J v (extension by zero).
  std::vector<double> extend(std::span<const double> v) const {
    std::vector<double> f(reference.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) f[i + 2] = v[i];
    return f;
  }
};

inline LinearSystem reduce_system(const QuadraticModel& model, const ChainParams& params) {
  const std::size_t n = model.dof();
  if (n < 5) throw invalid_input("a reduced system needs at least one free degree of freedom");
  LinearSystem sys;
  sys.reference = model.b_eq;
  sys.reference[0] = params.bc[0];
  sys.reference[1] = params.bc[1];
  sys.reference[n - 2] = params.bc[2];
  sys.reference[n - 1] = params.bc[3];

  const auto h = model.hessian();
  const std::size_t nf = n - 4;
  sys.mat = BandedSpdMatrix(nf, 2);
  for (int k = 0; k <= 2; ++k)
    for (std::size_t j = 0; j + k < nf; ++j) sys.mat.set(j + k, j, h(j + 2 + k, j + 2));

  std::vector<double> ra(n), rb(n);
  for (std::size_t j = 0; j < n; ++j) {
    ra[j] = sys.reference[j] - model.a_eq[j];
    rb[j] = sys.reference[j] - model.b_eq[j];
  }
  const auto el = model.distances_transpose(model.E.multiply(model.distances(ra)));
  const auto mis = model.Kmis.multiply(rb);
  sys.rhs.resize(nf);
  for (std::size_t i = 0; i < nf; ++i) sys.rhs[i] = -el[i + 2] - mis[i + 2];
  return sys;
}

/// Factorises the reduced matrix; failure means the assembly is broken.
inline BandedFactor factor_system(const LinearSystem& sys) {
  try {
    return factor(sys.mat);
  } catch (const not_positive_definite& e) {
    throw internal_consistency_error(std::string("reduced system: ") + e.what());
  }
}

/// Coefficients of the dislocation width y_1 - y_0 on the free atoms.
inline std::vector<double> goal_vector(const ChainParams& params) {
  std::vector<double> q(static_cast<std::size_t>(params.atom_count() - 4), 0.0);
  // free atom i sits at i + M - 3
  q[static_cast<std::size_t>(params.M - 3)] = -1.0;
  q[static_cast<std::size_t>(params.M - 2)] = 1.0;
  return q;
}

}  // namespace qcfk
