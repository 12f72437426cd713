#pragma once

// Energies by direct summation over atoms, bonds and repatom segments, plus
// the interpolation between repatom and full-chain vectors.

#include <cassert>
#include <span>
#include <vector>

#include "qcfk/chain_params.hpp"
#include "qcfk/model.hpp"
#include "qcfk/partition.hpp"

namespace qcfk {

enum class WellSide { left, right };

struct EnergyEvaluation {
  double value = 0.0;
  /// Atoms (or repatom sites) outside their assigned misfit well. The
  /// quadratic energy is still evaluated for them.
  std::vector<int> well_violations;
};

/// Closed-form sums with half-weighted end terms over i = 0..m.
inline double prime_sum_squares(int m) { return (2.0 * m * m * m + m) / 6.0; }
inline double prime_sum_products(int m) { return (static_cast<double>(m) * m * m - m) / 6.0; }

/**
 * Misfit energy of the atoms interpolated between repatoms at atoms `ell_j`
 * and `ell_j1`, end atoms counted half. All atoms of the segment must share
 * the well offset given by `side`.
 */
inline double misfit_segment_energy(const ChainParams& p, int ell_j, int ell_j1, double y_j, double y_j1,
                                    WellSide side) {
  assert(ell_j1 > ell_j);
  const double shift = side == WellSide::left ? 1.0 : 0.0;
  const double u0 = y_j - (ell_j - shift) * p.a0;
  const double u1 = y_j1 - (ell_j1 - shift) * p.a0;
  const int nu = ell_j1 - ell_j;
  const double inv2 = 1.0 / (static_cast<double>(nu) * nu);
  return 0.5 * p.k0 * inv2 * prime_sum_squares(nu) * (u0 * u0 + u1 * u1) +
         p.k0 * inv2 * prime_sum_products(nu) * u0 * u1;
}

/// Full-chain positions from repatom positions by piecewise-linear interpolation.
inline std::vector<double> interpolate(const Partition& part, std::span<const double> y_rep) {
  assert(y_rep.size() == part.rep.size());
  std::vector<double> full(static_cast<std::size_t>(2 * part.M));
  const int off = part.M - 1;
  for (std::size_t j = 0; j + 1 < part.rep.size(); ++j) {
    const int nu = part.nu[j];
    full[static_cast<std::size_t>(part.rep[j] + off)] = y_rep[j];
    for (int m = 1; m < nu; ++m)
      full[static_cast<std::size_t>(part.rep[j] + m + off)] =
          (static_cast<double>(nu - m) * y_rep[j] + static_cast<double>(m) * y_rep[j + 1]) / nu;
  }
  full.back() = y_rep.back();
  return full;
}

/// Repatom values read off a full-chain vector.
inline std::vector<double> restrict_to_repatoms(const Partition& part, std::span<const double> y_full) {
  assert(y_full.size() == static_cast<std::size_t>(2 * part.M));
  std::vector<double> r(part.rep.size());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] = y_full[static_cast<std::size_t>(part.rep[j] + part.M - 1)];
  return r;
}

namespace detail {

/// Elastic energy owned by atom i of a full chain: half of each NN and NNN
/// spring it belongs to. Springs reaching past the chain ends are absent.
inline double atom_elastic_energy(const ChainParams& p, std::span<const double> y, int i) {
  const int first = p.first_atom();
  const int last = p.last_atom();
  auto at = [&](int k) { return y[static_cast<std::size_t>(p.offset(k))]; };
  double e = 0.0;
  auto nn = [&](int l) {  // spring l, l+1
    const double d = at(l + 1) - at(l) - p.a0;
    return 0.25 * p.k1 * d * d;
  };
  auto nnn = [&](int l) {  // spring l, l+2
    const double d = at(l + 2) - at(l) - 2.0 * p.a0;
    return 0.25 * p.k2 * d * d;
  };
  if (i - 1 >= first) e += nn(i - 1);
  if (i + 1 <= last) e += nn(i);
  if (i - 2 >= first) e += nnn(i - 2);
  if (i + 2 <= last) e += nnn(i);
  return e;
}

/// Continuum elastic energy of atom i: half of the continuum density on each
/// adjacent bond.
inline double atom_continuum_energy(const ChainParams& p, std::span<const double> y, int i) {
  auto at = [&](int k) { return y[static_cast<std::size_t>(p.offset(k))]; };
  double e = 0.0;
  if (i - 1 >= p.first_atom()) {
    const double d = at(i) - at(i - 1) - p.a0;
    e += 0.25 * p.k12() * d * d;
  }
  if (i + 1 <= p.last_atom()) {
    const double d = at(i + 1) - at(i) - p.a0;
    e += 0.25 * p.k12() * d * d;
  }
  return e;
}

inline double atom_misfit_energy(const ChainParams& p, double y, int i) {
  const double u = y - misfit_well(i, p.a0);
  return 0.5 * p.k0 * u * u;
}

}  // namespace detail

/**
 * Total energy by direct summation. For `atomistic` and `ac` the vector holds
 * all 2M atoms; for `qc` it holds the repatoms of `part`.
 */
inline EnergyEvaluation energy_direct(const ChainParams& p, const Partition& part, Flavor flavor,
                                      std::span<const double> y) {
  EnergyEvaluation out;
  const int first = p.first_atom();
  const int last = p.last_atom();

  if (flavor != Flavor::qc) {
    if (y.size() != static_cast<std::size_t>(p.atom_count()))
      throw invalid_input("deformation must have 2M entries");
    auto at = [&](int k) { return y[static_cast<std::size_t>(p.offset(k))]; };
    for (int i = first; i <= last; ++i)
      if (!in_assigned_well(i, at(i), p.a0)) out.well_violations.push_back(i);

    double e = 0.0;
    if (flavor == Flavor::atomistic) {
      for (int i = first; i < last; ++i) {
        const double d = at(i + 1) - at(i) - p.a0;
        e += 0.5 * p.k1 * d * d;
      }
      for (int i = first + 1; i < last; ++i) {
        const double d = at(i + 1) - at(i - 1) - 2.0 * p.a0;
        e += 0.5 * p.k2 * d * d;
      }
      for (int i = first; i <= last; ++i) e += detail::atom_misfit_energy(p, at(i), i);
    } else {
      for (int i = first; i <= last; ++i) {
        e += part.is_atomistic(i) ? detail::atom_elastic_energy(p, y, i) : detail::atom_continuum_energy(p, y, i);
        e += detail::atom_misfit_energy(p, at(i), i);
      }
    }
    out.value = e;
    return out;
  }

  if (y.size() != part.rep.size()) throw invalid_input("repatom deformation has wrong length");
  for (std::size_t j = 0; j < y.size(); ++j)
    if (!in_assigned_well(part.rep[j], y[j], p.a0)) out.well_violations.push_back(part.rep[j]);

  double e = 0.0;
  // Atomistic atoms and their two-atom neighbourhoods are uncoarsened, so the
  // interpolated chain is only needed there.
  if (part.atomistic_count() > 0) {
    const auto full = interpolate(part, y);
    for (int i = first; i <= last; ++i)
      if (part.is_atomistic(i)) e += detail::atom_elastic_energy(p, full, i);
  }
  for (std::size_t j = 0; j + 1 < y.size(); ++j) {
    const int l0 = part.rep[j];
    const int l1 = part.rep[j + 1];
    const double nu = part.nu[j];
    const double r = (y[j + 1] - y[j]) / nu - p.a0;
    e += part.omega[j] * 0.5 * p.k12() * r * r;
    if (l1 <= 0) {
      e += misfit_segment_energy(p, l0, l1, y[j], y[j + 1], WellSide::left);
    } else if (l0 >= 1) {
      e += misfit_segment_energy(p, l0, l1, y[j], y[j + 1], WellSide::right);
    } else {
      // unit segment across the defect: each end in its own well, no cross term
      e += 0.5 * detail::atom_misfit_energy(p, y[j], l0) + 0.5 * detail::atom_misfit_energy(p, y[j + 1], l1);
    }
  }
  e += 0.5 * detail::atom_misfit_energy(p, y.front(), part.rep.front());
  e += 0.5 * detail::atom_misfit_energy(p, y.back(), part.rep.back());
  out.value = e;
  return out;
}

}  // namespace qcfk
