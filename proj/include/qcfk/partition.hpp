#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcfk/chain_params.hpp"

namespace qcfk {

/**
 * Split of the chain into atomistic and continuum atoms, together with the
 * repatoms retained as degrees of freedom.
 *
 * Repatom j (0-based) sits at atom rep[j]; segment j joins repatoms j and
 * j+1 and spans nu[j] bonds with continuum weight omega[j].
 */
struct Partition {
  int M = 0;
  std::vector<char> atomistic;  // per atom, indexed by atom + M - 1
  std::vector<int> rep;
  std::vector<int> nu;
  std::vector<double> omega;

  bool is_atomistic(int atom) const {
    return atom >= -M + 1 && atom <= M && atomistic[static_cast<std::size_t>(atom + M - 1)] != 0;
  }
  int repatom_count() const { return static_cast<int>(rep.size()); }
  bool coarsened() const {
    return std::any_of(nu.begin(), nu.end(), [](int v) { return v > 1; });
  }
  std::vector<int> atomistic_atoms() const {
    std::vector<int> out;
    for (int i = -M + 1; i <= M; ++i)
      if (is_atomistic(i)) out.push_back(i);
    return out;
  }
  int atomistic_count() const {
    return static_cast<int>(std::count(atomistic.begin(), atomistic.end(), char{1}));
  }
};

/**
 * Builds and validates a partition. Without a repatom list every atom is a
 * repatom. With one, the list must contain the four clamped atoms and every
 * atomistic atom together with its two neighbours on each side, and no
 * coarsened segment may span the defect between atoms 0 and 1.
 */
inline Partition make_partition(const ChainParams& params, std::span<const int> atomistic_atoms,
                                std::optional<std::vector<int>> repatoms = std::nullopt) {
  params.validate();
  const int M = params.M;
  Partition p;
  p.M = M;
  p.atomistic.assign(static_cast<std::size_t>(2 * M), 0);
  for (int a : atomistic_atoms) {
    if (a < -M + 1 || a > M)
      throw invalid_input("atomistic atom " + std::to_string(a) + " outside chain -M+1..M");
    p.atomistic[static_cast<std::size_t>(a + M - 1)] = 1;
  }

  if (repatoms) {
    p.rep = std::move(*repatoms);
  } else {
    p.rep.resize(static_cast<std::size_t>(2 * M));
    std::iota(p.rep.begin(), p.rep.end(), -M + 1);
  }
  const auto& rep = p.rep;
  if (rep.size() < 4) throw invalid_input("at least four repatoms are required");
  for (std::size_t j = 0; j < rep.size(); ++j) {
    if (rep[j] < -M + 1 || rep[j] > M)
      throw invalid_input("repatom " + std::to_string(rep[j]) + " outside chain");
    if (j > 0 && rep[j] <= rep[j - 1])
      throw invalid_input("repatoms not strictly increasing at " + std::to_string(rep[j]));
  }
  const int required[4] = {-M + 1, -M + 2, M - 1, M};
  const int found[4] = {rep[0], rep[1], rep[rep.size() - 2], rep.back()};
  for (int k = 0; k < 4; ++k)
    if (found[k] != required[k])
      throw invalid_input("boundary atom " + std::to_string(required[k]) + " must be a repatom");

  p.nu.resize(rep.size() - 1);
  for (std::size_t j = 0; j + 1 < rep.size(); ++j) p.nu[j] = rep[j + 1] - rep[j];

  auto is_rep = [&](int atom) { return std::binary_search(rep.begin(), rep.end(), atom); };
  for (int a = -M + 1; a <= M; ++a) {
    if (!p.is_atomistic(a)) continue;
    for (int d = -2; d <= 2; ++d) {
      const int b = a + d;
      if (b < -M + 1 || b > M) continue;
      if (!is_rep(b))
        throw invalid_input("atom " + std::to_string(b) + " must be a repatom: it lies within two atoms of atomistic atom " +
                            std::to_string(a));
    }
  }
  for (std::size_t j = 0; j < p.nu.size(); ++j)
    if (p.nu[j] > 1 && rep[j] <= 0 && rep[j + 1] >= 1)
      throw invalid_input("coarsened segment " + std::to_string(rep[j]) + ".." + std::to_string(rep[j + 1]) +
                          " spans the defect");

  p.omega.resize(p.nu.size());
  for (std::size_t j = 0; j < p.nu.size(); ++j) {
    const int cont = (p.is_atomistic(rep[j]) ? 0 : 1) + (p.is_atomistic(rep[j + 1]) ? 0 : 1);
    p.omega[j] = 0.5 * p.nu[j] * cont;
  }
  return p;
}

/// Uncoarsened partition whose atomistic region is the interval -K+1..K.
inline Partition interval_partition(const ChainParams& params, int K) {
  if (K < 0 || K > params.M) throw invalid_input("K must lie in 0..M, got " + std::to_string(K));
  std::vector<int> atoms;
  for (int i = -K + 1; i <= K; ++i) atoms.push_back(i);
  return make_partition(params, atoms);
}

}  // namespace qcfk
