#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qcfk {

/// Raised when caller-supplied problem data violates a model invariant.
class invalid_input : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation that cannot fail for valid inputs does.
class internal_consistency_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * Physical constants of a Frenkel-Kontorova chain with NN/NNN harmonic
 * springs and a single dislocation between atoms 0 and 1.
 *
 * Atoms are numbered -M+1..M. Bond i joins atoms i and i+1.
 */
struct ChainParams {
  int M = 1000;
  double k0 = 1.0;  // misfit stiffness
  double k1 = 2.0;  // nearest-neighbour stiffness
  double k2 = 2.0;  // next-nearest-neighbour stiffness
  double a0 = 1.0;  // lattice spacing
  /// Clamped positions of atoms -M+1, -M+2, M-1, M.
  std::array<double, 4> bc{-1000.0, -999.0, 999.0, 1000.0};

  /// Stiffness of a uniformly strained bond in the continuum limit.
  double k12() const noexcept { return k1 + 4.0 * k2; }

  int first_atom() const noexcept { return -M + 1; }
  int last_atom() const noexcept { return M; }
  int atom_count() const noexcept { return 2 * M; }
  int bond_count() const noexcept { return 2 * M - 1; }
  /// Offset of atom i in a full-chain vector.
  int offset(int atom) const noexcept { return atom + M - 1; }

  void validate() const {
    if (M < 3) throw invalid_input("M must be at least 3, got " + std::to_string(M));
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw invalid_input(std::string(name) + " must be positive and finite");
    };
    positive(k0, "k0");
    positive(k1, "k1");
    positive(k2, "k2");
    positive(a0, "a0");
    for (double v : bc)
      if (!std::isfinite(v)) throw invalid_input("boundary values must be finite");
  }

  /// Boundary values that place the four clamped atoms in their misfit wells.
  static std::array<double, 4> well_boundary(int M, double a0) {
    return {-M * a0, (-M + 1) * a0, (M - 1) * a0, M * a0};
  }

  /// k0 = 1, k1 = k2 = 2, a0 = 1, boundary atoms at their wells.
  static ChainParams standard(int M) {
    ChainParams p;
    p.M = M;
    p.bc = well_boundary(M, p.a0);
    return p;
  }
};

/// Uniform lattice site of atom i (elastic equilibrium).
inline double lattice_site(int atom, double a0) { return atom * a0; }

/// Centre of the misfit well occupied by atom i; atoms left of the defect
/// sit one well to the left of their lattice site.
inline double misfit_well(int atom, double a0) { return (atom <= 0 ? atom - 1 : atom) * a0; }

/// True if y lies strictly inside the well assigned to the atom.
inline bool in_assigned_well(int atom, double y, double a0) {
  const double centre = misfit_well(atom, a0);
  return y > centre - 0.5 * a0 && y < centre + 0.5 * a0;
}

}  // namespace qcfk
