#pragma once

#include <span>
#include <string>
#include <vector>

#include "qsync/types.hpp"

namespace qsync {

/// One row of the reference table: a Laplacian eigenvalue with its φ and
/// arccot(φ) rounded to four decimals.
struct ReferenceMode {
  int index;  // eigenvalue index, 2..10
  Complex lambda;
  double phi;
  double arccot_phi;
};

/// The nine reference eigenvalues at ω = sqrt(π/2).
std::span<const ReferenceMode> reference_modes() noexcept;

double reference_omega() noexcept;
constexpr double kReferenceTau = 0.1;
constexpr double kReferenceRho = 0.9747;
constexpr double kTableTolerance = 1e-3;
constexpr double kRhoTolerance = 5e-4;
constexpr double kDenseTolerance = 1e-8;

struct VerifyCheck {
  std::string name;
  double expected;
  double computed;
  double tolerance;
  bool pass;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool passed() const noexcept;
};

/// Recomputes φ, arccot(φ) and ρ(Ê) for the reference modes and compares
/// them with the rounded reference values. Needs no input files.
VerifyReport verify_reference_values();

/// blockdiag of the per-mode transition blocks, i.e. Ê in mode coordinates.
CMat mode_block_matrix(std::span<const Complex> lambdas, double omega, double tau);

}  // namespace qsync
