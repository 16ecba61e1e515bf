#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qsync/graph.hpp"
#include "qsync/types.hpp"

namespace qsync {

/// Sampling-period bound for one nonzero Laplacian eigenvalue.
struct ModeBound {
  Complex lambda;
  double phi;
  double arccot_phi;  // in (0, pi)
};

struct Interval {
  double lo;
  double hi;

  /// Open-interval membership; the endpoints themselves are infeasible.
  bool contains(double x) const noexcept { return x > lo && x < hi; }
};

/// Result of the sampling-period feasibility analysis.
///
/// `tau0` is min_i arccot(φ_i). The windows are the exact solution set of
/// cot(ωτ/2) > max_i φ_i, i.e. (2kπ/ω, 2kπ/ω + 2·tau0/ω) for k = 0..k_max.
struct FeasibilityReport {
  double omega;
  double tau0;
  std::vector<Interval> windows;
  std::vector<ModeBound> per_mode;

  bool is_feasible(double tau) const;
};

/// g(s) = s² + (a + b i) s + (c + d i)
struct ComplexQuadratic {
  double a;
  double b;
  double c;
  double d;
};

/// φ for one mode. Throws Error(NonPositiveRealPart) if Re λ <= 0 and
/// Error(InvalidArgument) if ω <= 0.
ModeBound phi_bound(Complex lambda, double omega);

/// Principal-branch arccot onto (0, π).
double arccot(double x) noexcept;

FeasibilityReport feasible_windows(const std::vector<Complex>& lambdas, double omega,
                                   int k_max = 3);
FeasibilityReport feasible_windows(const LaplacianSpectrum& spectrum, double omega,
                                   int k_max = 3);

/// True when sin(ωτ) is within 1e-12 of zero, i.e. τ = kπ/ω.
bool is_degenerate_sampling(double omega, double tau) noexcept;

/// Roots of x² + (sin(ωτ)λ/ω − 2cos(ωτ))x + (1 − sin(ωτ)λ/ω). Throws
/// Error(DegenerateSampling) when τ = kπ/ω.
std::pair<Complex, Complex> mode_quadratic_roots(Complex lambda, double omega, double tau);

/// Roots of x² + p x + q computed without cancellation.
std::pair<Complex, Complex> solve_monic_quadratic(Complex p, Complex q) noexcept;

/// One-period transition block of a single Laplacian mode acting on
/// (position, velocity) coordinates.
Eigen::Matrix2cd mode_block(Complex lambda, double omega, double dt);

/// max_i max(|x1|, |x2|) over all mode quadratics.
double spectral_radius_reduced(const std::vector<Complex>& lambdas, double omega, double tau);
double spectral_radius_reduced(const LaplacianSpectrum& spectrum, double omega, double tau);

bool complex_quadratic_is_hurwitz(const ComplexQuadratic& q) noexcept;

/// Mode quadratic mapped through x = (s + 1)/(s − 1).
ComplexQuadratic bilinear_transform(Complex lambda, double omega, double tau);

/// Hurwitz verdict of the bilinear image; equivalent to both mode roots lying
/// strictly inside the unit disk.
bool bilinear_stability_check(Complex lambda, double omega, double tau);

}  // namespace qsync
