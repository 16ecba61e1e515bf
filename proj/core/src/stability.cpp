#include "qsync/stability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsync {

double arccot(double x) noexcept {
  if (x == 0.0) return std::numbers::pi / 2.0;
  const double r = std::atan(1.0 / x);
  return x > 0.0 ? r : r + std::numbers::pi;
}

ModeBound phi_bound(Complex lambda, double omega) {
  if (!(omega > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega must be positive");
  const double re = lambda.real();
  const double im = lambda.imag();
  if (!(re > 0.0)) {
    throw Error(ErrorCode::NonPositiveRealPart, "phi requires Re(lambda) > 0");
  }
  double phi = 0.0;
  if (im == 0.0) {
    phi = re / omega;
  } else {
    const double lin = re * im * im + re * re * re;
    const double root = std::sqrt(lin * lin + 4.0 * omega * omega * re * re * im * im);
    phi = (lin + root) / (2.0 * omega * re * re);
  }
  return {lambda, phi, arccot(phi)};
}

bool FeasibilityReport::is_feasible(double tau) const {
  return std::any_of(windows.begin(), windows.end(),
                     [tau](const Interval& w) { return w.contains(tau); });
}

FeasibilityReport feasible_windows(const std::vector<Complex>& lambdas, double omega,
                                   int k_max) {
  if (lambdas.empty()) throw Error(ErrorCode::InvalidArgument, "empty spectrum");
  if (k_max < 0) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 0");
  FeasibilityReport report;
  report.omega = omega;
  report.tau0 = std::numbers::pi;
  for (const auto& lambda : lambdas) {
    report.per_mode.push_back(phi_bound(lambda, omega));
    report.tau0 = std::min(report.tau0, report.per_mode.back().arccot_phi);
  }
  // cot(ωτ/2) > φ  <=>  ωτ/2 ∈ (kπ, kπ + arccot φ).
  const double period = 2.0 * std::numbers::pi / omega;
  const double width = 2.0 * report.tau0 / omega;
  for (int k = 0; k <= k_max; ++k) {
    report.windows.push_back({k * period, k * period + width});
  }
  return report;
}

FeasibilityReport feasible_windows(const LaplacianSpectrum& spectrum, double omega, int k_max) {
  return feasible_windows(spectrum.lambdas, omega, k_max);
}

bool is_degenerate_sampling(double omega, double tau) noexcept {
  return std::abs(std::sin(omega * tau)) < 1e-12;
}

std::pair<Complex, Complex> solve_monic_quadratic(Complex p, Complex q) noexcept {
  Complex disc = std::sqrt(p * p - 4.0 * q);
  if ((std::conj(p) * disc).real() < 0.0) disc = -disc;
  const Complex big = -0.5 * (p + disc);
  if (big == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
  return {big, q / big};
}

std::pair<Complex, Complex> mode_quadratic_roots(Complex lambda, double omega, double tau) {
  if (!(omega > 0.0) || !(tau > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "omega and tau must be positive");
  }
  if (is_degenerate_sampling(omega, tau)) {
    throw Error(ErrorCode::DegenerateSampling, "sin(omega*tau) = 0: roots lie on the unit circle");
  }
  const double s = std::sin(omega * tau);
  const double c = std::cos(omega * tau);
  const Complex gain = s * lambda / omega;
  return solve_monic_quadratic(gain - 2.0 * c, 1.0 - gain);
}

Eigen::Matrix2cd mode_block(Complex lambda, double omega, double dt) {
  const double s = std::sin(omega * dt);
  const double c = std::cos(omega * dt);
  Eigen::Matrix2cd G;
  G(0, 0) = c;
  G(0, 1) = s / omega + lambda / (omega * omega) * (c - 1.0);
  G(1, 0) = -omega * s;
  G(1, 1) = c - lambda / omega * s;
  return G;
}

double spectral_radius_reduced(const std::vector<Complex>& lambdas, double omega, double tau) {
  double rho = 0.0;
  for (const auto& lambda : lambdas) {
    const auto [x1, x2] = mode_quadratic_roots(lambda, omega, tau);
    rho = std::max({rho, std::abs(x1), std::abs(x2)});
  }
  return rho;
}

double spectral_radius_reduced(const LaplacianSpectrum& spectrum, double omega, double tau) {
  return spectral_radius_reduced(spectrum.lambdas, omega, tau);
}

bool complex_quadratic_is_hurwitz(const ComplexQuadratic& q) noexcept {
  return q.a > 0.0 && q.a * q.b * q.d + q.a * q.a * q.c - q.d * q.d > 0.0;
}

ComplexQuadratic bilinear_transform(Complex lambda, double omega, double tau) {
  if (is_degenerate_sampling(omega, tau)) {
    throw Error(ErrorCode::DegenerateSampling, "sin(omega*tau) = 0");
  }
  const double kappa = 1.0 / std::tan(omega * tau / 2.0);
  const Complex linear = lambda / omega * kappa;
  const Complex constant = kappa * kappa - linear;
  return {linear.real(), linear.imag(), constant.real(), constant.imag()};
}

bool bilinear_stability_check(Complex lambda, double omega, double tau) {
  return complex_quadratic_is_hurwitz(bilinear_transform(lambda, omega, tau));
}

}  // namespace qsync
