#include "qsync/verify.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "qsync/propagation.hpp"
#include "qsync/stability.hpp"

namespace qsync {

namespace {

const std::array<ReferenceMode, 9> kModes{{
    {2, {1.5594, 0.0}, 1.2442, 0.6770},
    {3, {6.3182, 0.0706}, 5.0419, 0.1958},
    {4, {6.3182, -0.0706}, 5.0419, 0.1958},
    {5, {2.9473, 0.0}, 2.3516, 0.4021},
    {6, {3.4893, 0.2867}, 2.8052, 0.3424},
    {7, {3.4893, -0.2867}, 2.8052, 0.3424},
    {8, {5.1342, 0.0}, 4.0965, 0.2394},
    {9, {4.7440, 0.0}, 3.7852, 0.2583},
    {10, {3.0000, 0.0}, 2.3937, 0.3957},
}};

VerifyCheck make_check(std::string name, double expected, double computed, double tolerance) {
  const bool pass = std::isfinite(computed) && std::abs(computed - expected) <= tolerance;
  return {std::move(name), expected, computed, tolerance, pass};
}

}  // namespace

std::span<const ReferenceMode> reference_modes() noexcept { return kModes; }

double reference_omega() noexcept { return std::sqrt(std::numbers::pi / 2.0); }

bool VerifyReport::passed() const noexcept {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

CMat mode_block_matrix(std::span<const Complex> lambdas, double omega, double tau) {
  const auto m = static_cast<Eigen::Index>(lambdas.size());
  CMat out = CMat::Zero(2 * m, 2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    out.block<2, 2>(2 * i, 2 * i) = mode_block(lambdas[static_cast<std::size_t>(i)], omega, tau);
  }
  return out;
}

VerifyReport verify_reference_values() {
  VerifyReport report;
  const double omega = reference_omega();
  std::vector<Complex> lambdas;
  for (const auto& row : kModes) {
    lambdas.push_back(row.lambda);
    const ModeBound b = phi_bound(row.lambda, omega);
    const std::string tag = "lambda_" + std::to_string(row.index);
    report.checks.push_back(make_check("phi " + tag, row.phi, b.phi, kTableTolerance));
    report.checks.push_back(
        make_check("arccot(phi) " + tag, row.arccot_phi, b.arccot_phi, kTableTolerance));
  }

  const FeasibilityReport feas = feasible_windows(lambdas, omega);
  report.checks.push_back(make_check("tau0 = min arccot(phi)", 0.1958, feas.tau0, kTableTolerance));

  const double rho = spectral_radius_reduced(lambdas, omega, kReferenceTau);
  report.checks.push_back(make_check("rho(E_hat) from mode quadratics", kReferenceRho, rho,
                                     kRhoTolerance));
  const double dense = dense_spectral_radius(mode_block_matrix(lambdas, omega, kReferenceTau));
  report.checks.push_back(
      make_check("rho(E_hat) dense eigensolve vs quadratics", rho, dense, kDenseTolerance));
  return report;
}

}  // namespace qsync
