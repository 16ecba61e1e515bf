#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>

#include "qsync/graph.hpp"
#include "qsync/types.hpp"

namespace qsync {

// State ordering throughout: X = [r_1..r_n, v_1..v_n].

/// exp(A dt) for A = [[0, I], [-ω² I, 0]].
Mat harmonic_flow(double omega, double dt, std::size_t n);

/// F(dt) = ∫_0^dt exp(A s) ds.
Mat forcing_integral(double omega, double dt, std::size_t n);

/// B = blockdiag(0, -L).
Mat coupling_block(const Mat& L);

/// One-interval affine flow with inputs held at their sampled values:
/// X(t_k + dt) = E(dt) X(t_k) + F(dt) C(t_k).
struct Flow {
  Mat E;
  Mat F;
};

/// E(dt) = exp(A dt) + F(dt) B. Throws Error(InvalidArgument) for dt <= 0.
Flow assemble_flow(double omega, double dt, const Mat& L);

/// blockdiag(P, P) for the doubled (position, velocity) coordinates.
CMat double_basis(const CMat& P);

/// P̂‡ E P̂ with the doubled reduced basis of `spectrum`.
CMat reduced_map(const Mat& E, const LaplacianSpectrum& spectrum);

/// Everything about one (ω, τ, L) triple that stays fixed during a run.
struct SystemMatrices {
  double omega;
  double tau;
  Mat L;
  Mat expA;
  Mat F;
  Mat B;
  Mat E;
  CMat basis2;  // doubled P̂, 2n x (2n-2)
  CMat dual2;   // doubled P̂†, (2n-2) x 2n
  CMat E_hat;

  std::size_t nodes() const noexcept { return static_cast<std::size_t>(L.rows()); }

  /// Disagreement coordinates X̂ = P̂‡ X. The consensus component along 1
  /// is annihilated, so passing X or X − [γ, ν] ⊗ 1 gives the same result.
  CVec reduce(const Vec& X) const { return dual2 * X.cast<Complex>(); }
};

SystemMatrices build_system(double omega, double tau, const Laplacian& L,
                            const LaplacianSpectrum& spectrum);

/// Vector norm ‖x‖ = ‖D U x‖∞ and its induced matrix norm ‖D U S U⁻¹ D⁻¹‖∞.
class EpsNorm {
 public:
  EpsNorm(CMat U, CMat U_inv, Vec scale);

  double operator()(const CVec& x) const;
  double induced(const CMat& S) const;

  const CMat& U() const noexcept { return U_; }
  const CMat& U_inv() const noexcept { return U_inv_; }
  const Vec& scale() const noexcept { return scale_; }

  /// D U and U⁻¹ D⁻¹ as single matrices.
  CMat forward() const;
  CMat inverse() const;

 private:
  CMat U_;
  CMat U_inv_;
  Vec scale_;
};

/// Build ‖·‖_ε for a matrix with ρ(M) < 1 such that ρ(M) ≤ ‖M‖_ε ≤ ρ(M) + ε.
///
/// M is brought to Schur form, eigenvalues closer than ε are grouped, and the
/// groups are decoupled by a unit-triangular similarity. Inside a group the
/// remaining triangular coupling is damped by diag(1, 1/δ, 1/δ², ...) with the
/// largest δ ∈ {1, ε, ε/2, ...} meeting the bound. When `input_map` is given,
/// each group is additionally rescaled so the largest row sum of
/// |D U input_map| inside the group equals one; where the group coupling
/// allows it every row is equalized instead. With `output_map` as well,
/// groups of repeated eigenvalues may be re-based to reduce
/// ‖output_map U⁻¹ D⁻¹‖∞ · ‖D U input_map‖∞.
///
/// Throws Error(SpectralRadiusTooLarge) if ρ ≥ 1, Error(InvalidArgument) if
/// ε ≤ 0 or ρ + ε ≥ 1, and Error(EpsilonTooSmall) if the bound cannot be met.
EpsNorm build_eps_norm(const CMat& M, double eps, const CMat* input_map = nullptr,
                       const CMat* output_map = nullptr);

/// Largest modulus among the eigenvalues of M (dense eigensolve).
double dense_spectral_radius(const CMat& M);

struct EpsNormFrame {
  double eps_norm;
  double rho;
  EpsNorm norm;
  double norm_Ehat;  // ‖Ê‖_ε
  double c_out;      // ‖P̂ U⁻¹ D⁻¹‖∞ with the doubled P̂
  double c_in;       // ‖D U P̂‡ F B‖∞

  double measure(const SystemMatrices& sys, const Vec& deviation) const {
    return norm(sys.reduce(deviation));
  }
};

/// (1 − ρ(Ê)) / 2.
double default_eps_norm(double rho) noexcept;

/// Frame for the reduced map of `sys`; eps_norm <= 0 selects the default.
EpsNormFrame build_eps_frame(const SystemMatrices& sys, double eps_norm = 0.0);

/// Quantities guaranteeing bounded (fixed zoom) or complete (adjustable zoom)
/// synchronization. Radii are per unit zoom μ and measured in ‖·‖_ε.
struct Certificate {
  double rho;
  double norm_eps;
  double xi_bar;
  double delta;
  double M;
  double eps_slack;
  double M_threshold;
  double theta;
  std::size_t dwell_steps;
  double T;
  double S1_radius;
  double S2_radius;
  /// c_in Δ / (1 − ‖Ê‖_ε): the limsup bound per unit μ, without slack.
  double ultimate_radius;
};

/// Throws Error(BelowThreshold) if M <= M_threshold (θ >= 1),
/// Error(SpectralRadiusTooLarge) if ‖Ê‖_ε >= 1 and Error(InvalidArgument)
/// for nonpositive Δ, M or eps_slack.
Certificate certify(const SystemMatrices& sys, const EpsNormFrame& frame, double xi_bar,
                    double delta, double M, double eps_slack);

/// Time-varying norms used to bound the error between sampling instants:
/// ‖Ê(dt)‖_ε and ‖D U P̂‡ F(dt) B‖∞.
struct IntersampleTerms {
  double dt;
  double flow_norm;
  double forcing_norm;
};

IntersampleTerms intersample_terms(const SystemMatrices& sys, const EpsNormFrame& frame,
                                   double dt);

}  // namespace qsync
