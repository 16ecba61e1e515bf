#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsync/graph.hpp"
#include "qsync/propagation.hpp"
#include "qsync/quantizer.hpp"
#include "qsync/stability.hpp"

namespace qsync {

/// Network-average orbit (γ, ν): an uncoupled harmonic oscillator started
/// from (ξᵀr(0), ξᵀv(0)).
struct ReferenceOrbit {
  double omega;
  double gamma0;
  double nu0;

  double gamma(double t) const;
  double nu(double t) const;
  /// γ² + ν²/ω², constant along the orbit.
  double energy() const { return gamma0 * gamma0 + nu0 * nu0 / (omega * omega); }
  /// M₀ = sqrt(ω²γ² + ν²).
  double amplitude() const;
};

ReferenceOrbit reference_orbit(const Vec& xi, const Vec& X0, double omega);

/// X(t) − [γ(t), ν(t)]ᵀ ⊗ 1ₙ.
Vec sync_deviation(const Vec& X, const ReferenceOrbit& orbit, double t);

/// C(t_k) = [0; −L (q − v)].
Vec residual_input(const Mat& L, const Vec& quantized_v, const Vec& v);

/// E(dt) X + F(dt) C; C may be empty for an uncoupled step.
Vec step_exact(const Flow& flow, const Vec& X, const Vec& C);

/// Convenience overload assembling the flow for (ω, dt, L) on the fly.
Vec step_exact(const SystemMatrices& sys, const Vec& X, const Vec& C, double dt);

struct ModelParams {
  double omega;
  double tau;
  double delta;
  double M;
  double eps_slack = 0.1;
  double eps_norm = 0.0;  // <= 0 selects (1 − ρ)/2
  bool allow_infeasible = false;
};

/// Immutable per-configuration analysis shared by any number of runs.
struct Model {
  ModelParams params;
  Laplacian laplacian;
  LaplacianSpectrum spectrum;
  SystemMatrices sys;
  FeasibilityReport feasibility;
  UniformQuantizer quantizer;
  double rho;
  std::optional<EpsNormFrame> frame;
  std::optional<Certificate> certificate;
  /// Why `certificate` is absent, when it is.
  std::string certificate_note;
};

/// Validates and analyses a configuration. Throws Error with
/// NotStronglyConnected, DegenerateSampling (τ = kπ/ω) or
/// InfeasibleSamplingPeriod (τ outside every window, unless allowed).
Model build_model(const DirectedGraph& graph, const ModelParams& params);

struct RunSettings {
  ZoomMode mode = ZoomMode::Fixed;
  double mu = 1.0;
  std::size_t steps = 0;
  std::size_t dense = 0;  // substeps per τ; 0 or 1 disables dense output
};

enum class EventKind {
  ZoomOutEnd,
  DwellBoundary,
  Saturation,
  S1Membership,
  AmplitudeWarning,
};

const char* to_string(EventKind kind) noexcept;

struct TraceEvent {
  EventKind kind;
  std::size_t k;
  double t;
  double value;
  std::string detail;
};

struct TraceRow {
  double t;
  std::size_t k;  // sampling interval containing t
  bool sample;
  Vec X;
  double mu;
  ZoomStage stage;
  double err_inf;
};

struct SimulationTrace {
  std::size_t nodes = 0;
  double omega = 0.0;
  double tau = 0.0;
  ZoomMode mode = ZoomMode::Fixed;
  ReferenceOrbit orbit{};
  std::vector<TraceRow> rows;
  std::vector<std::size_t> sample_rows;
  /// ‖X̂(t_k)‖_ε per sample; empty when no ε-norm frame exists.
  std::vector<double> xhat_eps;
  std::vector<TraceEvent> events;
  std::optional<std::size_t> k0;
  bool saturated = false;

  const TraceRow& sample(std::size_t k) const { return rows[sample_rows[k]]; }
  std::size_t samples() const { return sample_rows.size(); }
};

/// Exact piecewise closed-form propagation over `run.steps` sampling periods.
/// Adjustable mode throws Error(ZoomRangeTooSmall) if M <= 2Δ and
/// Error(BelowThreshold) when no certificate (θ, T) is available.
SimulationTrace simulate(const Model& model, const RunSettings& run, const Vec& X0);

/// ‖E(t)‖∞ recomputed from the stored states.
std::vector<double> sync_error(const SimulationTrace& trace, const ReferenceOrbit& orbit);

/// Reproducible initial state with disagreement ‖X̂‖_ε = `fraction`·S₁(μ) and
/// network amplitude M₀ = `amplitude`·ξ̄μM (direction drawn from the seed).
/// Without a frame the state is drawn with ‖v‖∞ <= fraction·μM/2 instead.
Vec seeded_initial_state(const Model& model, double mu, double fraction, double amplitude,
                         std::uint64_t seed);

/// ‖X̂‖_ε of X relative to the reference orbit at time t; requires a frame.
double disagreement_norm(const Model& model, const Vec& X);

}  // namespace qsync
