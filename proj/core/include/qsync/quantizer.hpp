#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "qsync/types.hpp"

namespace qsync {

/// Mid-tread uniform quantizer: levels k·2Δ for |k| <= K = ceil(M / 2Δ),
/// nearest level with ties rounded toward +inf, saturating at ±2ΔK.
///
/// For |y| <= M the error is at most Δ, and for |y| > M the output magnitude
/// exceeds M − Δ, so saturation can be detected from the output alone.
class UniformQuantizer {
 public:
  /// Throws Error(InvalidArgument) unless 0 < Δ < M.
  UniformQuantizer(double delta, double range);

  double delta() const noexcept { return delta_; }
  double range() const noexcept { return range_; }
  double step() const noexcept { return 2.0 * delta_; }
  long long max_level() const noexcept { return max_level_; }

  /// q(y) at unit zoom.
  double operator()(double y) const noexcept;

  /// q_μ(y) = μ q(y / μ). Throws Error(InvalidArgument) for μ <= 0.
  double quantize(double mu, double y) const;

  /// Elementwise q_μ.
  Vec quantize(double mu, const Vec& y) const;

 private:
  double delta_;
  double range_;
  long long max_level_;
};

/// u = −L q, the sampled coupling input held on [t_k, t_{k+1}).
Vec coupling_input(const Mat& L, const Vec& quantized_velocities);

/// max_i |v_i / μ| <= M − 2Δ.
bool zoom_out_trigger(std::span<const double> v, double mu, const UniformQuantizer& q);

enum class ZoomMode { Fixed, Adjustable };
enum class ZoomStage { ZoomingOut, ZoomingIn };

const char* to_string(ZoomStage stage) noexcept;

/// Zoom variable μ(t). In fixed mode μ is constant. In adjustable mode
/// μ(t_k) = kΔ while zooming out (no control applied); once the trigger fires
/// at k₀ the schedule switches to μ = θ^⌊(k − k₀)/N⌋ k₀Δ with N = T/τ.
class ZoomSchedule {
 public:
  static ZoomSchedule fixed(double mu);
  /// Throws Error(InvalidArgument) unless 0 < θ < 1 and dwell_steps >= 1.
  static ZoomSchedule adjustable(double delta, double tau, double theta,
                                 std::size_t dwell_steps);

  ZoomMode mode() const noexcept { return mode_; }
  ZoomStage stage() const noexcept { return stage_; }
  std::optional<std::size_t> k0() const noexcept { return k0_; }
  double theta() const noexcept { return theta_; }
  std::size_t dwell_steps() const noexcept { return dwell_steps_; }

  /// Advance to sampling instant k with sampled velocities v. In the
  /// zoom-out stage this evaluates the trigger (from k = 1 on) and latches k₀.
  /// Returns true when the quantized coupling is active on [t_k, t_{k+1}).
  bool observe(std::size_t k, std::span<const double> v, const UniformQuantizer& q);

  /// μ on [t_k, t_{k+1}) given the current state of the machine.
  double mu_at_sample(std::size_t k) const;

  /// Right-continuous μ(t).
  double mu(double t) const;

  /// Zoom-in law; throws Error(InvalidArgument) before k₀ is latched.
  double zoom_in_mu(double t) const;

 private:
  ZoomSchedule() = default;

  ZoomMode mode_ = ZoomMode::Fixed;
  ZoomStage stage_ = ZoomStage::ZoomingIn;
  double mu_ = 1.0;
  double delta_ = 0.0;
  double tau_ = 0.0;
  double theta_ = 0.0;
  std::size_t dwell_steps_ = 0;
  std::optional<std::size_t> k0_;
};

}  // namespace qsync
