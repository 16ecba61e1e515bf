#include "qsync/quantizer.hpp"

#include <algorithm>
#include <cmath>

namespace qsync {

UniformQuantizer::UniformQuantizer(double delta, double range) : delta_(delta), range_(range) {
  if (!(delta > 0.0) || !(range > delta) || !std::isfinite(range)) {
    throw Error(ErrorCode::InvalidArgument, "quantizer needs 0 < Delta < M");
  }
  max_level_ = static_cast<long long>(std::ceil(range / (2.0 * delta)));
}

double UniformQuantizer::operator()(double y) const noexcept {
  const double step = 2.0 * delta_;
  double level = std::floor(y / step + 0.5);
  level = std::clamp(level, -static_cast<double>(max_level_), static_cast<double>(max_level_));
  return level * step;
}

double UniformQuantizer::quantize(double mu, double y) const {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "zoom mu must be positive");
  return mu * (*this)(y / mu);
}

Vec UniformQuantizer::quantize(double mu, const Vec& y) const {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "zoom mu must be positive");
  Vec out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) out(i) = mu * (*this)(y(i) / mu);
  return out;
}

Vec coupling_input(const Mat& L, const Vec& quantized_velocities) {
  if (L.cols() != quantized_velocities.size()) {
    throw Error(ErrorCode::InvalidArgument, "coupling input dimension mismatch");
  }
  return -(L * quantized_velocities);
}

bool zoom_out_trigger(std::span<const double> v, double mu, const UniformQuantizer& q) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "trigger needs mu > 0");
  const double limit = q.range() - 2.0 * q.delta();
  if (!(limit > 0.0)) {
    throw Error(ErrorCode::ZoomRangeTooSmall, "M <= 2 Delta: zoom-out trigger unreachable");
  }
  return std::all_of(v.begin(), v.end(), [&](double vi) { return std::abs(vi / mu) <= limit; });
}

const char* to_string(ZoomStage stage) noexcept {
  return stage == ZoomStage::ZoomingOut ? "zoom_out" : "zoom_in";
}

ZoomSchedule ZoomSchedule::fixed(double mu) {
  if (!(mu > 0.0)) throw Error(ErrorCode::InvalidArgument, "fixed zoom mu must be positive");
  ZoomSchedule s;
  s.mode_ = ZoomMode::Fixed;
  s.stage_ = ZoomStage::ZoomingIn;
  s.mu_ = mu;
  return s;
}

ZoomSchedule ZoomSchedule::adjustable(double delta, double tau, double theta,
                                      std::size_t dwell_steps) {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "contraction factor theta must lie in (0, 1)");
  }
  if (dwell_steps == 0 || !(delta > 0.0) || !(tau > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "adjustable zoom needs Delta, tau > 0 and T >= tau");
  }
  ZoomSchedule s;
  s.mode_ = ZoomMode::Adjustable;
  s.stage_ = ZoomStage::ZoomingOut;
  s.delta_ = delta;
  s.tau_ = tau;
  s.theta_ = theta;
  s.dwell_steps_ = dwell_steps;
  return s;
}

bool ZoomSchedule::observe(std::size_t k, std::span<const double> v, const UniformQuantizer& q) {
  if (mode_ == ZoomMode::Fixed) return true;
  if (stage_ == ZoomStage::ZoomingOut) {
    // μ(t_0) = 0, so the trigger is only meaningful from k = 1.
    if (k == 0) return false;
    if (!zoom_out_trigger(v, static_cast<double>(k) * delta_, q)) return false;
    stage_ = ZoomStage::ZoomingIn;
    k0_ = k;
  }
  return k >= *k0_;
}

double ZoomSchedule::mu_at_sample(std::size_t k) const {
  if (mode_ == ZoomMode::Fixed) return mu_;
  if (!k0_ || k < *k0_) return static_cast<double>(k) * delta_;
  const auto epoch = (k - *k0_) / dwell_steps_;
  return std::pow(theta_, static_cast<double>(epoch)) * static_cast<double>(*k0_) * delta_;
}

double ZoomSchedule::mu(double t) const {
  if (mode_ == ZoomMode::Fixed) return mu_;
  // Snap to the sampling grid so that t = kτ lands on sample k.
  const double idx = std::floor(t / tau_ + 1e-9);
  return mu_at_sample(static_cast<std::size_t>(std::max(0.0, idx)));
}

double ZoomSchedule::zoom_in_mu(double t) const {
  if (mode_ != ZoomMode::Adjustable || !k0_) {
    throw Error(ErrorCode::InvalidArgument, "zoom-in law needs a latched k0");
  }
  const double idx = std::max(std::floor(t / tau_ + 1e-9), static_cast<double>(*k0_));
  return mu_at_sample(static_cast<std::size_t>(idx));
}

}  // namespace qsync
