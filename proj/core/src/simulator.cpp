#include "qsync/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace qsync {

double ReferenceOrbit::gamma(double t) const {
  return std::cos(omega * t) * gamma0 + std::sin(omega * t) * nu0 / omega;
}

double ReferenceOrbit::nu(double t) const {
  return -omega * std::sin(omega * t) * gamma0 + std::cos(omega * t) * nu0;
}

double ReferenceOrbit::amplitude() const { return std::hypot(omega * gamma0, nu0); }

ReferenceOrbit reference_orbit(const Vec& xi, const Vec& X0, double omega) {
  const Eigen::Index n = xi.size();
  if (X0.size() != 2 * n) throw Error(ErrorCode::InvalidArgument, "state size mismatch");
  return {omega, xi.dot(X0.head(n)), xi.dot(X0.tail(n))};
}

Vec sync_deviation(const Vec& X, const ReferenceOrbit& orbit, double t) {
  const Eigen::Index n = X.size() / 2;
  Vec dev = X;
  dev.head(n).array() -= orbit.gamma(t);
  dev.tail(n).array() -= orbit.nu(t);
  return dev;
}

Vec residual_input(const Mat& L, const Vec& quantized_v, const Vec& v) {
  const Eigen::Index n = L.rows();
  if (quantized_v.size() != n || v.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "residual input dimension mismatch");
  }
  Vec C = Vec::Zero(2 * n);
  C.tail(n) = -(L * (quantized_v - v));
  return C;
}

Vec step_exact(const Flow& flow, const Vec& X, const Vec& C) {
  if (X.size() != flow.E.cols()) throw Error(ErrorCode::InvalidArgument, "state size mismatch");
  if (C.size() == 0) return flow.E * X;
  if (C.size() != X.size()) throw Error(ErrorCode::InvalidArgument, "input size mismatch");
  return flow.E * X + flow.F * C;
}

Vec step_exact(const SystemMatrices& sys, const Vec& X, const Vec& C, double dt) {
  if (!(dt > 0.0) || dt > sys.tau * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "step must satisfy 0 < dt <= tau");
  }
  return step_exact(assemble_flow(sys.omega, dt, sys.L), X, C);
}

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::ZoomOutEnd: return "zoom_out_end";
    case EventKind::DwellBoundary: return "dwell_boundary";
    case EventKind::Saturation: return "saturation";
    case EventKind::S1Membership: return "s1_membership";
    case EventKind::AmplitudeWarning: return "amplitude_warning";
  }
  return "unknown";
}

Model build_model(const DirectedGraph& graph, const ModelParams& p) {
  if (!(p.omega > 0.0) || !(p.tau > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "omega and tau must be positive");
  }
  if (!is_strongly_connected(graph)) {
    throw Error(ErrorCode::NotStronglyConnected, "graph is not strongly connected");
  }
  if (is_degenerate_sampling(p.omega, p.tau)) {
    throw Error(ErrorCode::DegenerateSampling, "tau = k*pi/omega lies on a window boundary");
  }
  Laplacian L = build_laplacian(graph);
  LaplacianSpectrum spectrum = spectral_decomposition(L);
  FeasibilityReport feas = feasible_windows(spectrum, p.omega);
  const bool feasible = feas.is_feasible(p.tau);
  if (!feasible && !p.allow_infeasible) {
    std::ostringstream msg;
    msg << "tau = " << p.tau << " is outside every feasibility window (first window (0, "
        << feas.windows.front().hi << "))";
    throw Error(ErrorCode::InfeasibleSamplingPeriod, msg.str());
  }
  SystemMatrices sys = build_system(p.omega, p.tau, L, spectrum);
  const double rho = spectral_radius_reduced(spectrum, p.omega, p.tau);

  Model model{p, L, spectrum, std::move(sys), std::move(feas),
              UniformQuantizer(p.delta, p.M), rho, std::nullopt, std::nullopt, {}};
  if (!feasible) {
    model.certificate_note = "sampling period outside the feasibility windows";
  }
  if (feasible && rho < 1.0) {
    try {
      model.frame = build_eps_frame(model.sys, p.eps_norm);
      model.certificate = certify(model.sys, *model.frame, model.spectrum.xi_max(), p.delta,
                                  p.M, p.eps_slack);
    } catch (const Error& e) {
      model.certificate_note = e.what();
    }
  } else if (model.certificate_note.empty()) {
    model.certificate_note = "rho(E_hat) >= 1";
  }
  return model;
}

double disagreement_norm(const Model& model, const Vec& X) {
  if (!model.frame) throw Error(ErrorCode::InvalidArgument, "no eps-norm frame available");
  return (*model.frame).measure(model.sys, X);
}

Vec seeded_initial_state(const Model& model, double mu, double fraction, double amplitude,
                         std::uint64_t seed) {
  if (!(mu > 0.0) || !(fraction >= 0.0) || !(amplitude >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "seeded state needs mu > 0 and nonnegative fractions");
  }
  const auto n = static_cast<Eigen::Index>(model.sys.nodes());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec X(2 * n);
  for (Eigen::Index i = 0; i < X.size(); ++i) X(i) = unit(rng);

  const double M = model.params.M;
  if (!model.frame || !model.certificate) {
    const double vmax = X.tail(n).cwiseAbs().maxCoeff();
    return X * (fraction * mu * M / 2.0 / std::max(vmax, 1e-300));
  }
  const Vec& xi = model.spectrum.xi;
  const ReferenceOrbit orbit = reference_orbit(xi, X, model.params.omega);
  Vec disagreement = sync_deviation(X, orbit, 0.0);
  const double current = disagreement_norm(model, disagreement);
  disagreement *= fraction * model.certificate->S1_radius * mu / current;

  const double target = amplitude * model.certificate->xi_bar * mu * M;
  const double g = orbit.gamma0 * target / orbit.amplitude();
  const double v = orbit.nu0 * target / orbit.amplitude();
  disagreement.head(n).array() += g;
  disagreement.tail(n).array() += v;
  return disagreement;
}

namespace {

struct DenseFlows {
  std::vector<double> offsets;
  std::vector<Flow> coupled;
  std::vector<Mat> free;
};

DenseFlows make_dense(const SystemMatrices& sys, std::size_t dense) {
  DenseFlows out;
  if (dense < 2) return out;
  const double dt = sys.tau / static_cast<double>(dense);
  for (std::size_t j = 1; j < dense; ++j) {
    const double off = dt * static_cast<double>(j);
    out.offsets.push_back(off);
    out.coupled.push_back(assemble_flow(sys.omega, off, sys.L));
    out.free.push_back(harmonic_flow(sys.omega, off, sys.nodes()));
  }
  return out;
}

}  // namespace

SimulationTrace simulate(const Model& model, const RunSettings& run, const Vec& X0) {
  const SystemMatrices& sys = model.sys;
  const auto n = static_cast<Eigen::Index>(sys.nodes());
  if (X0.size() != 2 * n || !X0.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "initial state must be finite with 2n entries");
  }
  const UniformQuantizer& q = model.quantizer;
  const double tau = sys.tau;

  ZoomSchedule schedule = ZoomSchedule::fixed(run.mode == ZoomMode::Fixed ? run.mu : 1.0);
  if (run.mode == ZoomMode::Adjustable) {
    if (!(q.range() > 2.0 * q.delta())) {
      throw Error(ErrorCode::ZoomRangeTooSmall, "adjustable zoom requires M > 2 Delta");
    }
    if (!model.certificate) {
      throw Error(ErrorCode::BelowThreshold,
                  "adjustable zoom needs a certificate: " + model.certificate_note);
    }
    schedule = ZoomSchedule::adjustable(q.delta(), tau, model.certificate->theta,
                                        model.certificate->dwell_steps);
  }

  SimulationTrace trace;
  trace.nodes = sys.nodes();
  trace.omega = sys.omega;
  trace.tau = tau;
  trace.mode = run.mode;
  trace.orbit = reference_orbit(model.spectrum.xi, X0, sys.omega);
  const ReferenceOrbit& orbit = trace.orbit;
  const DenseFlows dense = make_dense(sys, run.dense);
  const Flow period{sys.E, sys.F};
  trace.rows.reserve((run.steps + 1) * std::max<std::size_t>(1, run.dense));

  auto push_row = [&](double t, std::size_t k, bool sample, const Vec& X, double mu,
                      ZoomStage stage) {
    const double err = sync_deviation(X, orbit, t).cwiseAbs().maxCoeff();
    if (sample) trace.sample_rows.push_back(trace.rows.size());
    trace.rows.push_back({t, k, sample, X, mu, stage, err});
  };
  auto event = [&](EventKind kind, std::size_t k, double value, std::string detail) {
    trace.events.push_back({kind, k, static_cast<double>(k) * tau, value, std::move(detail)});
  };

  if (run.mode == ZoomMode::Fixed && model.certificate) {
    const double ratio = disagreement_norm(model, X0) / (model.certificate->S1_radius * run.mu);
    event(EventKind::S1Membership, 0, ratio, ratio <= 1.0 ? "inside S1(mu)" : "outside S1(mu)");
    const double bound = model.certificate->xi_bar * run.mu * q.range();
    if (orbit.amplitude() > bound) {
      event(EventKind::AmplitudeWarning, 0, orbit.amplitude(),
            "M0 exceeds xi_bar*mu*M; non-saturation is not guaranteed");
    }
  }

  bool amplitude_warned = false;
  Vec X = X0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * tau;
    const Vec v = X.tail(n);
    const bool active = schedule.observe(k, std::span<const double>(v.data(), v.size()), q);
    const double mu = schedule.mu_at_sample(k);
    const ZoomStage stage = schedule.stage();

    if (schedule.k0() && *schedule.k0() == k) {
      trace.k0 = k;
      event(EventKind::ZoomOutEnd, k, mu, "zoom-out trigger fired");
      if (model.frame) {
        const double ratio =
            disagreement_norm(model, X) / (model.certificate->S1_radius * mu);
        event(EventKind::S1Membership, k, ratio,
              ratio <= 1.0 ? "inside S1(mu(t_k0))" : "outside S1(mu(t_k0))");
      }
    }
    if (run.mode == ZoomMode::Adjustable && trace.k0 && k > *trace.k0 &&
        (k - *trace.k0) % schedule.dwell_steps() == 0) {
      event(EventKind::DwellBoundary, k, mu, "zoom-in contraction");
    }
    if (run.mode == ZoomMode::Adjustable && trace.k0 && !amplitude_warned &&
        orbit.amplitude() > model.certificate->xi_bar * mu * q.range()) {
      amplitude_warned = true;
      event(EventKind::AmplitudeWarning, k, orbit.amplitude(),
            "M0 exceeds xi_bar*mu*M; the common velocity will saturate the quantizer");
    }

    push_row(t, k, true, X, mu, stage);
    if (model.frame) trace.xhat_eps.push_back(disagreement_norm(model, X));
    if (k == run.steps) break;

    Vec C;
    if (active) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v(i)) > mu * q.range()) {
          trace.saturated = true;
          event(EventKind::Saturation, k, v(i), "node " + std::to_string(i + 1));
        }
      }
      C = residual_input(sys.L, q.quantize(mu, v), v);
    }

    for (std::size_t j = 0; j < dense.offsets.size(); ++j) {
      const Vec Xd = active ? step_exact(dense.coupled[j], X, C) : Vec(dense.free[j] * X);
      push_row(t + dense.offsets[j], k, false, Xd, mu, stage);
    }
    X = active ? step_exact(period, X, C) : Vec(sys.expA * X);
  }
  return trace;
}

std::vector<double> sync_error(const SimulationTrace& trace, const ReferenceOrbit& orbit) {
  std::vector<double> out;
  out.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    out.push_back(sync_deviation(row.X, orbit, row.t).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace qsync
