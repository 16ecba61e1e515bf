#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsync/graph.hpp"
#include "qsync/simulator.hpp"

namespace qsync {

struct SweepGrid {
  std::vector<double> taus;
  std::vector<double> mus;
  std::vector<double> deltas;
};

struct SweepSettings {
  double omega = 1.2533141373155001;
  double M = 10.0;
  double eps_slack = 0.1;
  double eps_norm = 0.0;
  ZoomMode mode = ZoomMode::Fixed;
  double horizon = 50.0;
  /// Long-run error is the largest sampled ‖E(t_k)‖∞ over this trailing
  /// fraction of the horizon.
  double tail = 0.2;
  double fraction = 0.9;
  double amplitude = 0.0;
  std::uint64_t seed = 1;
  bool allow_infeasible = false;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct SweepPoint {
  double tau;
  double mu;
  double delta;
  bool feasible = false;
  bool certified = false;
  bool simulated = false;
  bool saturated = false;
  double rho = 0.0;
  double M_threshold = 0.0;
  double theta = 0.0;
  double long_run_error = 0.0;
  std::string note;
};

/// Evaluates every (τ, μ, Δ) combination; models are shared across μ.
/// Results are returned in grid order (τ outermost, then Δ, then μ)
/// regardless of how many threads ran them.
std::vector<SweepPoint> run_sweep(const DirectedGraph& graph, const SweepSettings& settings,
                                  const SweepGrid& grid);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

}  // namespace qsync
