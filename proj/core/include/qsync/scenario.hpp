#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qsync/graph.hpp"
#include "qsync/simulator.hpp"

namespace qsync {

enum class InitialMode { Seeded, Explicit };

struct InitialConfig {
  InitialMode mode = InitialMode::Seeded;
  /// Seeded mode: ‖X̂(0)‖_ε as a fraction of S₁(μ₀).
  double fraction = 0.9;
  /// Seeded mode: M₀ as a fraction of ξ̄μ₀M. Zero keeps the network average
  /// at rest, which adjustable zoom needs to avoid saturating on it.
  double amplitude = 0.0;
  std::vector<double> r;
  std::vector<double> v;

  bool operator==(const InitialConfig&) const = default;
};

/// One simulation run as read from a `key = value` file. Section headers
/// `[zoom]` and `[initial]` prefix the keys that follow them.
struct ScenarioConfig {
  std::string graph = "builtin:standin10";
  double omega = 1.2533141373155001;  // sqrt(pi / 2)
  double tau = 0.1;
  double delta = 0.5;
  double M = 10.0;
  ZoomMode zoom_mode = ZoomMode::Fixed;
  double zoom_mu = 1.0;
  double eps_slack = 0.1;
  double eps_norm = 0.0;  // 0 selects (1 - rho) / 2
  double horizon = 100.0;
  std::size_t dense = 0;
  std::uint64_t seed = 1;
  bool allow_infeasible = false;
  InitialConfig initial;

  bool operator==(const ScenarioConfig&) const = default;
};

struct ScenarioIssue {
  std::string key;  // dotted key path, or "line N" for syntax errors
  std::string message;
};

/// Carries every problem found in a scenario, not just the first.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<ScenarioIssue> issues);
  const std::vector<ScenarioIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ScenarioIssue> issues_;
};

/// Parses and validates; throws ScenarioError listing all violations.
ScenarioConfig parse_scenario(std::string_view text);

/// Reads a scenario file; a relative `graph` path is resolved against the
/// file's directory.
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Canonical text form; parse_scenario(emit_scenario(c)) == c.
std::string emit_scenario(const ScenarioConfig& config);

/// Validation shared by the parser and programmatic callers.
std::vector<ScenarioIssue> validate_scenario(const ScenarioConfig& config);

/// `builtin:standin10` or an edge-list file.
DirectedGraph scenario_graph(const ScenarioConfig& config);

ModelParams model_params(const ScenarioConfig& config);
RunSettings run_settings(const ScenarioConfig& config);

/// Explicit vectors, or the seeded draw at μ₀ = zoom.mu (in adjustable mode
/// zoom.mu only sets the scale of this draw).
Vec initial_state(const ScenarioConfig& config, const Model& model);

}  // namespace qsync
