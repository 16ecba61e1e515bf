#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qsync::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kConfigError = 2, kInternalError = 3 };

struct AnalyzeOptions {
  std::string scenario;
  std::string graph = "builtin:standin10";
  double omega = 1.2533141373155001;
  double tau = 0.1;
  double delta = 0.5;
  double M = 10.0;
  double eps_slack = 0.1;
  double eps_norm = 0.0;
  bool certificate = false;
  std::string csv;
};

struct SimulateOptions {
  std::string scenario;
  std::string out;
  std::optional<std::size_t> dense;
};

struct SweepOptions {
  std::string graph = "builtin:standin10";
  std::vector<double> taus{0.1};
  std::vector<double> mus{1.0};
  std::vector<double> deltas{0.5};
  double omega = 1.2533141373155001;
  double M = 10.0;
  double eps_slack = 0.1;
  std::string mode = "fixed";
  double horizon = 50.0;
  double tail = 0.2;
  double fraction = 0.9;
  double amplitude = 0.0;
  std::uint64_t seed = 1;
  bool allow_infeasible = false;
  std::size_t threads = 0;
  std::string out;
};

int run_analyze(const AnalyzeOptions& opts, std::ostream& out);
int run_simulate(const SimulateOptions& opts, std::ostream& out);
int run_sweep(const SweepOptions& opts, std::ostream& out);
int run_verify(std::ostream& out);

}  // namespace qsync::cli
