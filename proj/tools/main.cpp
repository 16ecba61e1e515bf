#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qsync/types.hpp"

namespace cli = qsync::cli;

int main(int argc, char** argv) {
  CLI::App app{"qsync: quantized sampled-data synchronization of harmonic oscillator networks"};
  app.require_subcommand(1);

  cli::AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "Feasibility windows, spectral radius and certificate");
  a->add_option("--scenario", analyze.scenario, "Take graph and parameters from a scenario file");
  a->add_option("--graph", analyze.graph, "Edge-list file or builtin:standin10");
  a->add_option("--omega", analyze.omega, "Natural frequency (rad/s)");
  a->add_option("--tau", analyze.tau, "Sampling period (s)");
  a->add_option("--delta", analyze.delta, "Quantization error bound");
  a->add_option("-M,--range", analyze.M, "Quantizer range M");
  a->add_option("--eps-slack", analyze.eps_slack, "Slack in theta, T and S2");
  a->add_option("--eps-norm", analyze.eps_norm, "Norm construction epsilon (0 = (1 - rho) / 2)");
  a->add_flag("--certificate", analyze.certificate, "Print the synchronization certificate");
  a->add_option("--csv", analyze.csv, "Also write the certificate as CSV to this file");

  cli::SimulateOptions simulate;
  auto* s = app.add_subcommand("simulate", "Run a scenario and write trace files");
  s->add_option("--scenario", simulate.scenario, "Scenario file")->required();
  s->add_option("--out", simulate.out, "Output directory")->required();
  s->add_option("--dense", simulate.dense, "Dense substeps per sampling period");

  cli::SweepOptions sweep;
  auto* w = app.add_subcommand("sweep", "Grid over tau, mu and delta with long-run error summary");
  w->add_option("--graph", sweep.graph, "Edge-list file or builtin:standin10");
  w->add_option("--tau", sweep.taus, "Sampling periods")->delimiter(',');
  w->add_option("--mu", sweep.mus, "Zoom levels")->delimiter(',');
  w->add_option("--delta", sweep.deltas, "Quantization error bounds")->delimiter(',');
  w->add_option("--omega", sweep.omega, "Natural frequency (rad/s)");
  w->add_option("-M,--range", sweep.M, "Quantizer range M");
  w->add_option("--eps-slack", sweep.eps_slack, "Slack in theta, T and S2");
  w->add_option("--mode", sweep.mode, "fixed or adjustable")
      ->check(CLI::IsMember({"fixed", "adjustable"}));
  w->add_option("--horizon", sweep.horizon, "Simulated time per point (s)");
  w->add_option("--tail", sweep.tail, "Trailing fraction used for the long-run error");
  w->add_option("--fraction", sweep.fraction, "Initial disagreement as a fraction of S1(mu)");
  w->add_option("--amplitude", sweep.amplitude, "Initial network amplitude as a fraction of xi*mu*M");
  w->add_option("--seed", sweep.seed, "Seed for the initial states");
  w->add_flag("--allow-infeasible", sweep.allow_infeasible, "Simulate periods outside every window");
  w->add_option("--threads", sweep.threads, "Worker threads (0 = all cores)");
  w->add_option("--out", sweep.out, "CSV output file (default stdout)");

  app.add_subcommand("verify", "Recompute the reference table and spectral radius");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kConfigError;
  }

  try {
    if (*a) return cli::run_analyze(analyze, std::cout);
    if (*s) return cli::run_simulate(simulate, std::cout);
    if (*w) return cli::run_sweep(sweep, std::cout);
    return cli::run_verify(std::cout);
  } catch (const qsync::Error& e) {
    std::cerr << "error (" << qsync::to_string(e.code()) << "): " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return cli::kInternalError;
  }
}
