#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>

#include "qsync/plot_data.hpp"
#include "qsync/scenario.hpp"
#include "qsync/simulator.hpp"
#include "qsync/sweep.hpp"
#include "qsync/verify.hpp"

namespace qsync::cli {

namespace {

DirectedGraph load_graph(const std::string& spec) {
  ScenarioConfig c;
  c.graph = spec;
  return scenario_graph(c);
}

std::string format_complex(Complex z) {
  std::ostringstream s;
  s << std::setprecision(6) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
    << "i";
  return s.str();
}

void print_certificate(std::ostream& out, const Certificate& c) {
  out << "certificate:\n"
      << "  rho: " << c.rho << '\n'
      << "  norm_eps: " << c.norm_eps << '\n'
      << "  xi_bar: " << c.xi_bar << '\n'
      << "  M_threshold: " << c.M_threshold << '\n'
      << "  theta: " << c.theta << '\n'
      << "  dwell_steps: " << c.dwell_steps << '\n'
      << "  T: " << c.T << '\n'
      << "  S1_radius: " << c.S1_radius << '\n'
      << "  S2_radius: " << c.S2_radius << '\n'
      << "  ultimate_radius: " << c.ultimate_radius << '\n';
}

// Opens `path` for writing, creating missing parent directories.
std::ofstream open_output(const std::string& path) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path);
  return f;
}

void write_certificate_csv(const std::string& path, const Certificate& c) {
  std::ofstream f = open_output(path);
  f.precision(std::numeric_limits<double>::max_digits10);
  f << "rho,norm_eps,M_threshold,theta,T,S1_radius,S2_radius\n"
    << c.rho << ',' << c.norm_eps << ',' << c.M_threshold << ',' << c.theta << ',' << c.T << ','
    << c.S1_radius << ',' << c.S2_radius << '\n';
  if (!f) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace

int run_analyze(const AnalyzeOptions& opts, std::ostream& out) {
  ModelParams p{opts.omega, opts.tau, opts.delta, opts.M};
  p.eps_slack = opts.eps_slack;
  p.eps_norm = opts.eps_norm;
  p.allow_infeasible = true;
  std::string graph_spec = opts.graph;
  if (!opts.scenario.empty()) {
    const ScenarioConfig c = load_scenario(opts.scenario);
    p = model_params(c);
    p.allow_infeasible = true;
    graph_spec = c.graph;
  }
  const DirectedGraph graph = load_graph(graph_spec);
  const Model model = build_model(graph, p);

  out << std::setprecision(8);
  out << "graph: " << graph_spec << " (" << graph.size() << " nodes, " << graph.edges().size()
      << " edges)\n";
  out << "xi:";
  for (Eigen::Index i = 0; i < model.spectrum.xi.size(); ++i) out << ' ' << model.spectrum.xi(i);
  out << "\nomega: " << p.omega << "\n\n";
  out << "mode  lambda                       phi          arccot(phi)\n";
  for (std::size_t i = 0; i < model.feasibility.per_mode.size(); ++i) {
    const ModeBound& b = model.feasibility.per_mode[i];
    out << std::left << std::setw(6) << i + 2 << std::setw(29) << format_complex(b.lambda)
        << std::setw(13) << b.phi << b.arccot_phi << '\n'
        << std::right;
  }
  out << "\ntau0: " << model.feasibility.tau0 << '\n' << "feasible windows:";
  for (const Interval& w : model.feasibility.windows) out << " (" << w.lo << ", " << w.hi << ")";
  const bool feasible = model.feasibility.is_feasible(p.tau);
  out << "\ntau: " << p.tau << (feasible ? " (feasible)" : " (outside every window)") << '\n'
      << "rho(E_hat): " << model.rho << '\n';

  if (!opts.certificate) return kOk;
  out << '\n';
  if (!model.certificate) {
    out << "certificate: unavailable (" << model.certificate_note << ")\n";
    return kConfigError;
  }
  print_certificate(out, *model.certificate);
  if (!opts.csv.empty()) write_certificate_csv(opts.csv, *model.certificate);
  return kOk;
}

int run_simulate(const SimulateOptions& opts, std::ostream& out) {
  ScenarioConfig config = load_scenario(opts.scenario);
  if (opts.dense) config.dense = *opts.dense;
  const DirectedGraph graph = scenario_graph(config);
  const Model model = build_model(graph, model_params(config));
  const Vec X0 = initial_state(config, model);
  const SimulationTrace trace = simulate(model, run_settings(config), X0);

  const std::filesystem::path dir(opts.out);
  emit_plot_data(trace, dir);
  {
    std::ofstream f(dir / "trace.csv");
    if (!f) throw Error(ErrorCode::Io, "cannot write " + (dir / "trace.csv").string());
    write_trace_csv(f, trace);
  }
  {
    std::ofstream f(dir / "events.csv");
    if (!f) throw Error(ErrorCode::Io, "cannot write " + (dir / "events.csv").string());
    write_events_csv(f, trace);
  }

  out << std::setprecision(8);
  out << "samples: " << trace.samples() << " (tau = " << trace.tau << ")\n"
      << "rows: " << trace.rows.size() << '\n';
  if (trace.k0) out << "k0: " << *trace.k0 << '\n';
  out << "saturated: " << (trace.saturated ? "yes" : "no") << '\n';
  if (!trace.rows.empty()) {
    const TraceRow& last = trace.rows.back();
    out << "final err_inf: " << last.err_inf << " at t = " << last.t << '\n'
        << "final mu: " << last.mu << '\n';
  }
  if (model.certificate) {
    print_certificate(out, *model.certificate);
  } else {
    out << "certificate: unavailable (" << model.certificate_note << ")\n";
  }
  out << "wrote " << (dir / "trace.csv").string() << ", events.csv, positions.csv, "
      << "velocities.csv, error.csv\n";
  return kOk;
}

int run_sweep(const SweepOptions& opts, std::ostream& out) {
  SweepSettings s;
  s.omega = opts.omega;
  s.M = opts.M;
  s.eps_slack = opts.eps_slack;
  s.mode = opts.mode == "adjustable" ? ZoomMode::Adjustable : ZoomMode::Fixed;
  s.horizon = opts.horizon;
  s.tail = opts.tail;
  s.fraction = opts.fraction;
  s.amplitude = opts.amplitude;
  s.seed = opts.seed;
  s.allow_infeasible = opts.allow_infeasible;
  s.threads = opts.threads;
  const SweepGrid grid{opts.taus, opts.mus, opts.deltas};
  const auto points = qsync::run_sweep(load_graph(opts.graph), s, grid);
  if (opts.out.empty()) {
    write_sweep_csv(out, points);
    return kOk;
  }
  std::ofstream f = open_output(opts.out);
  write_sweep_csv(f, points);
  out << "wrote " << points.size() << " points to " << opts.out << '\n';
  return kOk;
}

int run_verify(std::ostream& out) {
  const VerifyReport report = verify_reference_values();
  out << std::left << std::setw(46) << "check" << std::setw(14) << "expected" << std::setw(14)
      << "computed" << std::setw(10) << "tol" << "result\n";
  for (const auto& c : report.checks) {
    out << std::setw(46) << c.name << std::setw(14) << std::setprecision(8) << c.expected
        << std::setw(14) << c.computed << std::setw(10) << std::setprecision(2) << c.tolerance
        << (c.pass ? "PASS" : "FAIL") << '\n';
  }
  out << std::right << (report.passed() ? "all checks passed\n" : "verification FAILED\n");
  return report.passed() ? kOk : kVerifyFailed;
}

}  // namespace qsync::cli
