#include "qsync/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <memory>
#include <ostream>
#include <thread>

namespace qsync {

namespace {

struct ModelSlot {
  double tau;
  double delta;
  std::unique_ptr<Model> model;
  std::string error;
  bool feasible = false;
};

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested != 0 ? requested : std::thread::hardware_concurrency();
  return std::clamp<std::size_t>(n, 1, std::max<std::size_t>(jobs, 1));
}

template <typename Fn>
void parallel_for(std::size_t jobs, std::size_t threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

}  // namespace

std::vector<SweepPoint> run_sweep(const DirectedGraph& graph, const SweepSettings& s,
                                  const SweepGrid& grid) {
  if (!(s.horizon > 0.0) || !(s.tail > 0.0 && s.tail <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "sweep needs horizon > 0 and tail in (0, 1]");
  }
  std::vector<ModelSlot> slots;
  for (double tau : grid.taus) {
    for (double delta : grid.deltas) slots.push_back({tau, delta, nullptr, {}, false});
  }
  const std::size_t threads = worker_count(s.threads, slots.size() * grid.mus.size());

  parallel_for(slots.size(), threads, [&](std::size_t i) {
    ModelSlot& slot = slots[i];
    ModelParams p{s.omega, slot.tau, slot.delta, s.M};
    p.eps_slack = s.eps_slack;
    p.eps_norm = s.eps_norm;
    p.allow_infeasible = s.allow_infeasible;
    try {
      slot.model = std::make_unique<Model>(build_model(graph, p));
      slot.feasible = slot.model->feasibility.is_feasible(slot.tau);
    } catch (const Error& e) {
      slot.error = e.what();
    }
  });

  std::vector<SweepPoint> points(slots.size() * grid.mus.size());
  parallel_for(points.size(), threads, [&](std::size_t i) {
    const ModelSlot& slot = slots[i / grid.mus.size()];
    SweepPoint& pt = points[i];
    pt.tau = slot.tau;
    pt.delta = slot.delta;
    pt.mu = grid.mus[i % grid.mus.size()];
    if (!slot.model) {
      pt.note = slot.error;
      pt.long_run_error = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const Model& model = *slot.model;
    pt.feasible = slot.feasible;
    pt.rho = model.rho;
    pt.certified = model.certificate.has_value();
    if (model.certificate) {
      pt.M_threshold = model.certificate->M_threshold;
      pt.theta = model.certificate->theta;
    } else {
      pt.note = model.certificate_note;
    }
    try {
      RunSettings run;
      run.mode = s.mode;
      run.mu = pt.mu;
      run.steps = static_cast<std::size_t>(std::max(1.0, std::round(s.horizon / slot.tau)));
      const Vec X0 = seeded_initial_state(model, pt.mu, s.fraction, s.amplitude, s.seed);
      const SimulationTrace trace = simulate(model, run, X0);
      const std::size_t total = trace.samples();
      const auto tail = static_cast<std::size_t>(std::ceil(s.tail * static_cast<double>(total)));
      double worst = 0.0;
      for (std::size_t k = total - std::max<std::size_t>(tail, 1); k < total; ++k) {
        worst = std::max(worst, trace.sample(k).err_inf);
      }
      pt.simulated = true;
      pt.saturated = trace.saturated;
      pt.long_run_error = worst;
    } catch (const Error& e) {
      pt.note = e.what();
      pt.long_run_error = std::numeric_limits<double>::quiet_NaN();
    }
  });
  return points;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  out << "tau,mu,delta,feasible,certified,simulated,saturated,rho,M_threshold,theta,"
         "long_run_error,note\n";
  for (const auto& p : points) {
    out << p.tau << ',' << p.mu << ',' << p.delta << ',' << p.feasible << ',' << p.certified
        << ',' << p.simulated << ',' << p.saturated << ',' << p.rho << ',' << p.M_threshold
        << ',' << p.theta << ',' << p.long_run_error << ',' << csv_field(p.note) << '\n';
  }
  out.precision(precision);
}

}  // namespace qsync
