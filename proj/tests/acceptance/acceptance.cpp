// Runs the ten acceptance criteria and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qsync/graph.hpp"
#include "qsync/propagation.hpp"
#include "qsync/quantizer.hpp"
#include "qsync/simulator.hpp"
#include "qsync/stability.hpp"
#include "qsync/verify.hpp"

namespace {

using namespace qsync;
using std::numbers::pi;

const double kOmega = std::sqrt(pi / 2.0);
const double kBand = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

const Model& reference_model() {
  static const Model m = build_model(standin_graph(), {kOmega, 0.1, 0.5, 10.0});
  return m;
}

Outcome reference_table() {
  Outcome out;
  for (const auto& row : reference_modes()) {
    const auto b = phi_bound(row.lambda, reference_omega());
    out.require(std::abs(b.phi - row.phi) <= kTableTolerance,
                fmt("phi mismatch at lambda %.4f: %.6f", row.lambda.real(), b.phi));
    out.require(std::abs(b.arccot_phi - row.arccot_phi) <= kTableTolerance,
                fmt("arccot mismatch at lambda %.4f: %.6f", row.lambda.real(), b.arccot_phi));
  }
  out.detail = out.pass ? "9 modes within 1e-3" : out.detail;
  return out;
}

Outcome spectral_radius() {
  Outcome out;
  std::vector<Complex> lambdas;
  for (const auto& row : reference_modes()) lambdas.push_back(row.lambda);
  const double rho = spectral_radius_reduced(lambdas, reference_omega(), kReferenceTau);
  const double dense = oracle::dense_radius(mode_block_matrix(lambdas, reference_omega(), kReferenceTau));
  out.require(std::abs(rho - kReferenceRho) <= kRhoTolerance, fmt("rho = %.8f", rho));
  out.require(std::abs(dense - rho) <= kDenseTolerance, fmt("dense %.12f vs roots %.12f", dense, rho));
  if (out.pass) out.detail = fmt("rho = %.8f, dense gap %.1e", rho, std::abs(dense - rho));
  return out;
}

Outcome flow_oracle() {
  Outcome out;
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> om(0.2, 5.0), tt(0.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double omega = om(rng);
    double tau = tt(rng);
    if (tau == 0.0) tau = 1e-3;
    const Mat A = oracle::harmonic_generator(omega, 3);
    worst = std::max(worst, (harmonic_flow(omega, tau, 3) - oracle::series_expm(A * tau)).cwiseAbs().maxCoeff());
    worst = std::max(worst, (forcing_integral(omega, tau, 3) - oracle::series_forcing(A, tau)).cwiseAbs().maxCoeff());
  }
  out.require(worst <= 1e-10, fmt("flow deviation %.3e", worst));

  double block_err = 0.0;
  for (const auto& row : reference_modes()) {
    const double s = std::sin(kOmega * 0.1), c = std::cos(kOmega * 0.1);
    const Eigen::Matrix2cd G = mode_block(row.lambda, kOmega, 0.1);
    // p_i(x) = x² + (sin(ωτ)λ/ω − 2cos(ωτ)) x + (1 − sin(ωτ)λ/ω)
    block_err = std::max(block_err, std::abs(-G.trace() - (s * row.lambda / kOmega - 2.0 * c)));
    block_err = std::max(block_err, std::abs(G.determinant() - (1.0 - s * row.lambda / kOmega)));
  }
  out.require(block_err <= 1e-12, fmt("mode block deviation %.3e", block_err));
  if (out.pass) out.detail = fmt("flow %.1e, mode block %.1e", worst, block_err);
  return out;
}

Outcome quantizer_axioms() {
  Outcome out;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> ud(0.01, 2.0), ur(1.01, 40.0), um(1e-3, 1e3), uy(-3.0, 3.0);
  long violations = 0;
  for (int config = 0; config < 1000; ++config) {
    const double delta = ud(rng);
    const UniformQuantizer q(delta, delta * ur(rng));
    for (int i = 0; i < 1000; ++i) {
      const double mu = um(rng);
      const double y = uy(rng) * q.range() * mu;
      const double v = q.quantize(mu, y);
      if (std::abs(y) <= mu * q.range()) {
        violations += std::abs(v - y) > mu * delta * (1.0 + 1e-12);
      } else {
        violations += !(std::abs(v) > mu * (q.range() - delta));
      }
    }
  }
  out.require(violations == 0, fmt("%.0f violations", static_cast<double>(violations)));
  if (out.pass) out.detail = "1e6 evaluations, 0 violations";
  return out;
}

Outcome projection_identity() {
  Outcome out;
  const Model& m = reference_model();
  const auto trace = simulate(m, {ZoomMode::Fixed, 1.0, 10000, 0},
                              seeded_initial_state(m, 1.0, 0.9, 0.5, 1));
  const Vec& xi = m.spectrum.xi;
  const auto n = static_cast<Eigen::Index>(m.sys.nodes());
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.samples(); ++k) {
    const auto& row = trace.sample(k);
    worst = std::max(worst, std::abs(xi.dot(row.X.head(n)) - trace.orbit.gamma(row.t)) +
                                std::abs(xi.dot(row.X.tail(n)) - trace.orbit.nu(row.t)));
  }
  out.require(trace.samples() == 10001, "wrong sample count");
  out.require(worst < 1e-6, fmt("max deviation %.3e", worst));
  if (out.pass) out.detail = fmt("max deviation %.2e over 1e4 samples", worst);
  return out;
}

Outcome fixed_zoom_sets() {
  Outcome out;
  const Model& m = reference_model();
  const auto& c = *m.certificate;
  const double a = c.norm_eps;
  const double c_in = m.frame->c_in;
  std::size_t latest_entry = 0;
  double smallest_tail = INFINITY;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Vec X0 = seeded_initial_state(m, 1.0, seed % 2 ? 0.99 : 0.5, 0.5, seed);
    const auto trace = simulate(m, {ZoomMode::Fixed, 1.0, 3000, 0}, X0);
    const auto& h = trace.xhat_eps;
    out.require(h[0] <= c.S1_radius * (1.0 + 1e-12), "initial state outside S1(1)");
    out.require(!trace.saturated, "quantizer saturated");
    std::size_t entry = h.size();
    for (std::size_t k = 0; k < h.size(); ++k) {
      if (h[k] <= c.S2_radius) {
        entry = k;
        break;
      }
      if (k > 0) out.require(h[k] < h[k - 1], fmt("no strict decrease at k = %.0f (seed %.0f)", double(k), double(seed)));
    }
    out.require(entry <= c.dwell_steps, fmt("S2 entered at k = %.0f > N = %.0f", double(entry), double(c.dwell_steps)));
    latest_entry = std::max(latest_entry, entry);
    double ak = 1.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      const double bound = ak * h[0] + c_in * c.delta * (1.0 - ak) / (1.0 - a);
      out.require(h[k] <= bound * (1.0 + 1e-9), fmt("geometric bound violated at k = %.0f", double(k)));
      ak *= a;
    }
    double tail = INFINITY;
    for (std::size_t k = h.size() - 500; k < h.size(); ++k) tail = std::min(tail, trace.sample(k).err_inf);
    smallest_tail = std::min(smallest_tail, tail);
  }
  out.require(smallest_tail > 1e-6, fmt("long-run error %.3e", smallest_tail));
  if (out.pass) {
    out.detail = fmt("20 seeds, S2 entry by k = %.0f (N = %.0f)", double(latest_entry), double(c.dwell_steps)) +
                 fmt(", long-run error >= %.2e", smallest_tail);
  }
  return out;
}

Outcome adjustable_convergence() {
  Outcome out;
  const Model& m = reference_model();
  const auto& c = *m.certificate;
  const std::size_t N = c.dwell_steps;
  std::size_t worst_dwells = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Vec X0 = seeded_initial_state(m, 1.0, 0.9, 0.0, seed);
    const std::size_t steps = 61 * N + 100;
    const auto trace = simulate(m, {ZoomMode::Adjustable, 1.0, steps, 0}, X0);
    if (!trace.k0) {
      out.require(false, "zoom-out never ended");
      continue;
    }
    const std::size_t k0 = *trace.k0;
    for (std::size_t k = k0 + N; k < trace.samples(); k += N) {
      const double prev = trace.sample(k - N).mu;
      const double now = trace.sample(k).mu;
      out.require(std::abs(now / prev - c.theta) <= 1e-14 * c.theta, fmt("mu ratio %.17g", now / prev));
      out.require(trace.xhat_eps[k] <= c.S2_radius * prev * (1.0 + 1e-9),
                  fmt("dwell boundary k = %.0f outside S2(mu)", double(k)));
    }
    std::size_t hit = trace.samples();
    for (std::size_t k = 0; k < trace.samples(); ++k) {
      if (trace.sample(k).err_inf < 1e-6) {
        hit = k;
        break;
      }
    }
    out.require(hit < trace.samples(), fmt("error never below 1e-6 (final %.3e)", trace.rows.back().err_inf));
    if (hit < trace.samples()) {
      const std::size_t dwells = (hit - k0 + N - 1) / N;
      out.require(dwells <= 60, fmt("needed %.0f dwells", double(dwells)));
      worst_dwells = std::max(worst_dwells, dwells);
    }
  }
  if (out.pass) out.detail = fmt("10 seeds, error < 1e-6 within %.0f dwells, theta = %.6f", double(worst_dwells), c.theta);
  return out;
}

Outcome hurwitz_equivalence() {
  Outcome out;
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  long disagree = 0, checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const ComplexQuadratic q{u(rng), u(rng), u(rng), u(rng)};
    const auto [s1, s2] = oracle::naive_roots({q.a, q.b}, {q.c, q.d});
    const double margin = std::max(s1.real(), s2.real());
    if (std::abs(margin) < kBand) continue;
    ++checked;
    disagree += complex_quadratic_is_hurwitz(q) != (margin < 0.0);
  }
  std::uniform_real_distribution<double> re(0.05, 8.0), im(-5.0, 5.0), om(0.2, 5.0), tt(0.01, 5.0);
  long disagree_disk = 0, checked_disk = 0;
  for (int i = 0; i < 10000; ++i) {
    const Complex lambda(re(rng), im(rng));
    const double omega = om(rng), tau = tt(rng);
    if (is_degenerate_sampling(omega, tau)) continue;
    const double s = std::sin(omega * tau);
    const auto [x1, x2] = oracle::naive_roots(s * lambda / omega - 2.0 * std::cos(omega * tau),
                                              1.0 - s * lambda / omega);
    const double r = std::max(std::abs(x1), std::abs(x2));
    if (std::abs(r - 1.0) < kBand) continue;
    ++checked_disk;
    disagree_disk += bilinear_stability_check(lambda, omega, tau) != (r < 1.0);
  }
  out.require(disagree == 0, fmt("%.0f Hurwitz disagreements", double(disagree)));
  out.require(disagree_disk == 0, fmt("%.0f unit-disk disagreements", double(disagree_disk)));
  if (out.pass) out.detail = fmt("%.0f quadratics, %.0f mode triples agree", double(checked), double(checked_disk));
  return out;
}

Outcome undirected_windows() {
  Outcome out;
  const std::vector<std::pair<const char*, DirectedGraph>> graphs{
      {"P3", oracle::undirected_path(3)},
      {"C4", oracle::undirected_cycle(4)},
      {"K4", oracle::undirected_complete(4)}};
  long compared = 0;
  for (double omega : {kOmega, 0.7, 2.3}) {
    for (const auto& [name, g] : graphs) {
      const auto spec = spectral_decomposition(build_laplacian(g));
      const auto report = feasible_windows(spec, omega);
      double lambda_max = 0.0;
      for (const auto& l : spec.lambdas) {
        out.require(l.imag() == 0.0, std::string(name) + " has a complex eigenvalue");
        lambda_max = std::max(lambda_max, l.real());
      }
      const double span = 8.0 * pi / omega;
      for (int j = 1; j <= 1000; ++j) {
        const double tau = span * (j - 0.5) / 1000.0;
        const double cot = 1.0 / std::tan(omega * tau / 2.0);
        if (std::abs(cot - lambda_max / omega) < kBand) continue;
        bool all = true;
        for (const auto& l : spec.lambdas) all = all && cot > l.real() / omega;
        ++compared;
        out.require(report.is_feasible(tau) == all,
                    std::string(name) + fmt(" disagrees at tau = %.9f (omega %.3f)", tau, omega));
      }
      // Window edges coincide with the closed-form endpoints.
      const double edge = 2.0 * arccot(lambda_max / omega) / omega;
      out.require(std::abs(report.windows[0].hi - edge) <= kBand, std::string(name) + " window edge");
    }
  }
  if (out.pass) out.detail = fmt("%.0f tau values over P3, C4, K4", double(compared));
  return out;
}

Outcome energy_invariant() {
  Outcome out;
  const Flow flow = assemble_flow(kOmega, 0.1, Mat::Zero(10, 10));
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> z;
  Vec X(20);
  for (auto& x : X) x = z(rng);
  auto energy = [&](const Vec& s, int i) { return s(i) * s(i) + s(10 + i) * s(10 + i) / (kOmega * kOmega); };
  const Vec X0 = X;
  for (int k = 0; k < 10000; ++k) X = step_exact(flow, X, Vec());
  double drift = 0.0;
  for (int i = 0; i < 10; ++i) drift = std::max(drift, std::abs(energy(X, i) / energy(X0, i) - 1.0));
  out.require(drift < 1e-10, fmt("relative drift %.3e", drift));
  if (out.pass) out.detail = fmt("relative drift %.2e after 1e4 steps", drift);
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"reference phi and arccot values", reference_table},
      {"spectral radius of the reduced map", spectral_radius},
      {"closed-form flow against series oracle", flow_oracle},
      {"quantizer axioms", quantizer_axioms},
      {"xi-projection identity", projection_identity},
      {"fixed zoom set behaviour", fixed_zoom_sets},
      {"adjustable zoom convergence", adjustable_convergence},
      {"Hurwitz and unit-disk equivalence", hurwitz_equivalence},
      {"undirected feasibility windows", undirected_windows},
      {"energy invariant", energy_invariant},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome result;
    try {
      result = criteria[i].second();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !result.pass;
    std::printf("%s %zu %s (%s; %.2fs)\n", result.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                result.detail.c_str(), secs);
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
