#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qsync/graph.hpp"
#include "qsync/sweep.hpp"

namespace {

using namespace qsync;

TEST(Sweep, GridOrderAndDeterminism) {
  const SweepGrid grid{{0.1, 0.5, 2.0}, {0.5, 1.0}, {0.5, 0.25}};
  SweepSettings s;
  s.horizon = 5.0;
  s.threads = 1;
  const auto serial = run_sweep(standin_graph(), s, grid);
  s.threads = 3;
  const auto parallel = run_sweep(standin_graph(), s, grid);
  ASSERT_EQ(serial.size(), 12u);
  ASSERT_EQ(parallel.size(), 12u);
  std::size_t i = 0;
  for (double tau : grid.taus) {
    for (double delta : grid.deltas) {
      for (double mu : grid.mus) {
        EXPECT_EQ(serial[i].tau, tau);
        EXPECT_EQ(serial[i].delta, delta);
        EXPECT_EQ(serial[i].mu, mu);
        const double a = serial[i].long_run_error, b = parallel[i].long_run_error;
        EXPECT_TRUE(a == b || (std::isnan(a) && std::isnan(b)));
        EXPECT_EQ(serial[i].note, parallel[i].note);
        ++i;
      }
    }
  }
}

TEST(Sweep, ClassifiesPoints) {
  const SweepGrid grid{{0.1, 2.0}, {1.0}, {0.5}};
  SweepSettings s;
  s.horizon = 10.0;
  const auto pts = run_sweep(standin_graph(), s, grid);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_TRUE(pts[0].feasible);
  EXPECT_TRUE(pts[0].certified);
  EXPECT_TRUE(pts[0].simulated);
  EXPECT_NEAR(pts[0].theta, 0.6251406, 1e-6);
  EXPECT_LT(pts[0].rho, 1.0);
  EXPECT_TRUE(std::isfinite(pts[0].long_run_error));
  EXPECT_FALSE(pts[1].feasible);
  EXPECT_FALSE(pts[1].certified);
  EXPECT_FALSE(pts[1].simulated);
  EXPECT_FALSE(pts[1].note.empty());

  s.allow_infeasible = true;
  const auto forced = run_sweep(standin_graph(), s, grid);
  EXPECT_TRUE(forced[1].simulated);
  EXPECT_GT(forced[1].rho, 1.0);
}

TEST(Sweep, CsvHasOneRowPerPoint) {
  const SweepGrid grid{{0.1}, {1.0, 2.0}, {0.5}};
  SweepSettings s;
  s.horizon = 2.0;
  const auto pts = run_sweep(standin_graph(), s, grid);
  std::ostringstream out;
  write_sweep_csv(out, pts);
  const std::string text = out.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
  EXPECT_EQ(text.rfind("tau,", 0), 0u);
}

}  // namespace
