#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "belief_hjb/riccati.hpp"
#include "oracles.hpp"

using namespace belief_hjb;
using belief_hjb::testing::rk4;
using belief_hjb::testing::State;

namespace {

ModelParams defaults() { return ModelParams{}; }

double zeta_closed(double theta, double horizon, double t) {
  const double s = 1.0 / (2.0 * theta);
  return s + (1.0 - s) * std::exp(-2.0 * theta * (horizon - t));
}

}  // namespace

TEST(NoObsRiccati, ZetaAndXiClosedForms) {
  const auto sol = solve_no_obs_riccati(defaults(), 400);
  EXPECT_NEAR(sol.zeta.front(), 2.0 - std::exp(-0.5), 1e-10);
  EXPECT_NEAR(sol.xi.front(), 0.5 * std::exp(-0.5), 1e-10);
  EXPECT_DOUBLE_EQ(sol.zeta.back(), 1.0);
  EXPECT_DOUBLE_EQ(sol.eta.back(), 0.0);
  EXPECT_DOUBLE_EQ(sol.xi.back(), 0.0);
  for (double v : sol.zeta) EXPECT_GT(v, 0.0);
}

TEST(NoObsRiccati, EtaVanishesForReducedCoefficientAtUnitCost) {
  const auto sol = solve_no_obs_riccati(defaults(), 400, EtaCoefficient::kCMinusOneOverCSquared);
  for (double v : sol.eta) EXPECT_LE(std::abs(v), 1e-10);
}

TEST(NoObsRiccati, HjbConsistentEtaMatchesReference) {
  // Frozen from an adaptive scipy integration (rtol 1e-12).
  const auto sol = solve_no_obs_riccati(defaults(), 400);
  EXPECT_NEAR(sol.eta.front(), -0.58716457, 1e-7);

  // Independent high-resolution RK4 on the mean coefficient P = zeta + eta:
  //   P' = 2 theta P + P^2 / C - 1, P(T) = 1.
  const auto p0 = rk4([](double, const State& y) {
                        return State{0.5 * y[0] + y[0] * y[0] - 1.0};
                      },
                      {1.0}, 1.0, 0.0, 100000);
  EXPECT_NEAR(sol.zeta.front() + sol.eta.front(), p0[0], 1e-9);
}

TEST(NoObsRiccati, FourthOrderConvergence) {
  const double exact = zeta_closed(0.25, 1.0, 0.0);
  const double e1 = std::abs(solve_no_obs_riccati(defaults(), 4).zeta.front() - exact);
  const double e2 = std::abs(solve_no_obs_riccati(defaults(), 8).zeta.front() - exact);
  const double ratio = e1 / e2;
  EXPECT_GT(ratio, 14.0);
  EXPECT_LT(ratio, 18.0);
}

TEST(NoObsRiccati, RejectsTooFewSteps) {
  EXPECT_THROW(solve_no_obs_riccati(defaults(), 1), std::invalid_argument);
}

TEST(NoObsValue, Examples) {
  const auto printed = solve_no_obs_riccati(defaults(), 1000, EtaCoefficient::kCMinusOneOverCSquared);
  const auto consistent = solve_no_obs_riccati(defaults(), 1000);
  EXPECT_DOUBLE_EQ(no_obs_value(consistent, 1.0, {0.4, 0.3}), 0.4 * 0.4 + 0.3);
  EXPECT_NEAR(no_obs_value(printed, 0.0, {1.0, 1.0}), 3.0902040104310498, 1e-9);
  EXPECT_NEAR(no_obs_value(consistent, 0.0, {1.0, 1.0}), 2.5030394362422017, 1e-7);
  EXPECT_NEAR(no_obs_value(consistent, 0.0, {0.0, 0.0}), 0.3032653298563167, 1e-9);
  EXPECT_THROW(no_obs_value(consistent, 1.5, {0.0, 0.0}), std::out_of_range);
  EXPECT_THROW(no_obs_value(consistent, -0.1, {0.0, 0.0}), std::out_of_range);
}

TEST(NoObsValue, InterpolatesBetweenSamples) {
  const auto sol = solve_no_obs_riccati(defaults(), 2000);
  const double t = 0.123456;
  // xi(t) = b^2 int_t^T zeta(s) ds with zeta = 2 - e^{-(T - s)/2}.
  const double tau = 1.0 - t;
  const double xi = 0.25 * (2.0 * tau - 2.0 * (1.0 - std::exp(-0.5 * tau)));
  const double expected = zeta_closed(0.25, 1.0, t) * 2.0 + xi;
  EXPECT_NEAR(no_obs_value(sol, t, {0.0, 2.0}), expected, 1e-7);
}

TEST(PerfectObsRiccati, TerminalConditions) {
  const auto sol = solve_perfect_obs_riccati(defaults(), 100);
  EXPECT_DOUBLE_EQ(sol.f.back(), 0.0);
  EXPECT_DOUBLE_EQ(sol.g.back(), 0.0);
  EXPECT_DOUBLE_EQ(perfect_obs_value(sol, 1.0, 3.0), 0.0);
}

TEST(PerfectObsRiccati, TanhClosedForm) {
  ModelParams p;
  p.theta = 1e-300;  // the model requires theta > 0; this is theta = 0 to machine precision
  p.obs_times.clear();
  const auto sol = solve_perfect_obs_riccati(p, 2000);
  EXPECT_NEAR(sol.f.front(), std::tanh(1.0), 1e-12);
  // tanh(1) + 0.25 ln cosh(1)
  EXPECT_NEAR(perfect_obs_value(sol, 0.0, 1.0), 0.8700393635765217, 1e-12);
  EXPECT_NEAR(perfect_obs_value(sol, 0.0, 0.0), sol.g.front(), 0.0);
}

TEST(PerfectObsRiccati, MatchesHighResolutionOracle) {
  const auto sol = solve_perfect_obs_riccati(defaults(), 1000);
  const auto ref = rk4([](double, const State& y) {
                         return State{0.5 * y[0] + y[0] * y[0] - 1.0, -0.25 * y[0]};
                       },
                       {0.0, 0.0}, 1.0, 0.0, 100000);
  EXPECT_NEAR(sol.f.front(), ref[0], 1e-6);
  EXPECT_NEAR(sol.g.front(), ref[1], 1e-6);
  EXPECT_NEAR(sol.f.front(), 0.63236115, 1e-7);  // scipy reference
}

TEST(PerfectObsRiccati, MonotoneAndBoundedByStationaryRoot) {
  const auto p = defaults();
  const auto sol = solve_perfect_obs_riccati(p, 500);
  const double root = p.c_control * (-p.theta + std::sqrt(p.theta * p.theta + 1.0 / p.c_control));
  for (std::size_t k = 0; k < sol.f.size(); ++k) {
    EXPECT_GE(sol.f[k], 0.0);
    EXPECT_LE(sol.f[k], root);
    if (k > 0) EXPECT_LE(sol.f[k], sol.f[k - 1]);
  }
}
