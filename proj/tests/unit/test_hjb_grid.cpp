#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "belief_hjb/hjb_grid.hpp"
#include "belief_hjb/riccati.hpp"
#include "belief_hjb/solver.hpp"

using namespace belief_hjb;

namespace {

const ModelParams kParams{};

Grid default_grid() { return Grid{}; }

double max_interior_relative_error(const ValueField& layer, const RiccatiSolution& ref) {
  const Grid& g = layer.grid();
  double worst = 0.0;
  for (int i = 1; i + 1 < g.n_m; ++i) {
    for (int j = 1; j + 1 < g.n_z; ++j) {
      const double exact = no_obs_value(ref, layer.time(), {g.m(i), g.z(j)});
      worst = std::max(worst, std::abs(layer(i, j) - exact) / std::abs(exact));
    }
  }
  return worst;
}

}  // namespace

TEST(OneSidedDifferences, Examples) {
  const Grid g = default_grid();
  const auto constant = ValueField::from_function(g, 1.0, [](double, double) { return 3.0; });
  const auto d0 = one_sided_differences(constant, 4, 7);
  EXPECT_EQ(d0.dm_minus, 0.0);
  EXPECT_EQ(d0.dm_plus, 0.0);
  EXPECT_EQ(d0.dz_minus, 0.0);
  EXPECT_EQ(d0.dz_plus, 0.0);

  const auto terminal = ValueField::terminal(g, 1.0);
  const auto d = one_sided_differences(terminal, 10, 5);  // m = 0
  EXPECT_NEAR(d.dm_minus, -0.1, 1e-12);
  EXPECT_NEAR(d.dm_plus, 0.1, 1e-12);
  for (int i = 0; i < g.n_m; ++i) {
    for (int j = 0; j < g.n_z; ++j) {
      const auto e = one_sided_differences(terminal, i, j);
      EXPECT_NEAR(e.dz_minus, 1.0, 1e-12);
      EXPECT_NEAR(e.dz_plus, 1.0, 1e-12);
    }
  }
}

TEST(OneSidedDifferences, EdgesReuseTheAvailableQuotient) {
  const Grid g = default_grid();
  const auto f = ValueField::terminal(g, 1.0);
  const auto lo = one_sided_differences(f, 0, 0);
  EXPECT_DOUBLE_EQ(lo.dm_minus, lo.dm_plus);
  const auto hi = one_sided_differences(f, g.n_m - 1, g.n_z - 1);
  EXPECT_DOUBLE_EQ(hi.dm_plus, hi.dm_minus);
  EXPECT_DOUBLE_EQ(hi.dz_plus, hi.dz_minus);
}

TEST(NumericalHamiltonian, Examples) {
  EXPECT_DOUBLE_EQ(numerical_hamiltonian_m(0.0, 0.5, -0.1, 0.1, kParams), 0.0);
  EXPECT_DOUBLE_EQ(numerical_hamiltonian_m(0.5, 0.5, 0.0, 0.0, kParams), -0.25);
  const double zs = kParams.stationary_variance();
  EXPECT_DOUBLE_EQ(numerical_hamiltonian_z(0.0, zs, -3.0, 11.0, kParams), -zs);
  EXPECT_DOUBLE_EQ(numerical_hamiltonian_z(0.0, 1.0, 1.0, 123.0, kParams), -0.75);
}

TEST(NumericalHamiltonian, Consistency) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 2.0);
  std::uniform_real_distribution<double> uz(0.0, 2.0);
  for (int k = 0; k < 2000; ++k) {
    const double m = n(rng), z = uz(rng), p = n(rng), q = n(rng);
    EXPECT_NEAR(numerical_hamiltonian_m(m, z, p, p, kParams), hamiltonian_m(m, z, p, kParams),
                1e-12);
    EXPECT_EQ(numerical_hamiltonian_z(m, z, q, q, kParams), hamiltonian_z(m, z, q, kParams));
  }
}

TEST(NumericalHamiltonian, NonIncreasingInDPlusNonDecreasingInDMinus) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int k = 0; k < 2000; ++k) {
    const double m = n(rng), a = n(rng), b = n(rng), h = std::abs(n(rng)) * 0.1;
    EXPECT_GE(numerical_hamiltonian_m(m, 0.3, a + h, b, kParams) + 1e-12,
              numerical_hamiltonian_m(m, 0.3, a, b, kParams));
    EXPECT_LE(numerical_hamiltonian_m(m, 0.3, a, b + h, kParams),
              numerical_hamiltonian_m(m, 0.3, a, b, kParams) + 1e-12);
  }
}

TEST(StepBackward, Examples) {
  const Grid g = default_grid();
  const auto terminal = ValueField::terminal(g, 1.0);

  SolverConfig cfg;
  const auto next = step_backward(terminal, kParams, cfg);
  EXPECT_NEAR(next(10, 5), 0.50625, 1e-15);
  EXPECT_NEAR(next.time(), 1.0 - 0.0125, 1e-15);

  SolverConfig frozen;
  frozen.dt = 1e-300;
  frozen.check_monotonicity_each_step = false;
  const auto same = step_backward(terminal, kParams, frozen);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(same.values()[k], terminal.values()[k], 1e-290);
  }
}

TEST(StepBackward, ThrowsOnRealisedCflViolation) {
  const Grid g = default_grid();
  const auto steep = ValueField::from_function(g, 1.0, [](double m, double z) {
    return 10.0 * m * m + z;
  });
  SolverConfig cfg;
  try {
    step_backward(steep, kParams, cfg);
    FAIL() << "expected CflViolation";
  } catch (const CflViolation& e) {
    EXPECT_FALSE(e.report().holds);
    EXPECT_LT(e.report().margin, 0.0);
    EXPECT_GE(e.report().worst_i, 0);
    EXPECT_DOUBLE_EQ(e.time(), 1.0);
  }
  cfg.check_monotonicity_each_step = false;
  EXPECT_NO_THROW(step_backward(steep, kParams, cfg));
}

TEST(StepBackward, RejectsNonFiniteOutput) {
  const Grid g = default_grid();
  auto f = ValueField::terminal(g, 1.0);
  f(3, 3) = std::numeric_limits<double>::infinity();
  SolverConfig cfg;
  cfg.check_monotonicity_each_step = false;
  EXPECT_THROW(step_backward(f, kParams, cfg), NumericalError);
}

TEST(CheckMonotonicity, DefaultConfiguration) {
  const Grid g = default_grid();
  const auto ok = check_monotonicity(g, kParams, 0.0125, 7.0);
  EXPECT_TRUE(ok.holds);
  // 1 - 2 (0.125)(0.25 + 3.5) - 0.125 (0.25)
  EXPECT_NEAR(ok.margin, 0.03125, 1e-12);
  EXPECT_NEAR(std::abs(ok.worst_m), 1.0, 1e-12);

  const auto bad = check_monotonicity(g, kParams, 0.0125, 8.0);
  EXPECT_FALSE(bad.holds);
  EXPECT_NEAR(bad.margin, 1.0 - 0.25 * 4.25 - 0.03125, 1e-12);

  // Largest admissible bound: 1 - 0.25 (0.25 + L/2) - 0.03125 = 0  =>  L = 7.25.
  EXPECT_TRUE(check_monotonicity(g, kParams, 0.0125, 7.25 - 1e-9).holds);
  EXPECT_FALSE(check_monotonicity(g, kParams, 0.0125, 7.25 + 1e-9).holds);
  EXPECT_THROW(check_monotonicity(g, kParams, 0.0125, 0.0), ValidationError);
}

TEST(CheckMonotonicity, PerturbationProbe) {
  const Grid g = default_grid();
  SolverConfig cfg;
  cfg.check_monotonicity_each_step = false;
  ASSERT_TRUE(check_monotonicity(g, kParams, cfg.dt, 7.0).holds);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  std::uniform_int_distribution<int> pick_i(0, g.n_m - 1), pick_j(0, g.n_z - 1);
  for (int trial = 0; trial < 200; ++trial) {
    auto base = ValueField::from_function(g, 1.0, [&](double m, double z) {
      return m * m + z + u(rng);
    });
    ASSERT_TRUE(realized_monotonicity(base, kParams, cfg.dt).holds);
    const auto ref = step_backward(base, kParams, cfg);

    const int pi = pick_i(rng), pj = pick_j(rng);
    auto bumped = base;
    bumped(pi, pj) += 1e-4;
    ASSERT_TRUE(realized_monotonicity(bumped, kParams, cfg.dt).holds);
    const auto out = step_backward(bumped, kParams, cfg);
    for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_GE(out.values()[k], ref.values()[k] - 1e-14);
    }
  }
}

TEST(StepsBetween, WholeStepsOnly) {
  EXPECT_EQ(steps_between(0.0, 0.25, 0.0125), 20);
  EXPECT_EQ(steps_between(0.75, 1.0, 0.0125), 20);
  EXPECT_EQ(steps_between(0.5, 0.5, 0.0125), 0);
  EXPECT_THROW(steps_between(0.0, 0.25, 0.03), ValidationError);
  EXPECT_THROW(steps_between(0.3, 0.2, 0.01), ValidationError);
}

TEST(SolveBetweenObservations, ZeroLengthAndOrdering) {
  const Grid g = default_grid();
  const auto terminal = ValueField::terminal(g, 1.0);
  const auto single = solve_between_observations(terminal, 1.0, 1.0, kParams, SolverConfig{});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].time(), 1.0);

  const auto layers = solve_between_observations(terminal, 0.75, 1.0, kParams, SolverConfig{});
  ASSERT_EQ(layers.size(), 21u);
  EXPECT_EQ(layers.front().time(), 1.0);
  EXPECT_EQ(layers.back().time(), 0.75);
  EXPECT_THROW(solve_between_observations(terminal, 0.0, 0.9, kParams, SolverConfig{}),
               ValidationError);
  EXPECT_THROW(solve_between_observations(terminal, 0.0, 1.0 - 0.001, kParams, SolverConfig{}),
               ValidationError);
}

TEST(NoObservationSolve, PositiveEvenAndMonotone) {
  const Grid g = default_grid();
  const auto result = solve_value_function(g, kParams, Regime::kNoObservations, {});
  EXPECT_EQ(result.steps, 80);
  EXPECT_EQ(result.observation_updates, 0);
  EXPECT_TRUE(result.worst_realized.holds);
  for (const auto& layer : result.history.layers) {
    for (int i = 0; i < g.n_m; ++i) {
      for (int j = 0; j < g.n_z; ++j) {
        EXPECT_GE(layer(i, j), 0.0);
        EXPECT_NEAR(layer(i, j), layer(g.n_m - 1 - i, j), 1e-12 * (1.0 + layer(i, j)));
      }
    }
  }
}

TEST(NoObservationSolve, ConvergesToRiccatiReference) {
  const auto ref = solve_no_obs_riccati(kParams, 4000);

  const auto coarse = solve_value_function(default_grid(), kParams, Regime::kNoObservations, {});
  const double e1 = max_interior_relative_error(coarse.initial, ref);
  EXPECT_LE(e1, 0.05);

  Grid fine = default_grid();
  fine.n_m = 41;
  fine.n_z = 21;
  SolveOptions opts;
  opts.solver.dt = 0.00625;
  opts.keep_layers = false;
  const auto refined = solve_value_function(fine, kParams, Regime::kNoObservations, opts);
  const double e2 = max_interior_relative_error(refined.initial, ref);
  EXPECT_LT(e2, e1);
  EXPECT_LT(e2, 0.6 * e1);

  // The alternative eta form is not what the grid converges to.
  const auto alt = solve_no_obs_riccati(kParams, 4000, EtaCoefficient::kCMinusOneOverCSquared);
  EXPECT_GT(max_interior_relative_error(refined.initial, alt), 0.1);
}
