#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "belief_hjb/error.hpp"
#include "belief_hjb/obs_update.hpp"
#include "belief_hjb/quadrature.hpp"
#include "oracles.hpp"

using namespace belief_hjb;

namespace {

const ModelParams kParams{};

double quadratic(double m, double z) { return m * m + z; }

// Convolution form of the jump: int U(m - tau, z') phi_hat(tau) d tau with
// phi_hat(tau) = sqrt(z + eps^2) / z * N(0,1)-density(tau sqrt(z + eps^2) / z),
// by composite Simpson over +-12 kernel widths.
double convolution_jump(const BeliefFunction& u, double m, double z, double eps) {
  const double e2 = eps * eps;
  const double width = z / std::sqrt(z + e2);
  const double z_post = z * e2 / (z + e2);
  auto kernel = [&](double tau) {
    const double r = tau / width;
    return std::exp(-0.5 * r * r) / (width * std::sqrt(2.0 * std::numbers::pi));
  };
  const int n = 4000;
  const double a = -12.0 * width;
  const double h = 24.0 * width / n;
  double total = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double tau = a + k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    total += w * u(m - tau, z_post) * kernel(tau);
  }
  return total * h / 3.0;
}

}  // namespace

TEST(QuadratureRule, MatchesGolubWelsch) {
  for (int k : {1, 2, 5, 10, 20, 40}) {
    const auto rule = QuadratureRule::gauss_hermite(k);
    const auto [nodes, weights] = belief_hjb::testing::golub_welsch_normal(k);
    ASSERT_EQ(rule.size(), static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      EXPECT_NEAR(rule.nodes[i], nodes[i], 1e-10 * (1.0 + std::abs(nodes[i])));
      EXPECT_NEAR(rule.weights[i], weights[i], 1e-12);
    }
  }
}

TEST(QuadratureRule, WeightsAndMoments) {
  for (int k : {2, 7, 20}) {
    const auto rule = QuadratureRule::gauss_hermite(k);
    double sum = 0.0;
    for (double w : rule.weights) {
      EXPECT_GT(w, 0.0);
      sum += w;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (int p = 0; p <= 2 * k - 1; ++p) {
      double moment = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        moment += rule.weights[i] * std::pow(rule.nodes[i], p);
        scale += rule.weights[i] * std::pow(std::abs(rule.nodes[i]), p);
      }
      const double exact = belief_hjb::testing::normal_moment(p);
      EXPECT_NEAR(moment, exact, 1e-10 * std::max(1.0, scale)) << "k=" << k << " p=" << p;
    }
  }
  EXPECT_THROW(QuadratureRule::gauss_hermite(0), std::invalid_argument);
}

TEST(InterpolateValue, Examples) {
  const Grid g;
  const auto f = ValueField::terminal(g, 1.0);
  EXPECT_DOUBLE_EQ(interpolate_value(f, g.m(3), g.z(4)), f(3, 4));

  const auto linear_z = ValueField::from_function(g, 1.0, [](double, double z) { return z; });
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> um(-1.0, 1.0), uz(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double z = uz(rng);
    EXPECT_NEAR(interpolate_value(linear_z, um(rng), z), z, 1e-14);
  }

  EXPECT_NEAR(interpolate_value(f, 0.05, g.z(3)), 0.005 + g.z(3), 1e-14);
  EXPECT_THROW(interpolate_value(f, 0.0, 1.2), std::out_of_range);
  EXPECT_THROW(interpolate_value(f, 0.0, -0.1), std::out_of_range);
}

TEST(InterpolateValue, ExtrapolationModes) {
  const Grid g;
  const auto f = ValueField::terminal(g, 1.0);
  EXPECT_NEAR(interpolate_value(f, 1.7, 0.3), 1.7 * 1.7 + 0.3, 1e-12);
  EXPECT_NEAR(interpolate_value(f, -2.5, 0.3), 6.25 + 0.3, 1e-12);
  EXPECT_NEAR(interpolate_value(f, 1.7, 0.3, Extrapolation::kClamp), 1.3, 1e-12);
  EXPECT_NEAR(interpolate_value(f, -2.5, 0.3, Extrapolation::kClamp), 1.3, 1e-12);
}

TEST(ExpectedPosteriorValue, Examples) {
  const auto rule = QuadratureRule::gauss_hermite(20);
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> uz(0.0, 3.0);
  for (int k = 0; k < 100; ++k) {
    const GaussianBelief b{n(rng), uz(rng)};
    const double e2 = 0.81;
    EXPECT_NEAR(expected_posterior_value(quadratic, b, 0.9, rule), b.mean * b.mean + b.variance,
                1e-12);
    EXPECT_NEAR(expected_posterior_value([](double m, double) { return m; }, b, 0.9, rule), b.mean,
                1e-12);
    EXPECT_NEAR(expected_posterior_value([](double, double z) { return z; }, b, 0.9, rule),
                b.variance * e2 / (b.variance + e2), 1e-14);
  }
}

TEST(ExpectedPosteriorValue, RiccatiShapedFieldAgreesWithMonteCarlo) {
  const auto rule = QuadratureRule::gauss_hermite(20);
  // (m^2 + z) + m^2 at (0, 1): 1 + 1/1.81.
  auto phi = [](double m, double z) { return (m * m + z) + m * m; };
  const double gh = expected_posterior_value(phi, {0.0, 1.0}, 0.9, rule);
  EXPECT_NEAR(gh, 1.0 + 1.0 / 1.81, 1e-12);
  EXPECT_NEAR(gh, 1.5524861878453038, 1e-12);

  const double s = 1.0 / std::sqrt(1.81);
  const double z_post = 0.81 / 1.81;
  const auto [mc, se] = belief_hjb::testing::monte_carlo_normal(
      [&](double w) { return phi(s * w, z_post); }, 1'000'000, 33);
  EXPECT_NEAR(gh, mc, 4.0 * se);
}

TEST(ApplyObservationUpdate, AnalyticQuadraticInvariance) {
  const Grid g;
  for (int k : {2, 3, 20}) {
    const auto rule = QuadratureRule::gauss_hermite(k);
    const auto out = apply_observation_update(g, 0.5, quadratic, kParams, rule);
    for (int i = 0; i < g.n_m; ++i) {
      for (int j = 0; j < g.n_z; ++j) EXPECT_NEAR(out(i, j), quadratic(g.m(i), g.z(j)), 1e-10);
    }
  }
}

TEST(ApplyObservationUpdate, GridQuadraticInvarianceConvergesAtSecondOrder) {
  const auto rule = QuadratureRule::gauss_hermite(20);
  auto max_error = [&](int n_m) {
    Grid g;
    g.n_m = n_m;
    const auto out = apply_observation_update(ValueField::terminal(g, 0.5), kParams, rule);
    double worst = 0.0;
    for (int i = 0; i < g.n_m; ++i) {
      for (int j = 0; j < g.n_z; ++j) {
        worst = std::max(worst, std::abs(out(i, j) - quadratic(g.m(i), g.z(j))));
      }
    }
    return worst;
  };
  const double coarse = max_error(21);
  const double fine = max_error(41);
  EXPECT_LE(coarse, 1e-2);
  EXPECT_GE(coarse / fine, 3.9);
}

TEST(ApplyObservationUpdate, ZeroVarianceRowAndTimeUnchanged) {
  const Grid g;
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto f = ValueField::from_function(g, 0.25, [&](double, double) { return u(rng); });
  const auto out = apply_observation_update(f, kParams, QuadratureRule::gauss_hermite(20));
  EXPECT_EQ(out.time(), 0.25);
  for (int i = 0; i < g.n_m; ++i) EXPECT_EQ(out(i, 0), f(i, 0));
}

TEST(ApplyObservationUpdate, LinearInMeanOnlyMovesTheVarianceLookup) {
  const Grid g;
  auto u = [](double m, double z) { return 3.0 * m - 0.7 + 0.5 * z; };
  const auto f = ValueField::from_function(g, 0.5, u);
  const auto out = apply_observation_update(f, kParams, QuadratureRule::gauss_hermite(20));
  const double e2 = kParams.eps * kParams.eps;
  for (int i = 0; i < g.n_m; ++i) {
    for (int j = 0; j < g.n_z; ++j) {
      const double z = g.z(j);
      EXPECT_NEAR(out(i, j), u(g.m(i), z * e2 / (z + e2)), 1e-12);
    }
  }
}

TEST(ApplyObservationUpdate, MonotoneWithClampedExtrapolation) {
  const Grid g;
  const auto rule = QuadratureRule::gauss_hermite(20);
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> u(-1.0, 1.0), bump(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto b = ValueField::from_function(g, 0.5, [&](double, double) { return u(rng); });
    auto a = b;
    for (auto& v : a.values()) v += bump(rng);
    const auto ua = apply_observation_update(a, kParams, rule, Extrapolation::kClamp);
    const auto ub = apply_observation_update(b, kParams, rule, Extrapolation::kClamp);
    for (std::size_t k = 0; k < g.size(); ++k) EXPECT_GE(ua.values()[k], ub.values()[k]);
  }
}

TEST(ApplyObservationUpdate, RejectsPosteriorVarianceBelowGrid) {
  Grid g;
  g.z_min = 0.3;
  g.z_max = 1.0;
  EXPECT_THROW(
      apply_observation_update(ValueField::terminal(g, 0.5), kParams, QuadratureRule::gauss_hermite(5)),
      ValidationError);
}

TEST(ConvolutionKernel, IntegratesToOne) {
  for (double z : {0.05, 0.5, 1.0, 4.0}) {
    EXPECT_NEAR(convolution_jump([](double, double) { return 1.0; }, 0.0, z, 0.9), 1.0, 1e-12);
  }
}

TEST(ConvolutionKernel, AgreesWithQuadratureOnSmoothFields) {
  const auto rule = QuadratureRule::gauss_hermite(20);
  auto smooth = [](double m, double z) { return std::sin(2.0 * m) + std::cos(m) * z + m * m; };
  for (double m : {-0.8, -0.1, 0.0, 0.45, 1.0}) {
    for (double z : {0.1, 0.5, 1.0}) {
      const double gh = expected_posterior_value(smooth, {m, z}, 0.9, rule);
      EXPECT_NEAR(gh, convolution_jump(smooth, m, z, 0.9), 1e-4);
    }
  }
}
