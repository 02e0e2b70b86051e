#include "belief_hjb/riccati.hpp"

#include <array>
#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>

#include "belief_hjb/error.hpp"

namespace belief_hjb {
namespace {

template <std::size_t N, typename Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& y, double h, Rhs&& rhs) {
  auto axpy = [](const std::array<double, N>& a, double s, const std::array<double, N>& d) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + s * d[i];
    return r;
  };
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, 0.5 * h, k1));
  const auto k3 = rhs(axpy(y, 0.5 * h, k2));
  const auto k4 = rhs(axpy(y, h, k3));
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

void check_steps(const ModelParams& params, int n_steps) {
  params.validate();
  if (n_steps < 2) throw ValidationError("Riccati integration needs n_steps >= 2");
}

std::vector<double> uniform_times(double horizon, int n_steps) {
  std::vector<double> t(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) t[k] = horizon * k / n_steps;
  return t;
}

// Linear interpolation of uniformly spaced samples.
double sample_at(std::span<const double> times, std::span<const double> values, double t) {
  const double horizon = times.back();
  if (!(t >= 0.0 && t <= horizon)) {
    std::ostringstream msg;
    msg << "time " << t << " outside [0, " << horizon << "]";
    throw std::out_of_range(msg.str());
  }
  const auto n = static_cast<double>(times.size() - 1);
  const double s = t / horizon * n;
  auto k = static_cast<std::size_t>(std::floor(s));
  if (k >= times.size() - 1) return values.back();
  const double w = s - static_cast<double>(k);
  return (1.0 - w) * values[k] + w * values[k + 1];
}

}  // namespace

RiccatiSolution solve_no_obs_riccati(const ModelParams& params, int n_steps,
                                     EtaCoefficient eta_form) {
  check_steps(params, n_steps);
  const double theta = params.theta;
  const double b2 = params.b * params.b;
  const double c = params.c_control;
  const double k = eta_form == EtaCoefficient::kInverseC ? 1.0 / c : (c - 1.0) / (c * c);

  auto rhs = [&](const std::array<double, 3>& y) {
    const double s = y[0] + y[1];
    return std::array<double, 3>{2.0 * theta * y[0] - 1.0, k * s * s + 2.0 * theta * y[1],
                                 -b2 * y[0]};
  };

  RiccatiSolution sol;
  sol.times = uniform_times(params.horizon, n_steps);
  const std::size_t n = sol.times.size();
  sol.zeta.resize(n);
  sol.eta.resize(n);
  sol.xi.resize(n);

  const double h = -params.horizon / n_steps;
  std::array<double, 3> y{1.0, 0.0, 0.0};
  for (std::size_t idx = n; idx-- > 0;) {
    sol.zeta[idx] = y[0];
    sol.eta[idx] = y[1];
    sol.xi[idx] = y[2];
    if (idx > 0) y = rk4_step(y, h, rhs);
  }
  return sol;
}

double no_obs_value(const RiccatiSolution& sol, double t, const GaussianBelief& belief) {
  const double zeta = sample_at(sol.times, sol.zeta, t);
  const double eta = sample_at(sol.times, sol.eta, t);
  const double xi = sample_at(sol.times, sol.xi, t);
  const double m2 = belief.mean * belief.mean;
  return zeta * (m2 + belief.variance) + eta * m2 + xi;
}

PerfectObsSolution solve_perfect_obs_riccati(const ModelParams& params, int n_steps) {
  check_steps(params, n_steps);
  const double theta = params.theta;
  const double b2 = params.b * params.b;
  const double c = params.c_control;

  auto rhs = [&](const std::array<double, 2>& y) {
    return std::array<double, 2>{2.0 * theta * y[0] + y[0] * y[0] / c - 1.0, -b2 * y[0]};
  };

  PerfectObsSolution sol;
  sol.times = uniform_times(params.horizon, n_steps);
  const std::size_t n = sol.times.size();
  sol.f.resize(n);
  sol.g.resize(n);

  const double h = -params.horizon / n_steps;
  std::array<double, 2> y{0.0, 0.0};
  for (std::size_t idx = n; idx-- > 0;) {
    sol.f[idx] = y[0];
    sol.g[idx] = y[1];
    if (idx > 0) y = rk4_step(y, h, rhs);
  }
  return sol;
}

double perfect_obs_value(const PerfectObsSolution& sol, double t, double x) {
  return sample_at(sol.times, sol.f, t) * x * x + sample_at(sol.times, sol.g, t);
}

}  // namespace belief_hjb
