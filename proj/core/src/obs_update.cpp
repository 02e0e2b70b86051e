#include "belief_hjb/obs_update.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "belief_hjb/error.hpp"

namespace belief_hjb {
namespace {

// Value along row-pair interpolation in m at fixed row j.
double row_value(const ValueField& field, int j, double m, Extrapolation mode) {
  const Grid& g = field.grid();
  const double dm = g.dm();
  const double s = (m - g.m_min) / dm;

  if (s < 0.0 || s > g.n_m - 1) {
    const bool low = s < 0.0;
    if (mode == Extrapolation::kClamp) return field(low ? 0 : g.n_m - 1, j);
    // Lagrange parabola through the three edge nodes, local coordinate u in cells.
    const int i0 = low ? 0 : g.n_m - 3;
    const double u = s - i0;
    const double f0 = field(i0, j);
    const double f1 = field(i0 + 1, j);
    const double f2 = field(i0 + 2, j);
    return f0 * (u - 1.0) * (u - 2.0) / 2.0 - f1 * u * (u - 2.0) + f2 * u * (u - 1.0) / 2.0;
  }

  auto i = static_cast<int>(std::floor(s));
  if (i >= g.n_m - 1) i = g.n_m - 2;
  const double w = s - i;
  return (1.0 - w) * field(i, j) + w * field(i + 1, j);
}

}  // namespace

double interpolate_value(const ValueField& field, double m, double z, Extrapolation mode) {
  const Grid& g = field.grid();
  const double tol = 1e-12 * std::max(1.0, std::abs(g.z_max));
  if (!(z >= g.z_min - tol && z <= g.z_max + tol)) {
    std::ostringstream msg;
    msg << "variance " << z << " outside grid range [" << g.z_min << ", " << g.z_max << "]";
    throw std::out_of_range(msg.str());
  }
  const double s = std::clamp((z - g.z_min) / g.dz(), 0.0, static_cast<double>(g.n_z - 1));
  auto j = static_cast<int>(std::floor(s));
  if (j >= g.n_z - 1) j = g.n_z - 2;
  const double w = s - j;
  const double lower = row_value(field, j, m, mode);
  if (w == 0.0) return lower;
  return (1.0 - w) * lower + w * row_value(field, j + 1, m, mode);
}

double expected_posterior_value(const BeliefFunction& phi, const GaussianBelief& belief,
                                double eps, const QuadratureRule& rule) {
  const double z = belief.variance;
  if (!(z >= 0.0)) throw ValidationError("belief variance must be >= 0");
  if (!(eps >= 0.0)) throw ValidationError("observation noise eps must be >= 0");
  if (z == 0.0) return phi(belief.mean, 0.0);

  const double e2 = eps * eps;
  const double shift = z / std::sqrt(z + e2);
  const double z_post = z * e2 / (z + e2);
  double total = 0.0;
  for (std::size_t k = 0; k < rule.size(); ++k) {
    total += rule.weights[k] * phi(belief.mean + shift * rule.nodes[k], z_post);
  }
  return total;
}

ValueField apply_observation_update(const ValueField& field_at_t, const ModelParams& params,
                                    const QuadratureRule& rule, Extrapolation mode) {
  const Grid& g = field_at_t.grid();
  const double e2 = params.eps * params.eps;
  ValueField out(g, field_at_t.time());
  for (int j = 0; j < g.n_z; ++j) {
    const double z = g.z(j);
    if (z == 0.0) {
      for (int i = 0; i < g.n_m; ++i) out(i, j) = field_at_t(i, j);
      continue;
    }
    const double z_post = z * e2 / (z + e2);
    if (z_post < g.z_min - 1e-12) {
      std::ostringstream msg;
      msg << "posterior variance " << z_post << " falls below z_min = " << g.z_min;
      throw ValidationError(msg.str());
    }
    const double shift = z / std::sqrt(z + e2);
    for (int i = 0; i < g.n_m; ++i) {
      const double m = g.m(i);
      double total = 0.0;
      for (std::size_t k = 0; k < rule.size(); ++k) {
        total += rule.weights[k] *
                 interpolate_value(field_at_t, m + shift * rule.nodes[k], z_post, mode);
      }
      out(i, j) = total;
    }
  }
  return out;
}

ValueField apply_observation_update(const Grid& grid, double time, const BeliefFunction& exact,
                                    const ModelParams& params, const QuadratureRule& rule) {
  ValueField out(grid, time);
  for (int i = 0; i < grid.n_m; ++i) {
    for (int j = 0; j < grid.n_z; ++j) {
      out(i, j) = expected_posterior_value(exact, {grid.m(i), grid.z(j)}, params.eps, rule);
    }
  }
  return out;
}

}  // namespace belief_hjb
