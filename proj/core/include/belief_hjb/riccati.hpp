#pragma once

#include <vector>

#include "belief_hjb/model.hpp"

namespace belief_hjb {

/// Quadratic coefficient k in  eta' = k (zeta + eta)^2 + 2 theta eta.
///
/// kInverseC (k = 1/C) is the one for which zeta (m^2 + z) + eta m^2 + xi
/// solves the mean/variance HJB equation, and it is what the grid solver
/// converges to. kCMinusOneOverCSquared (k = (C - 1)/C^2) is the alternative
/// closed form; it makes eta vanish identically at C = 1 and is kept for
/// comparison only.
enum class EtaCoefficient { kInverseC, kCMinusOneOverCSquared };

/// Samples of the no-observation coefficient functions on a uniform grid of [0, T].
struct RiccatiSolution {
  std::vector<double> times;
  std::vector<double> zeta;
  std::vector<double> eta;
  std::vector<double> xi;
};

/// Samples of f and g in u(t, x) = f(t) x^2 + g(t), the perfectly observed value.
struct PerfectObsSolution {
  std::vector<double> times;
  std::vector<double> f;
  std::vector<double> g;
};

/// Integrates, backward from zeta(T) = 1, eta(T) = xi(T) = 0,
///   zeta' = 2 theta zeta - 1,
///   eta'  = k (zeta + eta)^2 + 2 theta eta,
///   xi'   = -b^2 zeta
/// with classical RK4 on n_steps uniform steps. xi rides along as an extra state.
RiccatiSolution solve_no_obs_riccati(const ModelParams& params, int n_steps,
                                     EtaCoefficient eta_form = EtaCoefficient::kInverseC);

/// zeta(t)(m^2 + z) + eta(t) m^2 + xi(t); coefficients linearly interpolated in t.
double no_obs_value(const RiccatiSolution& sol, double t, const GaussianBelief& belief);

/// f' = 2 theta f + f^2 / C - 1, f(T) = 0, and g(t) = b^2 int_t^T f(s) ds, by RK4.
PerfectObsSolution solve_perfect_obs_riccati(const ModelParams& params, int n_steps);

/// f(t) x^2 + g(t).
double perfect_obs_value(const PerfectObsSolution& sol, double t, double x);

}  // namespace belief_hjb
