#include "belief_hjb/solver.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "belief_hjb/characteristics.hpp"
#include "belief_hjb/error.hpp"

namespace belief_hjb {

SolveResult solve_value_function(const Grid& grid, const ModelParams& params, Regime regime,
                                 const SolveOptions& options) {
  params.validate();
  grid.validate();
  options.solver.validate();
  if (const auto domain = validate_domain(grid, params); !domain.valid) {
    std::string msg = "computational domain rejected:";
    for (const auto& r : domain.reasons) msg += " [" + r + "]";
    throw ValidationError(msg);
  }

  // Breakpoints in descending time: T, t_n, ..., t_1, 0.
  std::vector<double> breaks{params.horizon};
  if (regime == Regime::kNoisyObservations) {
    breaks.insert(breaks.end(), params.obs_times.rbegin(), params.obs_times.rend());
  }
  breaks.push_back(0.0);

  std::vector<int> interval_steps;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    interval_steps.push_back(steps_between(breaks[k + 1], breaks[k], options.solver.dt));
  }

  const QuadratureRule rule = QuadratureRule::gauss_hermite(options.quadrature_nodes);
  MonotonicityReport worst;
  worst.margin = std::numeric_limits<double>::infinity();

  std::vector<ValueField> descending;
  ValueField current = ValueField::terminal(grid, params.horizon);
  if (options.keep_layers) descending.push_back(current);

  int total_steps = 0;
  int updates = 0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double t_end = breaks[k];
    const double t_start = breaks[k + 1];
    const int n = interval_steps[k];
    for (int s = 1; s <= n; ++s) {
      current = step_backward(current, params, options.solver, &worst);
      current.set_time(s == n ? t_start : t_end - s * options.solver.dt);
      if (options.keep_layers) descending.push_back(current);
    }
    total_steps += n;
    if (k + 2 < breaks.size()) {
      current = apply_observation_update(current, params, rule, options.extrapolation);
      ++updates;
      if (!current.all_finite()) throw NumericalError("observation update produced non-finite values");
      if (options.keep_layers) descending.push_back(current);
    }
  }

  SolveResult result{current, {}, worst, total_steps, updates};
  result.worst_realized.holds = worst.margin >= 0.0;
  if (options.keep_layers) {
    std::reverse(descending.begin(), descending.end());
    result.history.layers = std::move(descending);
  }
  return result;
}

}  // namespace belief_hjb
