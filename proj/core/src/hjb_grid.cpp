#include "belief_hjb/hjb_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace belief_hjb {
namespace {

double dh1_dp(double m, double p, const ModelParams& params) {
  return params.theta * m + p / (2.0 * params.c_control);
}

double dh2_dq(double z, const ModelParams& params) {
  return 2.0 * params.theta * z - params.b * params.b;
}

void merge(MonotonicityReport& into, const MonotonicityReport& other) {
  if (other.margin < into.margin) into = other;
  into.holds = into.margin >= 0.0;
}

}  // namespace

void SolverConfig::validate() const {
  std::string problems;
  if (!(dt > 0.0)) problems += " [dt > 0]";
  if (!(grad_bound > 0.0)) problems += " [grad_bound > 0]";
  if (!problems.empty()) throw ValidationError("invalid solver config:" + problems);
}

OneSidedDifferences one_sided_differences(const ValueField& field, int i, int j) {
  const Grid& g = field.grid();
  const double u = field(i, j);
  OneSidedDifferences d;
  if (i > 0) d.dm_minus = (u - field(i - 1, j)) / g.dm();
  if (i + 1 < g.n_m) d.dm_plus = (field(i + 1, j) - u) / g.dm();
  if (i == 0) d.dm_minus = d.dm_plus;
  if (i + 1 == g.n_m) d.dm_plus = d.dm_minus;

  if (j > 0) d.dz_minus = (u - field(i, j - 1)) / g.dz();
  if (j + 1 < g.n_z) d.dz_plus = (field(i, j + 1) - u) / g.dz();
  if (j == 0) d.dz_minus = d.dz_plus;
  if (j + 1 == g.n_z) d.dz_plus = d.dz_minus;
  return d;
}

double hamiltonian_m(double m, double /*z*/, double p, const ModelParams& params) {
  return -m * m + params.theta * m * p + p * p / (4.0 * params.c_control);
}

double hamiltonian_z(double /*m*/, double z, double q, const ModelParams& params) {
  return -z - (params.b * params.b - 2.0 * params.theta * z) * q;
}

double numerical_hamiltonian_m(double m, double z, double d_minus, double d_plus,
                               const ModelParams& params) {
  const double sonic = -2.0 * params.c_control * params.theta * m;
  const bool minus_up = d_minus >= sonic;
  const bool plus_up = d_plus >= sonic;
  if (minus_up && plus_up) return hamiltonian_m(m, z, d_minus, params);
  if (minus_up && !plus_up) {
    return hamiltonian_m(m, z, d_plus, params) + hamiltonian_m(m, z, d_minus, params) -
           hamiltonian_m(m, z, sonic, params);
  }
  if (!minus_up && plus_up) return hamiltonian_m(m, z, sonic, params);
  return hamiltonian_m(m, z, d_plus, params);
}

double numerical_hamiltonian_z(double m, double z, double d_minus, double d_plus,
                               const ModelParams& params) {
  const double advection = params.b * params.b - 2.0 * params.theta * z;
  return hamiltonian_z(m, z, advection < 0.0 ? d_minus : d_plus, params);
}

std::string MonotonicityReport::describe() const {
  std::ostringstream out;
  out.precision(17);
  out << (holds ? "holds" : "violated") << "; margin " << margin;
  if (worst_i >= 0) {
    out << " at (i=" << worst_i << ", j=" << worst_j << ", m=" << worst_m << ", z=" << worst_z
        << ", |dU/dm|=" << worst_gradient << ")";
  }
  return out.str();
}

MonotonicityReport check_monotonicity(const Grid& grid, const ModelParams& params, double dt,
                                      double grad_bound) {
  if (!(grad_bound > 0.0)) throw ValidationError("gradient bound must be > 0");
  grid.validate();
  MonotonicityReport report;
  report.margin = std::numeric_limits<double>::infinity();
  const double rm = dt / grid.dm();
  const double rz = dt / grid.dz();
  for (int i = 0; i < grid.n_m; ++i) {
    const double m = grid.m(i);
    const double speed_m = params.theta * std::abs(m) + grad_bound / (2.0 * params.c_control);
    for (int j = 0; j < grid.n_z; ++j) {
      const double z = grid.z(j);
      const double slack = 1.0 - 2.0 * rm * speed_m - rz * std::abs(dh2_dq(z, params));
      if (slack < report.margin) {
        report.margin = slack;
        report.worst_i = i;
        report.worst_j = j;
        report.worst_m = m;
        report.worst_z = z;
        report.worst_gradient = grad_bound;
      }
    }
  }
  report.holds = report.margin >= 0.0;
  return report;
}

MonotonicityReport realized_monotonicity(const ValueField& field, const ModelParams& params,
                                         double dt) {
  const Grid& grid = field.grid();
  MonotonicityReport report;
  report.margin = std::numeric_limits<double>::infinity();
  const double rm = dt / grid.dm();
  const double rz = dt / grid.dz();
  for (int i = 0; i < grid.n_m; ++i) {
    const double m = grid.m(i);
    for (int j = 0; j < grid.n_z; ++j) {
      const double z = grid.z(j);
      const auto d = one_sided_differences(field, i, j);
      const double speed_m =
          std::max(std::abs(dh1_dp(m, d.dm_minus, params)), std::abs(dh1_dp(m, d.dm_plus, params)));
      const double slack = 1.0 - 2.0 * rm * speed_m - rz * std::abs(dh2_dq(z, params));
      if (slack < report.margin) {
        report.margin = slack;
        report.worst_i = i;
        report.worst_j = j;
        report.worst_m = m;
        report.worst_z = z;
        report.worst_gradient = std::max(std::abs(d.dm_minus), std::abs(d.dm_plus));
      }
    }
  }
  report.holds = report.margin >= 0.0;
  return report;
}

CflViolation::CflViolation(const MonotonicityReport& report, double time)
    : NumericalError([&] {
        std::ostringstream msg;
        msg.precision(17);
        msg << "monotonicity condition violated at t=" << time << ": " << report.describe();
        return msg.str();
      }()),
      report_(report),
      time_(time) {}

ValueField step_backward(const ValueField& field, const ModelParams& params,
                         const SolverConfig& config) {
  return step_backward(field, params, config, nullptr);
}

ValueField step_backward(const ValueField& field, const ModelParams& params,
                         const SolverConfig& config, MonotonicityReport* worst) {
  if (config.check_monotonicity_each_step || worst != nullptr) {
    const auto realized = realized_monotonicity(field, params, config.dt);
    if (worst != nullptr) merge(*worst, realized);
    if (config.check_monotonicity_each_step && !realized.holds) {
      throw CflViolation(realized, field.time());
    }
  }

  const Grid& grid = field.grid();
  ValueField next(grid, field.time() - config.dt);
  for (int i = 0; i < grid.n_m; ++i) {
    const double m = grid.m(i);
    for (int j = 0; j < grid.n_z; ++j) {
      const double z = grid.z(j);
      const auto d = one_sided_differences(field, i, j);
      const double flux = numerical_hamiltonian_m(m, z, d.dm_minus, d.dm_plus, params) +
                          numerical_hamiltonian_z(m, z, d.dz_minus, d.dz_plus, params);
      next(i, j) = field(i, j) - config.dt * flux;
    }
  }
  if (!next.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite value produced stepping back from t=" << field.time();
    throw NumericalError(msg.str());
  }
  return next;
}

int steps_between(double t_start, double t_end, double dt) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  if (!(t_start <= t_end)) throw ValidationError("interval must satisfy t_start <= t_end");
  const double ratio = (t_end - t_start) / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) * dt > 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "interval [" << t_start << ", " << t_end << "] is not a whole number of steps dt="
        << dt;
    throw ValidationError(msg.str());
  }
  return static_cast<int>(rounded);
}

std::vector<ValueField> solve_between_observations(const ValueField& terminal_layer,
                                                   double t_start, double t_end,
                                                   const ModelParams& params,
                                                   const SolverConfig& config,
                                                   MonotonicityReport* worst) {
  config.validate();
  if (std::abs(terminal_layer.time() - t_end) > 1e-9) {
    throw ValidationError("terminal layer time does not match t_end");
  }
  if (!(t_start < t_end) && std::abs(t_end - t_start) > 1e-12) {
    throw ValidationError("solve_between_observations requires t_start < t_end");
  }
  const int n = steps_between(t_start, t_end, config.dt);

  std::vector<ValueField> layers;
  layers.reserve(static_cast<std::size_t>(n) + 1);
  layers.push_back(terminal_layer);
  layers.back().set_time(t_end);
  for (int k = 1; k <= n; ++k) {
    ValueField next = step_backward(layers.back(), params, config, worst);
    next.set_time(k == n ? t_start : t_end - k * config.dt);
    layers.push_back(std::move(next));
  }
  return layers;
}

}  // namespace belief_hjb
