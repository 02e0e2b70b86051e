#pragma once

#include <string>
#include <vector>

#include "belief_hjb/error.hpp"
#include "belief_hjb/grid.hpp"
#include "belief_hjb/model.hpp"

namespace belief_hjb {

// Explicit monotone upwind scheme for the time-reversed HJB equation
//
//   dU/dtau + H1(m, z, dU/dm) + H2(m, z, dU/dz) = 0,   tau = T - t,
//   H1 = -m^2 + theta m p + p^2 / (4 C),
//   H2 = -z - (b^2 - 2 theta z) q,
//
// on a (mean, variance) grid. No boundary condition is imposed: the box is
// chosen so that characteristics leave it.

struct SolverConfig {
  double dt = 0.0125;
  /// A priori bound on |dU/dm| used by the static check_monotonicity().
  double grad_bound = 7.0;
  /// Verify the monotonicity condition with the realised one-sided
  /// differences at every step and abort on the first violation.
  bool check_monotonicity_each_step = true;

  void validate() const;
};

struct OneSidedDifferences {
  double dm_minus = 0.0;
  double dm_plus = 0.0;
  double dz_minus = 0.0;
  double dz_plus = 0.0;
};

/// D-/D+ quotients in m and z at node (i, j). On an edge the missing
/// quotient is replaced by the one that exists.
OneSidedDifferences one_sided_differences(const ValueField& field, int i, int j);

double hamiltonian_m(double m, double z, double p, const ModelParams& params);
double hamiltonian_z(double m, double z, double q, const ModelParams& params);

/// Godunov/Engquist-Osher flux for H1 around the sonic point -2 C theta m.
double numerical_hamiltonian_m(double m, double z, double d_minus, double d_plus,
                               const ModelParams& params);
/// Upwind flux for H2: D- when b^2 - 2 theta z < 0, D+ otherwise.
double numerical_hamiltonian_z(double m, double z, double d_minus, double d_plus,
                               const ModelParams& params);

struct MonotonicityReport {
  bool holds = true;
  /// Smallest value of 1 - 2 dt/dm |dH1/dp| - dt/dz |dH2/dq| over the grid.
  double margin = 1.0;
  int worst_i = -1;
  int worst_j = -1;
  double worst_m = 0.0;
  double worst_z = 0.0;
  /// Gradient |dU/dm| that produced the worst margin.
  double worst_gradient = 0.0;

  std::string describe() const;
};

/// Static monotonicity check with the a priori bound |p| <= grad_bound.
MonotonicityReport check_monotonicity(const Grid& grid, const ModelParams& params, double dt,
                                      double grad_bound);

/// Same condition, evaluated with the one-sided differences of an actual layer.
MonotonicityReport realized_monotonicity(const ValueField& field, const ModelParams& params,
                                         double dt);

class CflViolation : public NumericalError {
 public:
  CflViolation(const MonotonicityReport& report, double time);

  const MonotonicityReport& report() const { return report_; }
  double time() const { return time_; }

 private:
  MonotonicityReport report_;
  double time_;
};

/// U^{n+1} = U^n - dt (H1num + H2num); the result sits dt earlier in physical time.
/// Throws CflViolation (when checking is enabled) and NumericalError on non-finite output.
ValueField step_backward(const ValueField& field, const ModelParams& params,
                         const SolverConfig& config);

/// As step_backward, also merging the realised monotonicity margin of the
/// input layer into *worst (which may be null).
ValueField step_backward(const ValueField& field, const ModelParams& params,
                         const SolverConfig& config, MonotonicityReport* worst);

/// Number of dt steps covering [t_start, t_end]; throws ValidationError
/// unless the interval is a whole number of steps within 1e-9.
int steps_between(double t_start, double t_end, double dt);

/// Steps backward from the layer at t_end (its time must equal t_end) to
/// t_start. Layers are returned in computation order, t_end first; a
/// zero-length interval yields just the input layer.
std::vector<ValueField> solve_between_observations(const ValueField& terminal_layer,
                                                   double t_start, double t_end,
                                                   const ModelParams& params,
                                                   const SolverConfig& config,
                                                   MonotonicityReport* worst = nullptr);

}  // namespace belief_hjb
