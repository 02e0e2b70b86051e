#pragma once

#include <string>
#include <vector>

namespace belief_hjb {

/// Constants of the scalar controlled Ornstein-Uhlenbeck model
///
///   dX = (-theta X + alpha) dt + b dW,   Y_i = X(t_i) + eps Z_i,
///
/// with running cost x^2 + C alpha^2 and terminal cost x^2.
struct ModelParams {
  double theta = 0.25;
  double b = 0.5;
  double c_control = 1.0;
  double eps = 0.9;
  double horizon = 1.0;
  /// Strictly increasing, all inside the open interval (0, horizon).
  std::vector<double> obs_times{0.25, 0.5, 0.75};

  /// Every violated invariant, in a fixed order. Empty when valid.
  std::vector<std::string> violations() const;
  /// Throws ValidationError listing all violations.
  void validate() const;

  /// Fixed point b^2 / (2 theta) of the variance dynamics dz = (b^2 - 2 theta z) dt.
  double stationary_variance() const { return b * b / (2.0 * theta); }
};

/// Gaussian belief N(mean, variance).
struct GaussianBelief {
  double mean = 0.0;
  double variance = 0.0;

  friend bool operator==(const GaussianBelief&, const GaussianBelief&) = default;
};

/// Conjugate update of N(m, z) after observing y = X + eps Z.
///
/// A degenerate prior (z = 0) is returned unchanged; eps = 0 collapses the
/// belief onto the observation. Throws std::domain_error when z = eps = 0 and
/// y differs from the prior mean.
GaussianBelief gaussian_posterior(const GaussianBelief& prior, double y, double eps);

/// Minimiser -du_dm / (2 C) of C a^2 + a du_dm.
double optimal_control(double du_dm, double c_control);

/// m^2 + z + C alpha^2, the expected running cost under N(m, z).
double running_cost(const GaussianBelief& belief, double alpha, double c_control);

/// m^2 + z.
double terminal_cost(const GaussianBelief& belief);

/// Forward-time Hamiltonian of the mean/variance HJB equation,
///   z + m^2 - theta m p + (b^2 - 2 theta z) q - p^2 / (4 C),
/// where p = dU/dm and q = dU/dz.
double forward_hamiltonian(double m, double z, double p, double q, const ModelParams& params);

}  // namespace belief_hjb
