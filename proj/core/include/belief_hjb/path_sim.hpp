#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "belief_hjb/model.hpp"
#include "belief_hjb/solver.hpp"

namespace belief_hjb {

/// Drift used for the mean between observations.
enum class DriftMode {
  /// -theta m + alpha*, alpha* = -(1/(2C)) dU/dm: the Hamiltonian minimiser.
  kOptimalControl,
  /// -theta m + dU/dm, kept to reproduce that alternative form of the dynamics.
  kGradientDrift,
};

/// Simulated belief path. At an observation time two samples share the same
/// time stamp: the pre-jump state followed by the post-jump state.
struct BeliefTrajectory {
  std::vector<double> times;
  std::vector<double> means;
  std::vector<double> variances;
  /// Control applied from sample k to sample k+1 (0 across a jump and at the end).
  std::vector<double> controls;
  /// Drawn observations, one per jump.
  std::vector<double> observations;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  /// Set when the belief left the grid box; the samples stop at the last
  /// in-box state.
  bool truncated = false;
  std::string truncation_reason;
};

struct CostEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

/// Forward-Euler belief path under the feedback read from the value layers,
/// with a Kalman jump at every observation time. Observation noise for
/// (seed, stream) comes from its own mt19937_64 stream, so results do not
/// depend on the order in which paths are simulated.
BeliefTrajectory simulate_path(const ValueHistory& history, const GaussianBelief& start,
                               const ModelParams& params, std::uint64_t seed,
                               std::uint64_t stream = 0,
                               DriftMode drift = DriftMode::kOptimalControl);

/// n_paths independent paths, streams 0..n_paths-1, spread over `threads` workers.
std::vector<BeliefTrajectory> simulate_paths(const ValueHistory& history,
                                             const GaussianBelief& start,
                                             const ModelParams& params, std::size_t n_paths,
                                             std::uint64_t seed,
                                             DriftMode drift = DriftMode::kOptimalControl,
                                             unsigned threads = 1);

/// Realised cost sum (m^2 + z + C alpha^2) dt + m(T)^2 + z(T) of one path.
double trajectory_cost(const BeliefTrajectory& path, const ModelParams& params);

/// Sample mean and standard error of trajectory_cost. Rejects empty input
/// and truncated paths.
CostEstimate estimate_cost(std::span<const BeliefTrajectory> paths, const ModelParams& params);

/// dU/dm of a layer at (m, z): centred difference of the interpolant with
/// step dm, one-sided where the centred stencil would leave the box.
double value_gradient_m(const ValueField& layer, double m, double z);

}  // namespace belief_hjb
