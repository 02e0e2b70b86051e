#pragma once

#include <vector>

#include "belief_hjb/grid.hpp"
#include "belief_hjb/hjb_grid.hpp"
#include "belief_hjb/model.hpp"
#include "belief_hjb/obs_update.hpp"
#include "belief_hjb/quadrature.hpp"

namespace belief_hjb {

enum class Regime { kNoObservations, kNoisyObservations };

/// Time-ascending stack of layers from t = 0 to t = T. At an observation
/// time t_i the layer for t_i^- (after the jump) comes immediately before the
/// layer for t_i, so consecutive layers with equal times mark a jump.
struct ValueHistory {
  std::vector<ValueField> layers;

  bool empty() const { return layers.empty(); }
};

struct SolveOptions {
  SolverConfig solver;
  int quadrature_nodes = 20;
  Extrapolation extrapolation = Extrapolation::kQuadratic;
  /// Keep every layer (needed for path simulation and slice output);
  /// otherwise only two layers are alive at any time.
  bool keep_layers = true;
};

struct SolveResult {
  ValueField initial;  // layer at t = 0
  ValueHistory history;
  /// Worst realised monotonicity margin over all steps.
  MonotonicityReport worst_realized;
  int steps = 0;
  int observation_updates = 0;
};

/// Interlaced backward solve: upwind steps between observation times, the
/// Gaussian observation jump at each t_i (noisy regime only), terminal data
/// m^2 + z. Validates the parameters, the grid, the domain and the
/// alignment of every observation time with the dt grid first.
SolveResult solve_value_function(const Grid& grid, const ModelParams& params, Regime regime,
                                 const SolveOptions& options);

}  // namespace belief_hjb
