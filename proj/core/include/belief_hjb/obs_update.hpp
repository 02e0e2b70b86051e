#pragma once

#include <functional>

#include "belief_hjb/grid.hpp"
#include "belief_hjb/model.hpp"
#include "belief_hjb/quadrature.hpp"

namespace belief_hjb {

/// Value function in belief coordinates, phi(m, z).
using BeliefFunction = std::function<double(double mean, double variance)>;

/// How interpolate_value treats a mean outside [m_min, m_max].
enum class Extrapolation {
  /// Parabola through the three nearest nodes of the row (the value grows
  /// quadratically in m).
  kQuadratic,
  /// Constant continuation of the edge value; keeps the update monotone.
  kClamp,
};

/// Bilinear interpolation of a layer; m may leave the box (see Extrapolation),
/// z may not (std::out_of_range).
double interpolate_value(const ValueField& field, double m, double z,
                         Extrapolation mode = Extrapolation::kQuadratic);

/// E_w[phi(m + s w, z')] with s = z / sqrt(z + eps^2), z' = z eps^2 / (z + eps^2):
/// the expected value after observing y = X + eps Z under the belief N(m, z).
double expected_posterior_value(const BeliefFunction& phi, const GaussianBelief& belief,
                                double eps, const QuadratureRule& rule);

/// Observation jump U(t-) from U(t) at every node of the layer's grid.
/// The returned layer keeps the input's time stamp.
ValueField apply_observation_update(const ValueField& field_at_t, const ModelParams& params,
                                    const QuadratureRule& rule,
                                    Extrapolation mode = Extrapolation::kQuadratic);

/// Mesh-free variant: same jump applied to an analytically known U(t).
ValueField apply_observation_update(const Grid& grid, double time, const BeliefFunction& exact,
                                    const ModelParams& params, const QuadratureRule& rule);

}  // namespace belief_hjb
