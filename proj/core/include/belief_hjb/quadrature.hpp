#pragma once

#include <vector>

namespace belief_hjb {

/// Quadrature for E[f(W)], W ~ N(0, 1): sum_k weights[k] f(nodes[k]).
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }

  /// K-point Gauss-Hermite rule for the standard normal density (exact for
  /// polynomials of degree <= 2K - 1). Nodes ascending, weights sum to 1.
  static QuadratureRule gauss_hermite(int k);
};

}  // namespace belief_hjb
