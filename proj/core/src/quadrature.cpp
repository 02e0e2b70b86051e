#include "belief_hjb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "belief_hjb/error.hpp"

namespace belief_hjb {

QuadratureRule QuadratureRule::gauss_hermite(int k) {
  if (k < 1) throw ValidationError("Gauss-Hermite rule needs at least one node");
  if (k > 200) throw ValidationError("Gauss-Hermite rule limited to 200 nodes");

  // Newton iteration on the orthonormal Hermite recurrence for weight
  // exp(-x^2), then rescaled to the standard normal: w = sqrt(2) x,
  // weight / sqrt(pi).
  const auto n = static_cast<std::size_t>(k);
  std::vector<double> x(n), w(n);
  const double pim4 = 1.0 / std::pow(std::numbers::pi, 0.25);
  const std::size_t half = (n + 1) / 2;
  double root = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    if (i == 0) {
      root = std::sqrt(2.0 * k + 1.0) - 1.85575 * std::pow(2.0 * k + 1.0, -0.16667);
    } else if (i == 1) {
      root -= 1.14 * std::pow(static_cast<double>(k), 0.426) / root;
    } else if (i == 2) {
      root = 1.86 * root - 0.86 * x[0];
    } else if (i == 3) {
      root = 1.91 * root - 0.91 * x[1];
    } else {
      root = 2.0 * root - x[i - 2];
    }

    double derivative = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      for (int j = 0; j < k; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = root * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      derivative = std::sqrt(2.0 * k) * p2;
      const double previous = root;
      root = previous - p1 / derivative;
      if (std::abs(root - previous) <= 1e-14 * std::max(1.0, std::abs(root))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("Gauss-Hermite node iteration did not converge");
    x[i] = root;
    x[n - 1 - i] = -root;
    w[i] = 2.0 / (derivative * derivative);
    w[n - 1 - i] = w[i];
  }

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double scale = std::sqrt(2.0);
  const double norm = 1.0 / std::sqrt(std::numbers::pi);
  // x is descending; store ascending.
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = scale * x[n - 1 - i];
    rule.weights[i] = norm * w[n - 1 - i];
  }
  if (k % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

}  // namespace belief_hjb
