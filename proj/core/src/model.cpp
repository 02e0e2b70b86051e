#include "belief_hjb/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "belief_hjb/error.hpp"

namespace belief_hjb {

std::vector<std::string> ModelParams::violations() const {
  std::vector<std::string> out;
  if (!(theta > 0.0)) out.emplace_back("theta > 0");
  if (!(b > 0.0)) out.emplace_back("b > 0");
  if (!(c_control > 0.0)) out.emplace_back("c_control > 0");
  if (!(eps >= 0.0)) out.emplace_back("eps >= 0");
  if (!(horizon > 0.0)) out.emplace_back("horizon > 0");
  for (std::size_t i = 0; i < obs_times.size(); ++i) {
    const double t = obs_times[i];
    if (!(t > 0.0 && t < horizon)) {
      std::ostringstream msg;
      msg << "obs_times[" << i << "] = " << t << " must lie in (0, horizon)";
      out.push_back(msg.str());
    }
    if (i > 0 && !(t > obs_times[i - 1])) {
      std::ostringstream msg;
      msg << "obs_times must be strictly increasing (index " << i << ")";
      out.push_back(msg.str());
    }
  }
  return out;
}

void ModelParams::validate() const {
  const auto problems = violations();
  if (problems.empty()) return;
  std::string msg = "invalid model parameters:";
  for (const auto& p : problems) msg += " [" + p + "]";
  throw ValidationError(msg);
}

GaussianBelief gaussian_posterior(const GaussianBelief& prior, double y, double eps) {
  const double z = prior.variance;
  if (!(z >= 0.0)) throw ValidationError("prior variance must be >= 0");
  if (!(eps >= 0.0)) throw ValidationError("observation noise eps must be >= 0");

  if (z == 0.0) {
    if (eps == 0.0 && y != prior.mean) {
      throw std::domain_error("exact observation contradicts a degenerate prior");
    }
    return prior;
  }
  if (eps == 0.0) return {y, 0.0};

  const double e2 = eps * eps;
  const double gain = z / (z + e2);
  return {prior.mean + gain * (y - prior.mean), z * e2 / (z + e2)};
}

double optimal_control(double du_dm, double c_control) { return -du_dm / (2.0 * c_control); }

double running_cost(const GaussianBelief& belief, double alpha, double c_control) {
  return belief.mean * belief.mean + belief.variance + c_control * alpha * alpha;
}

double terminal_cost(const GaussianBelief& belief) {
  return belief.mean * belief.mean + belief.variance;
}

double forward_hamiltonian(double m, double z, double p, double q, const ModelParams& params) {
  const double b2 = params.b * params.b;
  return z + m * m - params.theta * m * p + (b2 - 2.0 * params.theta * z) * q -
         p * p / (4.0 * params.c_control);
}

}  // namespace belief_hjb
