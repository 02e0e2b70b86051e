#include "belief_hjb/characteristics.hpp"

#include <cmath>
#include <sstream>

namespace belief_hjb {

CharacteristicConstants characteristic_constants(const CharacteristicRoot& root,
                                                 const ModelParams& params) {
  const double theta = params.theta;
  const double r = std::sqrt(theta * theta + 1.0 / params.c_control);
  CharacteristicConstants c;
  c.c1 = root.z0 - params.stationary_variance();
  c.c2 = root.q0 - 1.0 / (2.0 * theta);
  c.c4 = ((theta + r) / 2.0 * root.p0 - root.m0) / r;
  c.c3 = root.p0 - c.c4;
  return c;
}

CharacteristicState characteristic_state(const CharacteristicConstants& consts,
                                         const CharacteristicRoot& root, double tau,
                                         const ModelParams& params) {
  const double theta = params.theta;
  const double r = std::sqrt(theta * theta + 1.0 / params.c_control);
  const double grow = std::expm1(r * tau);
  const double decay = std::expm1(-r * tau);
  CharacteristicState s;
  s.z = root.z0 + consts.c1 * std::expm1(2.0 * theta * tau);
  s.q = root.q0 + consts.c2 * std::expm1(-2.0 * theta * tau);
  s.p = root.p0 + consts.c3 * grow + consts.c4 * decay;
  s.m = root.m0 + (theta + r) * consts.c3 / 2.0 * grow + (theta - r) * consts.c4 / 2.0 * decay;
  return s;
}

CharacteristicRoot terminal_root(double m0, double z0) { return {m0, z0, 2.0 * m0, 1.0}; }

DomainReport validate_domain(const Grid& grid, const ModelParams& params) {
  DomainReport report;
  if (!(grid.m_min < 0.0 && 0.0 < grid.m_max)) {
    report.reasons.emplace_back("0 not in (m_min, m_max)");
  }
  const double fixed = params.stationary_variance();
  if (!(grid.z_min <= fixed && fixed <= grid.z_max)) {
    std::ostringstream msg;
    msg << "stationary variance b^2/(2 theta) = " << fixed << " not in [z_min, z_max]";
    report.reasons.push_back(msg.str());
  }
  if (grid.z_min < 0.0) report.reasons.emplace_back("z_min < 0");
  report.valid = report.reasons.empty();
  return report;
}

}  // namespace belief_hjb
