#pragma once

#include <string>
#include <vector>

#include "belief_hjb/grid.hpp"
#include "belief_hjb/model.hpp"

namespace belief_hjb {

// Characteristic curves of the time-reversed mean/variance HJB equation:
//
//   dm/dtau = theta m + p / (2C),   dz/dtau = 2 theta z - b^2,
//   dp/dtau = 2m - theta p,         dq/dtau = 1 - 2 theta q.

/// Starting point of a characteristic: state (m0, z0) and co-state (p0, q0).
struct CharacteristicRoot {
  double m0 = 0.0;
  double z0 = 0.0;
  double p0 = 0.0;
  double q0 = 0.0;
};

struct CharacteristicConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double c4 = 0.0;
};

struct CharacteristicState {
  double m = 0.0;
  double z = 0.0;
  double p = 0.0;
  double q = 0.0;
};

/// c1 = z0 - b^2/(2 theta), c2 = q0 - 1/(2 theta),
/// c4 = ((theta + r)/2 p0 - m0) / r, c3 = p0 - c4, with r = sqrt(theta^2 + 1/C).
CharacteristicConstants characteristic_constants(const CharacteristicRoot& root,
                                                 const ModelParams& params);

/// Closed-form state at parameter tau. Written relative to the root so that
/// tau = 0 reproduces it exactly.
CharacteristicState characteristic_state(const CharacteristicConstants& consts,
                                         const CharacteristicRoot& root, double tau,
                                         const ModelParams& params);

/// Co-state taken from the terminal data m^2 + z: p0 = 2 m0, q0 = 1.
CharacteristicRoot terminal_root(double m0, double z0);

struct DomainReport {
  bool valid = true;
  std::vector<std::string> reasons;
};

/// The box is acceptable when m = 0 and z = b^2/(2 theta) are inside it, so
/// every characteristic leaves through the boundary.
DomainReport validate_domain(const Grid& grid, const ModelParams& params);

}  // namespace belief_hjb
