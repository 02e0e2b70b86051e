#include "belief_hjb/grid.hpp"

#include <cmath>
#include <string>

#include "belief_hjb/error.hpp"

namespace belief_hjb {

void Grid::validate() const {
  std::string problems;
  if (n_m < 3) problems += " [n_m >= 3]";
  if (n_z < 2) problems += " [n_z >= 2]";
  if (!(m_min < m_max)) problems += " [m_min < m_max]";
  if (!(z_min < z_max)) problems += " [z_min < z_max]";
  if (!(z_min >= 0.0)) problems += " [z_min >= 0]";
  if (!problems.empty()) throw ValidationError("invalid grid:" + problems);
}

ValueField::ValueField(Grid grid, double time) : grid_(grid), time_(time) {
  grid_.validate();
  values_.assign(grid_.size(), 0.0);
}

ValueField::ValueField(Grid grid, double time, std::vector<double> values)
    : grid_(grid), time_(time), values_(std::move(values)) {
  grid_.validate();
  if (values_.size() != grid_.size()) {
    throw ValidationError("value array size does not match the grid");
  }
}

ValueField ValueField::from_function(const Grid& grid, double time,
                                     const std::function<double(double, double)>& fn) {
  ValueField field(grid, time);
  for (int i = 0; i < grid.n_m; ++i) {
    for (int j = 0; j < grid.n_z; ++j) field(i, j) = fn(grid.m(i), grid.z(j));
  }
  return field;
}

ValueField ValueField::terminal(const Grid& grid, double horizon) {
  return from_function(grid, horizon, [](double m, double z) { return m * m + z; });
}

bool ValueField::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace belief_hjb
