#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace belief_hjb {

/// Uniform tensor grid over (mean, variance).
struct Grid {
  double m_min = -1.0;
  double m_max = 1.0;
  double z_min = 0.0;
  double z_max = 1.0;
  int n_m = 21;
  int n_z = 11;

  /// Structural checks only (counts, ordering, z_min >= 0). Whether the box
  /// suits a given model is decided by validate_domain().
  void validate() const;

  double dm() const { return (m_max - m_min) / (n_m - 1); }
  double dz() const { return (z_max - z_min) / (n_z - 1); }
  double m(int i) const { return m_min + i * dm(); }
  double z(int j) const { return z_min + j * dz(); }
  std::size_t size() const { return static_cast<std::size_t>(n_m) * static_cast<std::size_t>(n_z); }
};

/// One time layer U^n_{i,j} of the value function, stored row-major in i (mean index).
class ValueField {
 public:
  ValueField(Grid grid, double time);
  ValueField(Grid grid, double time, std::vector<double> values);

  /// Samples fn(m_i, z_j) at every node.
  static ValueField from_function(const Grid& grid, double time,
                                  const std::function<double(double, double)>& fn);
  /// m^2 + z.
  static ValueField terminal(const Grid& grid, double horizon);

  const Grid& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double& operator()(int i, int j) { return values_[index(i, j)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  bool all_finite() const;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(grid_.n_z) +
           static_cast<std::size_t>(j);
  }

  Grid grid_;
  double time_;
  std::vector<double> values_;
};

}  // namespace belief_hjb
