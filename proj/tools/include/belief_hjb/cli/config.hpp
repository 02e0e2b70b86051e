#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "belief_hjb/error.hpp"
#include "belief_hjb/grid.hpp"
#include "belief_hjb/hjb_grid.hpp"
#include "belief_hjb/model.hpp"
#include "belief_hjb/obs_update.hpp"
#include "belief_hjb/path_sim.hpp"

namespace belief_hjb::cli {

enum class RunRegime { kNoObs, kNoisyObs, kPerfectObs, kAll };

std::string_view regime_name(RunRegime r);
/// Throws ValidationError for anything but no_obs, noisy_obs, perfect_obs, all.
RunRegime parse_regime(std::string_view name);

struct PathConfig {
  std::size_t n_paths = 100;
  std::uint64_t seed = 1;
  double start_mean = 1.0;
  double start_variance = 1.0;
  DriftMode drift = DriftMode::kOptimalControl;
  unsigned threads = 1;
};

struct RunConfig {
  ModelParams model;
  Grid grid;
  SolverConfig solver;
  int quadrature_nodes = 20;
  Extrapolation extrapolation = Extrapolation::kQuadratic;
  RunRegime regime = RunRegime::kAll;
  PathConfig paths;
  /// Fixed variance of value_m_slice.csv and comparison.csv; fixed mean of value_z_slice.csv.
  double slice_z = 1.0;
  double slice_m = 1.0;
  std::string output_dir = "belief_hjb_out";
};

/// Every problem found while reading or checking a configuration.
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Reads a JSON document. Missing keys keep their defaults, an empty
/// document gives the default configuration. Unknown keys, type mismatches
/// and invariant violations are all collected into one ConfigError.
RunConfig parse_config(std::string_view text);

/// All invariant violations of a configuration (empty when valid).
std::vector<std::string> config_violations(const RunConfig& config);
void validate(const RunConfig& config);

/// Canonical JSON form; parse_config(to_json(c)) reproduces c.
std::string to_json(const RunConfig& config);

/// Observation times k * interval strictly inside (0, horizon).
std::vector<double> evenly_spaced_observations(double interval, double horizon);

}  // namespace belief_hjb::cli
