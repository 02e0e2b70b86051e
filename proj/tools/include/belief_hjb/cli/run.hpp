#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "belief_hjb/cli/config.hpp"
#include "belief_hjb/hjb_grid.hpp"
#include "belief_hjb/path_sim.hpp"

namespace belief_hjb::cli {

struct RegimeSummary {
  std::string name;
  CostEstimate cost;
  std::size_t truncated_paths = 0;
  /// Worst realised monotonicity margin (grid regimes only).
  MonotonicityReport realized;
  bool has_grid = false;
};

struct RunSummary {
  std::vector<RegimeSummary> regimes;
  MonotonicityReport static_check;
  std::vector<std::string> files;
};

/// Solves the requested regimes, simulates paths when n_paths > 0 and
/// writes the CSV/text artifacts into config.output_dir. Progress lines go
/// to `log`. Throws ValidationError / NumericalError.
RunSummary run(const RunConfig& config, std::ostream& log);

/// Static and domain checks only; writes nothing.
std::string check_report(const RunConfig& config, bool* ok);

/// Samples of terminal characteristics over tau in [0, horizon] for a 5 x 5
/// set of roots spanning the grid box, as CSV text.
std::string characteristics_csv(const RunConfig& config, int samples);

/// Dimension-reduction checks of the multi-dimensional algebra; each line
/// reads "PASS name ..." or "FAIL name ...".
std::vector<std::string> kalman_demo(std::uint64_t seed);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace belief_hjb::cli
