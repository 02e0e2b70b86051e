#include "belief_hjb/path_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

#include "belief_hjb/error.hpp"
#include "belief_hjb/obs_update.hpp"

namespace belief_hjb {
namespace {

bool inside(const Grid& g, double m, double z) {
  const double tm = 1e-12 * std::max(1.0, g.m_max - g.m_min);
  const double tz = 1e-12 * std::max(1.0, g.z_max);
  return m >= g.m_min - tm && m <= g.m_max + tm && z >= g.z_min - tz && z <= g.z_max + tz;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

double value_gradient_m(const ValueField& layer, double m, double z) {
  const Grid& g = layer.grid();
  const double h = g.dm();
  const bool has_left = m - h >= g.m_min;
  const bool has_right = m + h <= g.m_max;
  if (has_left && has_right) {
    return (interpolate_value(layer, m + h, z) - interpolate_value(layer, m - h, z)) / (2.0 * h);
  }
  if (has_right) return (interpolate_value(layer, m + h, z) - interpolate_value(layer, m, z)) / h;
  return (interpolate_value(layer, m, z) - interpolate_value(layer, m - h, z)) / h;
}

BeliefTrajectory simulate_path(const ValueHistory& history, const GaussianBelief& start,
                               const ModelParams& params, std::uint64_t seed,
                               std::uint64_t stream, DriftMode drift) {
  if (history.empty()) throw ValidationError("path simulation needs a value history");
  const auto& layers = history.layers;
  const Grid& grid = layers.front().grid();
  if (!inside(grid, start.mean, start.variance)) {
    throw ValidationError("start belief lies outside the grid box");
  }

  BeliefTrajectory path;
  path.seed = seed;
  path.stream = stream;
  auto rng = make_stream(seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);

  double m = start.mean;
  double z = start.variance;
  auto record = [&](double t) {
    path.times.push_back(t);
    path.means.push_back(m);
    path.variances.push_back(z);
    path.controls.push_back(0.0);
  };
  record(layers.front().time());

  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    const ValueField& layer = layers[k];
    const double t = layer.time();
    const double dt = layers[k + 1].time() - t;

    if (std::abs(dt) <= 1e-12) {
      // Observation: Y ~ N(m, z + eps^2), then the conjugate update.
      const double y = m + std::sqrt(z + params.eps * params.eps) * normal(rng);
      path.observations.push_back(y);
      const auto post = gaussian_posterior({m, z}, y, params.eps);
      if (!inside(grid, post.mean, post.variance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "belief left the grid at the observation t=" << t << " (m=" << post.mean
            << ", z=" << post.variance << ")";
        path.truncated = true;
        path.truncation_reason = msg.str();
        break;
      }
      m = post.mean;
      z = post.variance;
      record(t);
      continue;
    }

    const double p = value_gradient_m(layer, m, z);
    const double alpha =
        drift == DriftMode::kOptimalControl ? optimal_control(p, params.c_control) : p;
    path.controls.back() = alpha;
    const double m_next = m + (-params.theta * m + alpha) * dt;
    const double z_next = z + (params.b * params.b - 2.0 * params.theta * z) * dt;
    if (!inside(grid, m_next, z_next)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "belief left the grid at t=" << t + dt << " (m=" << m_next << ", z=" << z_next
          << ")";
      path.truncated = true;
      path.truncation_reason = msg.str();
      path.controls.back() = 0.0;
      break;
    }
    m = m_next;
    z = z_next;
    record(t + dt);
  }
  return path;
}

std::vector<BeliefTrajectory> simulate_paths(const ValueHistory& history,
                                             const GaussianBelief& start,
                                             const ModelParams& params, std::size_t n_paths,
                                             std::uint64_t seed, DriftMode drift,
                                             unsigned threads) {
  std::vector<BeliefTrajectory> paths(n_paths);
  if (n_paths == 0) return paths;
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(n_paths));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      paths[k] = simulate_path(history, start, params, seed, k, drift);
    }
  };
  if (threads == 1) {
    work(0, n_paths);
    return paths;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const std::size_t chunk = (n_paths + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n_paths, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return paths;
}

double trajectory_cost(const BeliefTrajectory& path, const ModelParams& params) {
  if (path.times.empty()) throw ValidationError("empty trajectory");
  double cost = 0.0;
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    const double dt = path.times[k + 1] - path.times[k];
    cost += running_cost({path.means[k], path.variances[k]}, path.controls[k],
                         params.c_control) *
            dt;
  }
  return cost + terminal_cost({path.means.back(), path.variances.back()});
}

CostEstimate estimate_cost(std::span<const BeliefTrajectory> paths, const ModelParams& params) {
  if (paths.empty()) throw ValidationError("cost estimate needs at least one trajectory");
  std::vector<double> costs;
  costs.reserve(paths.size());
  for (const auto& path : paths) {
    if (path.truncated) {
      throw ValidationError("cannot estimate cost from a truncated trajectory (stream " +
                            std::to_string(path.stream) + "): " + path.truncation_reason);
    }
    costs.push_back(trajectory_cost(path, params));
  }
  const auto n = static_cast<double>(costs.size());
  double mean = 0.0;
  for (double c : costs) mean += c;
  mean /= n;
  double ss = 0.0;
  for (double c : costs) ss += (c - mean) * (c - mean);
  CostEstimate est;
  est.mean = mean;
  est.count = costs.size();
  est.standard_error = costs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return est;
}

}  // namespace belief_hjb
