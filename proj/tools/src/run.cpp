#include "belief_hjb/cli/run.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include "belief_hjb/characteristics.hpp"
#include "belief_hjb/kalman_nd.hpp"
#include "belief_hjb/riccati.hpp"
#include "belief_hjb/solver.hpp"

#ifndef BELIEF_HJB_VERSION
#define BELIEF_HJB_VERSION "unknown"
#endif

namespace belief_hjb::cli {
namespace fs = std::filesystem;

namespace {

struct GridRegime {
  std::string name;
  SolveResult result;
};

struct Solved {
  std::vector<GridRegime> grids;
  bool has_perfect = false;
  PerfectObsSolution perfect;
};

std::string csv_preamble(const std::string& what) {
  return std::string("# belief_hjb ") + BELIEF_HJB_VERSION + " " + what + "\n";
}

void write_file(const fs::path& path, const std::string& body, RunSummary& summary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw ValidationError("failed writing " + path.string());
  summary.files.push_back(path.filename().string());
}

int perfect_steps(const RunConfig& c) {
  return std::max(2, static_cast<int>(std::lround(c.model.horizon / c.solver.dt)));
}

// Euler-Maruyama for the fully observed state under alpha* = -f(t) x / C.
BeliefTrajectory simulate_perfect(const PerfectObsSolution& sol, double x0,
                                  const ModelParams& p, std::uint64_t seed,
                                  std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  BeliefTrajectory path;
  path.seed = seed;
  path.stream = stream;
  double x = x0;
  for (std::size_t k = 0; k < sol.times.size(); ++k) {
    path.times.push_back(sol.times[k]);
    path.means.push_back(x);
    path.variances.push_back(0.0);
    if (k + 1 == sol.times.size()) {
      path.controls.push_back(0.0);
      break;
    }
    const double dt = sol.times[k + 1] - sol.times[k];
    const double alpha = -sol.f[k] * x / p.c_control;
    path.controls.push_back(alpha);
    x += (-p.theta * x + alpha) * dt + p.b * std::sqrt(dt) * normal(rng);
  }
  return path;
}

Solved solve_all(const RunConfig& c, std::ostream& log) {
  Solved s;
  SolveOptions opts;
  opts.solver = c.solver;
  opts.quadrature_nodes = c.quadrature_nodes;
  opts.extrapolation = c.extrapolation;
  opts.keep_layers = true;
  const bool all = c.regime == RunRegime::kAll;
  if (all || c.regime == RunRegime::kNoObs) {
    log << "solving no_obs\n";
    s.grids.push_back({"no_obs", solve_value_function(c.grid, c.model, Regime::kNoObservations, opts)});
  }
  if (all || c.regime == RunRegime::kNoisyObs) {
    log << "solving noisy_obs\n";
    s.grids.push_back(
        {"noisy_obs", solve_value_function(c.grid, c.model, Regime::kNoisyObservations, opts)});
  }
  if (all || c.regime == RunRegime::kPerfectObs) {
    log << "solving perfect_obs\n";
    s.has_perfect = true;
    s.perfect = solve_perfect_obs_riccati(c.model, perfect_steps(c));
  }
  return s;
}

std::string value_t0_csv(const RunConfig& c, const Solved& s) {
  std::ostringstream out;
  out << csv_preamble("value at t=0; m and z in state units, values in cost units");
  out << "m,z";
  for (const auto& g : s.grids) out << ",value_" << g.name;
  if (s.has_perfect) out << ",value_perfect_obs";
  out << "\n";
  for (int i = 0; i < c.grid.n_m; ++i) {
    for (int j = 0; j < c.grid.n_z; ++j) {
      out << format_double(c.grid.m(i)) << ',' << format_double(c.grid.z(j));
      for (const auto& g : s.grids) out << ',' << format_double(g.result.initial(i, j));
      if (s.has_perfect) out << ',' << format_double(perfect_obs_value(s.perfect, 0.0, c.grid.m(i)));
      out << "\n";
    }
  }
  return out.str();
}

// Long-format slice through every stored layer: fixed z (axis 'm') or fixed m (axis 'z').
std::string slice_csv(const RunConfig& c, const Solved& s, bool along_m) {
  std::ostringstream out;
  out << csv_preamble(along_m ? "value along m at z=" + format_double(c.slice_z)
                              : "value along z at m=" + format_double(c.slice_m));
  out << "regime,layer,t," << (along_m ? "m" : "z") << ",value\n";
  const int n = along_m ? c.grid.n_m : c.grid.n_z;
  for (const auto& g : s.grids) {
    const auto& layers = g.result.history.layers;
    for (std::size_t l = 0; l < layers.size(); ++l) {
      for (int k = 0; k < n; ++k) {
        const double x = along_m ? c.grid.m(k) : c.grid.z(k);
        const double v = along_m ? interpolate_value(layers[l], x, c.slice_z)
                                 : interpolate_value(layers[l], c.slice_m, x);
        out << g.name << ',' << l << ',' << format_double(layers[l].time()) << ','
            << format_double(x) << ',' << format_double(v) << "\n";
      }
    }
  }
  if (s.has_perfect) {
    for (std::size_t l = 0; l < s.perfect.times.size(); ++l) {
      for (int k = 0; k < n; ++k) {
        const double x = along_m ? c.grid.m(k) : c.grid.z(k);
        const double v = perfect_obs_value(s.perfect, s.perfect.times[l], along_m ? x : c.slice_m);
        out << "perfect_obs," << l << ',' << format_double(s.perfect.times[l]) << ','
            << format_double(x) << ',' << format_double(v) << "\n";
      }
    }
  }
  return out.str();
}

std::string comparison_csv(const RunConfig& c, const Solved& s) {
  std::ostringstream out;
  out << csv_preamble("value at t=0 along m at z=" + format_double(c.slice_z) +
                      "; values in cost units");
  out << "m";
  if (s.has_perfect) out << ",perfect_obs";
  for (auto it = s.grids.rbegin(); it != s.grids.rend(); ++it) out << ',' << it->name;
  out << "\n";
  for (int i = 0; i < c.grid.n_m; ++i) {
    const double m = c.grid.m(i);
    out << format_double(m);
    if (s.has_perfect) out << ',' << format_double(perfect_obs_value(s.perfect, 0.0, m));
    for (auto it = s.grids.rbegin(); it != s.grids.rend(); ++it) {
      out << ',' << format_double(interpolate_value(it->result.initial, m, c.slice_z));
    }
    out << "\n";
  }
  return out.str();
}

void append_paths(std::ostringstream& means, std::ostringstream& vars, const std::string& name,
                  const std::vector<BeliefTrajectory>& paths) {
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const auto& path = paths[p];
    for (std::size_t k = 0; k < path.times.size(); ++k) {
      means << name << ',' << p << ',' << k << ',' << format_double(path.times[k]) << ','
            << format_double(path.means[k]) << "\n";
      vars << name << ',' << p << ',' << k << ',' << format_double(path.times[k]) << ','
           << format_double(path.variances[k]) << "\n";
    }
  }
}

RegimeSummary summarize(const std::string& name, const std::vector<BeliefTrajectory>& paths,
                        const ModelParams& model) {
  RegimeSummary r;
  r.name = name;
  std::vector<BeliefTrajectory> complete;
  for (const auto& p : paths) {
    if (p.truncated) {
      ++r.truncated_paths;
    } else {
      complete.push_back(p);
    }
  }
  if (!complete.empty()) r.cost = estimate_cost(complete, model);
  return r;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RunSummary run(const RunConfig& config, std::ostream& log) {
  validate(config);
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());

  RunSummary summary;
  summary.static_check =
      check_monotonicity(config.grid, config.model, config.solver.dt, config.solver.grad_bound);
  const Solved solved = solve_all(config, log);

  write_file(dir / "value_t0.csv", value_t0_csv(config, solved), summary);
  write_file(dir / "value_m_slice.csv", slice_csv(config, solved, true), summary);
  write_file(dir / "value_z_slice.csv", slice_csv(config, solved, false), summary);
  write_file(dir / "comparison.csv", comparison_csv(config, solved), summary);

  const GaussianBelief start{config.paths.start_mean, config.paths.start_variance};
  std::vector<RegimeSummary> regimes;
  if (config.paths.n_paths > 0) {
    std::ostringstream means, vars;
    means << csv_preamble("simulated belief means; t in time units") << "regime,path,sample,t,m\n";
    vars << csv_preamble("simulated belief variances; t in time units")
         << "regime,path,sample,t,z\n";
    for (const auto& g : solved.grids) {
      log << "simulating " << config.paths.n_paths << " paths for " << g.name << "\n";
      const auto paths = simulate_paths(g.result.history, start, config.model, config.paths.n_paths,
                                        config.paths.seed, config.paths.drift, config.paths.threads);
      append_paths(means, vars, g.name, paths);
      auto r = summarize(g.name, paths, config.model);
      r.realized = g.result.worst_realized;
      r.has_grid = true;
      regimes.push_back(r);
    }
    if (solved.has_perfect) {
      log << "simulating " << config.paths.n_paths << " paths for perfect_obs\n";
      std::vector<BeliefTrajectory> paths;
      for (std::size_t p = 0; p < config.paths.n_paths; ++p) {
        paths.push_back(
            simulate_perfect(solved.perfect, start.mean, config.model, config.paths.seed, p));
      }
      append_paths(means, vars, "perfect_obs", paths);
      regimes.push_back(summarize("perfect_obs", paths, config.model));
    }
    write_file(dir / "paths_mean.csv", means.str(), summary);
    write_file(dir / "paths_var.csv", vars.str(), summary);
  } else {
    for (const auto& g : solved.grids) {
      RegimeSummary r;
      r.name = g.name;
      r.realized = g.result.worst_realized;
      r.has_grid = true;
      regimes.push_back(r);
    }
    if (solved.has_perfect) regimes.push_back(RegimeSummary{"perfect_obs", {}, 0, {}, false});
  }
  summary.regimes = regimes;

  std::ostringstream mono;
  mono << "static check (|dU/dm| <= " << format_double(config.solver.grad_bound)
       << "): " << summary.static_check.describe() << "\n";
  for (const auto& r : regimes) {
    if (r.has_grid) mono << r.name << " realised: " << r.realized.describe() << "\n";
  }
  mono << "domain: valid\n";
  write_file(dir / "monotonicity_report.txt", mono.str(), summary);

  write_file(dir / "config_effective.json", to_json(config), summary);

  std::ostringstream manifest;
  manifest << "version=" << BELIEF_HJB_VERSION << "\n";
  manifest << "compiler=" << __VERSION__ << "\n";
  manifest << "eigen=" << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
           << EIGEN_MINOR_VERSION << "\n";
  manifest << "config=config_effective.json\n";
  manifest << "regime=" << regime_name(config.regime) << "\n";
  manifest << "seed=" << config.paths.seed << "\n";
  manifest << "n_paths=" << config.paths.n_paths << "\n";
  manifest << "start=" << format_double(start.mean) << ',' << format_double(start.variance) << "\n";
  for (const auto& r : regimes) {
    if (config.paths.n_paths == 0) continue;
    manifest << "cost." << r.name << ".mean=" << format_double(r.cost.mean) << "\n";
    manifest << "cost." << r.name << ".standard_error=" << format_double(r.cost.standard_error)
             << "\n";
    manifest << "cost." << r.name << ".count=" << r.cost.count << "\n";
    manifest << "cost." << r.name << ".truncated=" << r.truncated_paths << "\n";
  }
  std::string files;
  for (const auto& f : summary.files) files += (files.empty() ? "" : ",") + f;
  manifest << "files=" << files << ",manifest.txt\n";
  write_file(dir / "manifest.txt", manifest.str(), summary);
  return summary;
}

std::string check_report(const RunConfig& config, bool* ok) {
  std::ostringstream out;
  bool good = true;
  const auto problems = config_violations(config);
  for (const auto& p : problems) out << "config: " << p << "\n";
  good = problems.empty();
  if (config.grid.n_m >= 3 && config.grid.n_z >= 2 && config.model.theta > 0.0) {
    const auto domain = validate_domain(config.grid, config.model);
    out << "domain: " << (domain.valid ? "valid" : "invalid") << "\n";
    if (config.solver.dt > 0.0 && config.solver.grad_bound > 0.0) {
      const auto report =
          check_monotonicity(config.grid, config.model, config.solver.dt, config.solver.grad_bound);
      out << "monotonicity (|dU/dm| <= " << format_double(config.solver.grad_bound)
          << "): " << report.describe() << "\n";
      good = good && report.holds;
    }
    good = good && domain.valid;
  }
  if (ok != nullptr) *ok = good;
  return out.str();
}

std::string characteristics_csv(const RunConfig& config, int samples) {
  if (samples < 2) throw ValidationError("characteristics need at least 2 samples");
  std::ostringstream out;
  out << csv_preamble("terminal characteristics; tau is reversed time");
  out << "root,m0,z0,tau,m,z,p,q\n";
  const Grid& g = config.grid;
  int root_id = 0;
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      const double m0 = g.m_min + (g.m_max - g.m_min) * a / 4.0;
      const double z0 = g.z_min + (g.z_max - g.z_min) * b / 4.0;
      const auto root = terminal_root(m0, z0);
      const auto consts = characteristic_constants(root, config.model);
      for (int k = 0; k < samples; ++k) {
        const double tau = config.model.horizon * k / (samples - 1);
        const auto s = characteristic_state(consts, root, tau, config.model);
        out << root_id << ',' << format_double(m0) << ',' << format_double(z0) << ','
            << format_double(tau) << ',' << format_double(s.m) << ',' << format_double(s.z) << ','
            << format_double(s.p) << ',' << format_double(s.q) << "\n";
      }
      ++root_id;
    }
  }
  return out.str();
}

std::vector<std::string> kalman_demo(std::uint64_t seed) {
  std::vector<std::string> lines;
  auto report = [&](const std::string& name, double err, double tol) {
    std::ostringstream l;
    l << (err <= tol ? "PASS " : "FAIL ") << name << " max_error=" << format_double(err)
      << " tol=" << format_double(tol);
    lines.push_back(l.str());
  };
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> positive(0.05, 2.0);
  const auto rule = QuadratureRule::gauss_hermite(20);
  NdExpectationRule nd_rule;
  nd_rule.gauss_hermite_nodes = 20;

  double gain_err = 0, update_err = 0, expect_err = 0, ham_err = 0;
  for (int k = 0; k < 100; ++k) {
    ModelParams p;
    p.theta = positive(rng);
    p.b = positive(rng);
    p.c_control = positive(rng);
    const double m = normal(rng), z = positive(rng), eps = positive(rng), y = normal(rng);
    const Eigen::MatrixXd s = Eigen::MatrixXd::Constant(1, 1, z);
    const Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
    gain_err = std::max(gain_err, std::abs(kalman_gain(s, h, eps)(0, 0) - z / (z + eps * eps)));
    const auto nd = kalman_update({Eigen::VectorXd::Constant(1, m), s}, h, eps,
                                  Eigen::VectorXd::Constant(1, y));
    const auto sc = gaussian_posterior({m, z}, y, eps);
    update_err = std::max({update_err, std::abs(nd.mean(0) - sc.mean),
                           std::abs(nd.cov(0, 0) - sc.variance)});
    auto phi = [](double a, double b) { return std::exp(-a * a) + std::sin(a) * b + a * a; };
    const double e_nd = expected_update_value(
        [&](const Eigen::VectorXd& v, const Eigen::MatrixXd& c) { return phi(v(0), c(0, 0)); },
        {Eigen::VectorXd::Constant(1, m), s}, h, eps, nd_rule);
    expect_err = std::max(expect_err, std::abs(e_nd - expected_posterior_value(phi, {m, z}, eps, rule)));
    const double dm = normal(rng), dz = normal(rng);
    const NdModelParams ndp{Eigen::VectorXd::Constant(1, p.theta), Eigen::MatrixXd::Constant(1, 1, p.b),
                            Eigen::VectorXd::Constant(1, p.c_control), h, eps};
    const NdGradient grad{Eigen::VectorXd::Constant(1, dm), Eigen::MatrixXd::Constant(1, 1, dz)};
    ham_err = std::max(ham_err, std::abs(hamiltonian_nd(Eigen::VectorXd::Constant(1, m), s, grad, ndp) -
                                         forward_hamiltonian(m, z, dm, dz, p)));
  }
  report("gain_d1", gain_err, 1e-12);
  report("update_d1", update_err, 1e-12);
  report("expectation_d1", expect_err, 1e-12);
  report("hamiltonian_d1", ham_err, 1e-12);

  double min_eig = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int d = 1 + k % 4;
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) a(i, j) = normal(rng);
    }
    const Eigen::MatrixXd s = a * a.transpose();
    Eigen::MatrixXd h(1 + k % 2, d);
    for (int i = 0; i < h.rows(); ++i) {
      for (int j = 0; j < d; ++j) h(i, j) = normal(rng);
    }
    const auto post = kalman_update({Eigen::VectorXd::Zero(d), s}, h, positive(rng),
                                    Eigen::VectorXd::Zero(h.rows()));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(post.cov, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
  }
  report("posterior_psd", std::max(0.0, -min_eig), 1e-10);
  return lines;
}

}  // namespace belief_hjb::cli
