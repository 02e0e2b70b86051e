#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#ifdef BELIEF_HJB_SINGLE_HEADER_CLI11
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif

#include "belief_hjb/cli/config.hpp"
#include "belief_hjb/cli/run.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 2;
constexpr int kNumerical = 3;

struct Overrides {
  std::string config_path;
  std::optional<std::string> regime;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> paths;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<std::string> check_cfl;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--regime", o.regime, "no_obs, noisy_obs, perfect_obs or all");
  cmd->add_option("--seed", o.seed, "base seed for path simulation");
  cmd->add_option("--paths", o.paths, "number of simulated paths per regime");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads for path simulation");
  cmd->add_option("--check-cfl", o.check_cfl, "verify monotonicity at every step")
      ->check(CLI::IsMember({"on", "off"}));
}

belief_hjb::cli::RunConfig load(const Overrides& o) {
  std::string text;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) throw belief_hjb::ValidationError("cannot read config file " + o.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  auto cfg = belief_hjb::cli::parse_config(text);
  if (o.regime) cfg.regime = belief_hjb::cli::parse_regime(*o.regime);
  if (o.seed) cfg.paths.seed = *o.seed;
  if (o.paths) cfg.paths.n_paths = *o.paths;
  if (o.out) cfg.output_dir = *o.out;
  if (o.threads) cfg.paths.threads = *o.threads;
  if (o.check_cfl) cfg.solver.check_monotonicity_each_step = *o.check_cfl == "on";
  belief_hjb::cli::validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean/variance HJB solver for a partially observed Ornstein-Uhlenbeck control problem"};
  app.require_subcommand(1);

  Overrides solve_o, sim_o, check_o, char_o;
  auto* solve = app.add_subcommand("solve", "solve the value function and write value CSVs");
  add_common(solve, solve_o);
  auto* simulate = app.add_subcommand("simulate", "solve, then simulate optimal belief paths");
  add_common(simulate, sim_o);
  auto* check = app.add_subcommand("check", "domain and monotonicity checks only");
  add_common(check, check_o);
  auto* chars = app.add_subcommand("characteristics", "write characteristics.csv");
  add_common(chars, char_o);
  int samples = 101;
  chars->add_option("--samples", samples, "samples per curve");
  auto* kalman = app.add_subcommand("kalman-demo", "run the one-dimensional reduction checks");
  std::uint64_t kalman_seed = 1;
  kalman->add_option("--seed", kalman_seed, "seed for the random inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (solve->parsed()) {
      auto cfg = load(solve_o);
      cfg.paths.n_paths = 0;
      const auto summary = belief_hjb::cli::run(cfg, std::cerr);
      std::cout << "wrote " << summary.files.size() << " files to " << cfg.output_dir << "\n";
    } else if (simulate->parsed()) {
      const auto cfg = load(sim_o);
      const auto summary = belief_hjb::cli::run(cfg, std::cerr);
      for (const auto& r : summary.regimes) {
        std::cout << r.name << ": mean cost " << belief_hjb::cli::format_double(r.cost.mean)
                  << " (se " << belief_hjb::cli::format_double(r.cost.standard_error) << ", "
                  << r.cost.count << " paths, " << r.truncated_paths << " truncated)\n";
      }
      std::cout << "wrote " << summary.files.size() << " files to " << cfg.output_dir << "\n";
    } else if (check->parsed()) {
      const auto cfg = load(check_o);
      bool ok = false;
      std::cout << belief_hjb::cli::check_report(cfg, &ok);
      return ok ? kOk : kNumerical;
    } else if (chars->parsed()) {
      const auto cfg = load(char_o);
      std::filesystem::create_directories(cfg.output_dir);
      const auto path = std::filesystem::path(cfg.output_dir) / "characteristics.csv";
      std::ofstream(path, std::ios::binary) << belief_hjb::cli::characteristics_csv(cfg, samples);
      std::cout << "wrote " << path.string() << "\n";
    } else if (kalman->parsed()) {
      bool all = true;
      for (const auto& line : belief_hjb::cli::kalman_demo(kalman_seed)) {
        std::cout << line << "\n";
        all = all && line.rfind("PASS", 0) == 0;
      }
      return all ? kOk : kNumerical;
    }
  } catch (const belief_hjb::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const belief_hjb::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
