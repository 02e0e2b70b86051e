#include "belief_hjb/cli/config.hpp"

#include <cmath>
#include <sstream>

#ifdef BELIEF_HJB_VENDORED_JSON
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif

#include "belief_hjb/characteristics.hpp"

namespace belief_hjb::cli {
namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "key" in the document, 0 if absent.
int line_of_key(std::string_view text, std::string_view key) {
  const std::string quoted = "\"" + std::string(key) + "\"";
  const auto pos = text.find(quoted);
  if (pos == std::string_view::npos) return 0;
  int line = 1;
  for (std::size_t k = 0; k < pos; ++k) line += text[k] == '\n';
  return line;
}

class Reader {
 public:
  Reader(std::string_view text, std::vector<std::string>& problems)
      : text_(text), problems_(problems) {}

  void fail(const std::string& path, const std::string& what) {
    const auto dot = path.rfind('.');
    const int line = line_of_key(text_, dot == std::string::npos ? path : path.substr(dot + 1));
    std::ostringstream msg;
    if (line > 0) msg << "line " << line << ": ";
    msg << "key '" << path << "': " << what;
    problems_.push_back(msg.str());
  }

  // Rejects keys outside `allowed`.
  void only(const json& obj, const std::string& prefix, std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* a : allowed) known = known || key == a;
      if (!known) fail(prefix.empty() ? key : prefix + "." + key, "unknown key");
    }
  }

  const json* section(const json& root, const std::string& name) {
    if (!root.contains(name)) return nullptr;
    const json& s = root.at(name);
    if (!s.is_object()) {
      fail(name, "expected an object");
      return nullptr;
    }
    return &s;
  }

  void number(const json* obj, const std::string& prefix, const char* key, double& out) {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number()) return fail(prefix + "." + key, "expected a number");
    out = v.get<double>();
  }

  template <class Int>
  void integer(const json* obj, const std::string& prefix, const char* key, Int& out) {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_number_integer()) return fail(prefix + "." + key, "expected an integer");
    if constexpr (std::is_unsigned_v<Int>) {
      if (!v.is_number_unsigned()) return fail(prefix + "." + key, "expected a non-negative integer");
      out = static_cast<Int>(v.get<std::uint64_t>());
    } else {
      out = static_cast<Int>(v.get<std::int64_t>());
    }
  }

  void boolean(const json* obj, const std::string& prefix, const char* key, bool& out) {
    if (obj == nullptr || !obj->contains(key)) return;
    const json& v = obj->at(key);
    if (!v.is_boolean()) return fail(prefix + "." + key, "expected true or false");
    out = v.get<bool>();
  }

  bool string(const json* obj, const std::string& prefix, const char* key, std::string& out) {
    if (obj == nullptr || !obj->contains(key)) return false;
    const json& v = obj->at(key);
    if (!v.is_string()) {
      fail(prefix + "." + key, "expected a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }

 private:
  std::string_view text_;
  std::vector<std::string>& problems_;
};

std::string join(const std::vector<std::string>& items) {
  std::string out = "invalid configuration:";
  for (const auto& p : items) out += "\n  - " + p;
  return out;
}

bool aligned(double t, double dt) {
  const double ratio = t / dt;
  return std::abs(ratio - std::round(ratio)) * dt <= 1e-9;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : ValidationError(join(problems)), problems_(std::move(problems)) {}

std::string_view regime_name(RunRegime r) {
  switch (r) {
    case RunRegime::kNoObs: return "no_obs";
    case RunRegime::kNoisyObs: return "noisy_obs";
    case RunRegime::kPerfectObs: return "perfect_obs";
    case RunRegime::kAll: return "all";
  }
  return "all";
}

RunRegime parse_regime(std::string_view name) {
  for (auto r : {RunRegime::kNoObs, RunRegime::kNoisyObs, RunRegime::kPerfectObs, RunRegime::kAll}) {
    if (regime_name(r) == name) return r;
  }
  throw ValidationError("unknown regime '" + std::string(name) +
                        "' (expected no_obs, noisy_obs, perfect_obs or all)");
}

std::vector<double> evenly_spaced_observations(double interval, double horizon) {
  std::vector<double> out;
  if (!(interval > 0.0) || !(horizon > 0.0)) return out;
  for (int k = 1;; ++k) {
    const double t = k * interval;
    if (t >= horizon - 1e-12) break;
    out.push_back(t);
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    validate(cfg);
    return cfg;
  }

  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << "line " << line << ", column " << col << ": JSON syntax error: " << e.what();
    throw ConfigError({msg.str()});
  }
  if (!root.is_object()) throw ConfigError({"top level must be a JSON object"});

  std::vector<std::string> problems;
  Reader r(text, problems);
  r.only(root, "", {"model", "grid", "solver", "regime", "paths", "output"});

  if (const json* m = r.section(root, "model")) {
    r.only(*m, "model",
           {"theta", "b", "c_control", "eps", "horizon", "obs_times", "obs_interval"});
    r.number(m, "model", "theta", cfg.model.theta);
    r.number(m, "model", "b", cfg.model.b);
    r.number(m, "model", "c_control", cfg.model.c_control);
    r.number(m, "model", "eps", cfg.model.eps);
    r.number(m, "model", "horizon", cfg.model.horizon);
    const bool has_times = m->contains("obs_times");
    const bool has_interval = m->contains("obs_interval");
    if (has_times && has_interval) {
      r.fail("model.obs_interval", "give either obs_times or obs_interval, not both");
    }
    if (has_times) {
      const json& v = m->at("obs_times");
      bool ok = v.is_array();
      if (ok) {
        for (const auto& t : v) ok = ok && t.is_number();
      }
      if (!ok) {
        r.fail("model.obs_times", "expected an array of numbers");
      } else {
        cfg.model.obs_times = v.get<std::vector<double>>();
      }
    } else {
      double interval = 0.25;
      r.number(m, "model", "obs_interval", interval);
      if (!(interval > 0.0)) {
        r.fail("model.obs_interval", "must be > 0");
      } else {
        cfg.model.obs_times = evenly_spaced_observations(interval, cfg.model.horizon);
      }
    }
  }

  if (const json* g = r.section(root, "grid")) {
    r.only(*g, "grid", {"m_min", "m_max", "z_min", "z_max", "n_m", "n_z"});
    r.number(g, "grid", "m_min", cfg.grid.m_min);
    r.number(g, "grid", "m_max", cfg.grid.m_max);
    r.number(g, "grid", "z_min", cfg.grid.z_min);
    r.number(g, "grid", "z_max", cfg.grid.z_max);
    r.integer(g, "grid", "n_m", cfg.grid.n_m);
    r.integer(g, "grid", "n_z", cfg.grid.n_z);
  }

  if (const json* s = r.section(root, "solver")) {
    r.only(*s, "solver",
           {"dt", "grad_bound", "check_monotonicity_each_step", "quadrature_nodes",
            "extrapolation"});
    r.number(s, "solver", "dt", cfg.solver.dt);
    r.number(s, "solver", "grad_bound", cfg.solver.grad_bound);
    r.boolean(s, "solver", "check_monotonicity_each_step", cfg.solver.check_monotonicity_each_step);
    r.integer(s, "solver", "quadrature_nodes", cfg.quadrature_nodes);
    std::string mode;
    if (r.string(s, "solver", "extrapolation", mode)) {
      if (mode == "quadratic") {
        cfg.extrapolation = Extrapolation::kQuadratic;
      } else if (mode == "clamp") {
        cfg.extrapolation = Extrapolation::kClamp;
      } else {
        r.fail("solver.extrapolation", "expected \"quadratic\" or \"clamp\"");
      }
    }
  }

  if (root.contains("regime")) {
    std::string name;
    if (r.string(&root, "", "regime", name)) {
      try {
        cfg.regime = parse_regime(name);
      } catch (const ValidationError& e) {
        r.fail("regime", e.what());
      }
    }
  }

  if (const json* p = r.section(root, "paths")) {
    r.only(*p, "paths", {"n_paths", "seed", "start_mean", "start_variance", "drift", "threads"});
    r.integer(p, "paths", "n_paths", cfg.paths.n_paths);
    r.integer(p, "paths", "seed", cfg.paths.seed);
    r.number(p, "paths", "start_mean", cfg.paths.start_mean);
    r.number(p, "paths", "start_variance", cfg.paths.start_variance);
    r.integer(p, "paths", "threads", cfg.paths.threads);
    std::string drift;
    if (r.string(p, "paths", "drift", drift)) {
      if (drift == "optimal_control") {
        cfg.paths.drift = DriftMode::kOptimalControl;
      } else if (drift == "gradient") {
        cfg.paths.drift = DriftMode::kGradientDrift;
      } else {
        r.fail("paths.drift", "expected \"optimal_control\" or \"gradient\"");
      }
    }
  }

  if (const json* o = r.section(root, "output")) {
    r.only(*o, "output", {"dir", "slice_m", "slice_z"});
    r.string(o, "output", "dir", cfg.output_dir);
    r.number(o, "output", "slice_m", cfg.slice_m);
    r.number(o, "output", "slice_z", cfg.slice_z);
  }

  // Field-level problems first, then every invariant of what could be read.
  auto more = config_violations(cfg);
  problems.insert(problems.end(), more.begin(), more.end());
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

std::vector<std::string> config_violations(const RunConfig& c) {
  std::vector<std::string> out = c.model.violations();
  const Grid& g = c.grid;
  bool grid_ok = true;
  auto add = [&](const std::string& s) { out.push_back(s); };
  if (!(g.n_m >= 3)) add("grid.n_m >= 3"), grid_ok = false;
  if (!(g.n_z >= 2)) add("grid.n_z >= 2"), grid_ok = false;
  if (!(g.m_min < g.m_max)) add("grid.m_min < grid.m_max"), grid_ok = false;
  if (!(g.z_min < g.z_max)) add("grid.z_min < grid.z_max"), grid_ok = false;
  if (!(g.z_min >= 0.0)) add("grid.z_min >= 0"), grid_ok = false;
  if (grid_ok && c.model.theta > 0.0) {
    for (const auto& reason : validate_domain(g, c.model).reasons) add("domain: " + reason);
  }
  if (!(c.solver.dt > 0.0)) add("solver.dt > 0");
  if (!(c.solver.grad_bound > 0.0)) add("solver.grad_bound > 0");
  if (!(c.quadrature_nodes >= 1 && c.quadrature_nodes <= 200)) {
    add("solver.quadrature_nodes in [1, 200]");
  }
  if (c.solver.dt > 0.0) {
    if (c.model.horizon > 0.0 && !aligned(c.model.horizon, c.solver.dt)) {
      add("model.horizon is not a whole number of solver.dt steps");
    }
    for (std::size_t i = 0; i < c.model.obs_times.size(); ++i) {
      if (!aligned(c.model.obs_times[i], c.solver.dt)) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "observation time " << c.model.obs_times[i]
            << " is not aligned with the time grid (dt = " << c.solver.dt << ")";
        add(msg.str());
      }
    }
  }
  if (!(c.paths.start_variance >= 0.0)) add("paths.start_variance >= 0");
  if (grid_ok && c.paths.n_paths > 0 &&
      !(c.paths.start_mean >= g.m_min && c.paths.start_mean <= g.m_max &&
        c.paths.start_variance >= g.z_min && c.paths.start_variance <= g.z_max)) {
    add("paths start belief must lie inside the grid box");
  }
  if (!(c.paths.threads >= 1)) add("paths.threads >= 1");
  if (grid_ok && !(c.slice_m >= g.m_min && c.slice_m <= g.m_max)) {
    add("output.slice_m must lie in [m_min, m_max]");
  }
  if (grid_ok && !(c.slice_z >= g.z_min && c.slice_z <= g.z_max)) {
    add("output.slice_z must lie in [z_min, z_max]");
  }
  if (c.output_dir.empty()) add("output.dir must not be empty");
  return out;
}

void validate(const RunConfig& config) {
  auto problems = config_violations(config);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

std::string to_json(const RunConfig& c) {
  json j;
  j["model"] = {{"theta", c.model.theta},         {"b", c.model.b},
                {"c_control", c.model.c_control}, {"eps", c.model.eps},
                {"horizon", c.model.horizon},     {"obs_times", c.model.obs_times}};
  j["grid"] = {{"m_min", c.grid.m_min}, {"m_max", c.grid.m_max}, {"z_min", c.grid.z_min},
               {"z_max", c.grid.z_max}, {"n_m", c.grid.n_m},     {"n_z", c.grid.n_z}};
  j["solver"] = {{"dt", c.solver.dt},
                 {"grad_bound", c.solver.grad_bound},
                 {"check_monotonicity_each_step", c.solver.check_monotonicity_each_step},
                 {"quadrature_nodes", c.quadrature_nodes},
                 {"extrapolation",
                  c.extrapolation == Extrapolation::kClamp ? "clamp" : "quadratic"}};
  j["regime"] = std::string(regime_name(c.regime));
  j["paths"] = {{"n_paths", c.paths.n_paths},
                {"seed", c.paths.seed},
                {"start_mean", c.paths.start_mean},
                {"start_variance", c.paths.start_variance},
                {"drift", c.paths.drift == DriftMode::kGradientDrift ? "gradient" : "optimal_control"},
                {"threads", c.paths.threads}};
  j["output"] = {{"dir", c.output_dir}, {"slice_m", c.slice_m}, {"slice_z", c.slice_z}};
  return j.dump(2) + "\n";
}

}  // namespace belief_hjb::cli
