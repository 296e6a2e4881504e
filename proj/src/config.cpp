#include "gradrom/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gradrom/assembly.hpp"

namespace gradrom {

using nlohmann::json;

double ExperimentConfig::resolved_kappa() const {
  return kappa > 0.0 ? kappa : default_penalty(q_poly);
}

SolverConfig ExperimentConfig::solver() const {
  SolverConfig s;
  s.newton_tol = newton_tol;
  s.max_newton_iters = max_newton_iters;
  s.linear_solver = linear_solver;
  s.linear_tol = linear_tol;
  s.linear_max_iters = linear_max_iters;
  s.steady_tol = steady_tol;
  s.steady_floor = steady_floor;
  return s;
}

void ExperimentConfig::validate() const {
  if (!(domain_hi > domain_lo)) throw ConfigError("config: domain upper bound must exceed lower");
  if (nx < 1 || ny < 1) throw ConfigError("config: nx and ny must be at least 1");
  if (q_poly != 1 && q_poly != 2) throw ConfigError("config: q_poly must be 1 or 2");
  if (kappa < 0.0) throw ConfigError("config: kappa must be positive (or 0 for the default)");
  if (dt <= 0.0) throw ConfigError("config: dt must be positive");
  if (t_max <= 0.0) throw ConfigError("config: t_max must be positive");
  if (steady_tol <= 0.0) throw ConfigError("config: steady_tol must be positive");
  if (steady_floor <= 0.0) throw ConfigError("config: steady_floor must be positive");
  if (snapshot_stride < 1) throw ConfigError("config: snapshot_stride must be at least 1");
  if (pod_eps < 0.0 || pod_eps >= 1.0) throw ConfigError("config: pod_eps must lie in [0,1)");
  if (deim_eps < 0.0 || deim_eps >= 1.0) throw ConfigError("config: deim_eps must lie in [0,1)");
  if (newton_tol <= 0.0) throw ConfigError("config: newton_tol must be positive");
  if (max_newton_iters < 0) throw ConfigError("config: max_newton_iters must be nonnegative");
  if (linear_tol <= 0.0) throw ConfigError("config: linear_tol must be positive");
  if (linear_max_iters < 1) throw ConfigError("config: linear_max_iters must be positive");
  if (rsvd.power_iters < 0) throw ConfigError("config: rsvd power_iters must be nonnegative");
  if (rsvd.initial_rank < 1) throw ConfigError("config: rsvd initial_rank must be positive");
  if (out_dir.empty()) throw ConfigError("config: out_dir must not be empty");
}

ExperimentConfig rgl_preset() {
  ExperimentConfig c;
  c.model = ModelKind::rgl;
  c.mu = 0.5;
  c.domain_lo = 0.0;
  c.domain_hi = 256.0;
  c.nx = c.ny = 32;
  c.dt = 0.01;
  c.t_max = 500.0;
  c.steady_tol = 1e-4;
  c.seed = 2024;
  c.snapshot_stride = 1;
  c.pod_eps = 1e-4;
  c.deim_eps = 1e-6;
  c.linear_solver = LinearSolverKind::direct;
  c.out_dir = "out_rgl";
  return c;
}

ExperimentConfig sh_preset() {
  ExperimentConfig c;
  c.model = ModelKind::sh;
  c.mu = 0.3;
  c.domain_lo = 0.0;
  c.domain_hi = 100.0;
  c.nx = c.ny = 32;
  c.dt = 0.01;
  c.t_max = 100.0;
  c.steady_tol = 1e-7;
  c.seed = 2024;
  // long run: keep the snapshot matrices at a sane size, and solve the
  // stationary-pattern phase with the frozen-factor CG
  c.snapshot_stride = 4;
  c.pod_eps = 1e-6;
  c.deim_eps = 1e-8;
  c.linear_solver = LinearSolverKind::frozen_pcg;
  c.out_dir = "out_sh";
  return c;
}

namespace {

const std::set<std::string> kKnownKeys = {
    "model", "mu", "domain", "nx", "ny", "q_poly", "kappa", "dt", "t_max",
    "steady_tol", "steady_floor", "seed", "snapshot_stride", "pod_eps", "deim_eps",
    "rsvd", "rom_mode", "newton_tol", "max_newton_iters", "linear_solver", "linear_tol",
    "linear_max_iters", "rom_steady_stop", "field_output", "out_dir"};

const std::set<std::string> kKnownRsvdKeys = {"oversampling", "power_iters", "initial_rank"};

template <class T>
void read_field(const json& j, const char* key, T& value) {
  if (!j.contains(key)) return;
  try {
    value = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, _] : j.items())
    if (!kKnownKeys.count(key)) throw ConfigError("config: unknown key '" + key + "'");

  ExperimentConfig c;
  if (j.contains("model")) {
    const std::string m = j.at("model").get<std::string>();
    if (m == "rgl")
      c = rgl_preset();
    else if (m == "sh")
      c = sh_preset();
    else
      throw ConfigError("config: model must be 'rgl' or 'sh'");
  }

  read_field(j, "mu", c.mu);
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (!d.is_array() || d.size() != 2)
      throw ConfigError("config: domain must be an array [lo, hi]");
    c.domain_lo = d.at(0).get<double>();
    c.domain_hi = d.at(1).get<double>();
  }
  read_field(j, "nx", c.nx);
  read_field(j, "ny", c.ny);
  read_field(j, "q_poly", c.q_poly);
  read_field(j, "kappa", c.kappa);
  read_field(j, "dt", c.dt);
  read_field(j, "t_max", c.t_max);
  read_field(j, "steady_tol", c.steady_tol);
  read_field(j, "steady_floor", c.steady_floor);
  read_field(j, "seed", c.seed);
  read_field(j, "snapshot_stride", c.snapshot_stride);
  read_field(j, "pod_eps", c.pod_eps);
  read_field(j, "deim_eps", c.deim_eps);
  if (j.contains("rsvd")) {
    const auto& r = j.at("rsvd");
    if (!r.is_object()) throw ConfigError("config: rsvd must be an object");
    for (const auto& [key, _] : r.items())
      if (!kKnownRsvdKeys.count(key)) throw ConfigError("config: unknown rsvd key '" + key + "'");
    if (r.contains("oversampling")) {
      if (r.at("oversampling").is_string()) {
        if (r.at("oversampling").get<std::string>() != "k")
          throw ConfigError("config: rsvd oversampling must be a number or \"k\"");
        c.rsvd.oversampling = -1;
      } else {
        c.rsvd.oversampling = r.at("oversampling").get<Index>();
      }
    }
    read_field(r, "power_iters", c.rsvd.power_iters);
    read_field(r, "initial_rank", c.rsvd.initial_rank);
  }
  if (j.contains("rom_mode")) {
    const std::string m = j.at("rom_mode").get<std::string>();
    if (m == "galerkin")
      c.rom_mode = RomModeChoice::galerkin;
    else if (m == "deim")
      c.rom_mode = RomModeChoice::deim;
    else if (m == "both")
      c.rom_mode = RomModeChoice::both;
    else
      throw ConfigError("config: rom_mode must be 'galerkin', 'deim' or 'both'");
  }
  read_field(j, "newton_tol", c.newton_tol);
  read_field(j, "max_newton_iters", c.max_newton_iters);
  if (j.contains("linear_solver")) {
    const std::string m = j.at("linear_solver").get<std::string>();
    if (m == "direct")
      c.linear_solver = LinearSolverKind::direct;
    else if (m == "frozen_pcg")
      c.linear_solver = LinearSolverKind::frozen_pcg;
    else
      throw ConfigError("config: linear_solver must be 'direct' or 'frozen_pcg'");
  }
  read_field(j, "linear_tol", c.linear_tol);
  read_field(j, "linear_max_iters", c.linear_max_iters);
  read_field(j, "rom_steady_stop", c.rom_steady_stop);
  if (j.contains("field_output")) {
    const std::string m = j.at("field_output").get<std::string>();
    if (m == "none")
      c.field_output = FieldOutput::none;
    else if (m == "final")
      c.field_output = FieldOutput::final;
    else
      throw ConfigError("config: field_output must be 'none' or 'final'");
  }
  read_field(j, "out_dir", c.out_dir);

  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return config_from_json_text(buf.str());
}

std::string config_to_json_text(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model == ModelKind::rgl ? "rgl" : "sh";
  j["mu"] = c.mu;
  j["domain"] = {c.domain_lo, c.domain_hi};
  j["nx"] = c.nx;
  j["ny"] = c.ny;
  j["q_poly"] = c.q_poly;
  j["kappa"] = c.kappa;
  j["dt"] = c.dt;
  j["t_max"] = c.t_max;
  j["steady_tol"] = c.steady_tol;
  j["steady_floor"] = c.steady_floor;
  j["seed"] = c.seed;
  j["snapshot_stride"] = c.snapshot_stride;
  j["pod_eps"] = c.pod_eps;
  j["deim_eps"] = c.deim_eps;
  j["rsvd"] = {{"oversampling", c.rsvd.oversampling},
               {"power_iters", c.rsvd.power_iters},
               {"initial_rank", c.rsvd.initial_rank}};
  j["rom_mode"] = c.rom_mode == RomModeChoice::galerkin
                      ? "galerkin"
                      : (c.rom_mode == RomModeChoice::deim ? "deim" : "both");
  j["newton_tol"] = c.newton_tol;
  j["max_newton_iters"] = c.max_newton_iters;
  j["linear_solver"] = c.linear_solver == LinearSolverKind::direct ? "direct" : "frozen_pcg";
  j["linear_tol"] = c.linear_tol;
  j["linear_max_iters"] = c.linear_max_iters;
  j["rom_steady_stop"] = c.rom_steady_stop;
  j["field_output"] = c.field_output == FieldOutput::none ? "none" : "final";
  j["out_dir"] = c.out_dir;
  return j.dump(2) + "\n";
}

void save_config(const std::filesystem::path& path, const ExperimentConfig& config) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config: " + path.string());
  out << config_to_json_text(config);
}

}  // namespace gradrom
