#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "gradrom/integrator.hpp"
#include "gradrom/models.hpp"
#include "gradrom/reduction.hpp"
#include "gradrom/types.hpp"

namespace gradrom {

enum class RomModeChoice { galerkin, deim, both };
enum class FieldOutput { none, final };

struct ExperimentConfig {
  ModelKind model = ModelKind::rgl;
  double mu = 0.5;
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  Index nx = 32;
  Index ny = 32;
  int q_poly = 1;
  double kappa = 0.0;  // 0: default 10 q^2
  double dt = 0.01;
  double t_max = 100.0;
  double steady_tol = 1e-4;
  double steady_floor = 1e-14;
  std::uint64_t seed = 2024;
  Index snapshot_stride = 1;
  double pod_eps = 1e-4;
  double deim_eps = 1e-6;
  RsvdOptions rsvd;
  RomModeChoice rom_mode = RomModeChoice::both;
  double newton_tol = 1e-10;
  int max_newton_iters = 10;
  LinearSolverKind linear_solver = LinearSolverKind::direct;
  double linear_tol = 1e-13;
  int linear_max_iters = 600;
  bool rom_steady_stop = false;
  FieldOutput field_output = FieldOutput::final;
  std::string out_dir = "out";

  double resolved_kappa() const;
  SolverConfig solver() const;
  TimeGrid grid() const { return {dt, t_max}; }
  void validate() const;
};

// The two shipped experiment presets.
ExperimentConfig rgl_preset();
ExperimentConfig sh_preset();

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json_text(const ExperimentConfig& config);
void save_config(const std::filesystem::path& path, const ExperimentConfig& config);

}  // namespace gradrom
