#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "gradrom/config.hpp"
#include "gradrom/diagnostics.hpp"
#include "gradrom/io.hpp"
#include "gradrom/models.hpp"
#include "gradrom/reduction.hpp"
#include "gradrom/rom.hpp"

namespace gradrom {

// Experiment drivers behind the CLI verbs. Every stage reads its inputs from
// the previous stage's files under config.out_dir and leaves its own
// artifacts there, so stages can run in separate processes.

class Discretization {
 public:
  explicit Discretization(const ExperimentConfig& config);
  const Mesh& mesh() const { return *mesh_; }
  const DGSpace& space() const { return *space_; }
  const AssembledOperators& ops() const { return ops_; }

 private:
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<DGSpace> space_;
  AssembledOperators ops_;
};

struct FomResult {
  Trajectory trajectory;
  Vector u0, v0;
  double wall_seconds = 0.0;
};
FomResult cmd_fom(const ExperimentConfig& config);

struct ReduceResult {
  PodBasis pod_u, pod_v;
  std::optional<DeimOperator> deim1, deim2;
  double offline_seconds = 0.0;
};
ReduceResult cmd_reduce(const ExperimentConfig& config);

struct RomResult {
  Trajectory trajectory;  // reduced coefficients, recorded every step
  std::vector<double> lifted_energy;
  double online_seconds = 0.0;
  double offline_seconds = 0.0;
};
RomResult cmd_rom(const ExperimentConfig& config, RomMode mode);

struct CompareResult {
  Index k_u = 0, k_v = 0, m1 = 0, m2 = 0;
  double state_error_u_pod = 0.0, state_error_v_pod = 0.0;
  double state_error_u_deim = 0.0, state_error_v_deim = 0.0;
  double energy_error_pod = 0.0, energy_error_deim = 0.0;
  double fom_seconds = 0.0, pod_online_seconds = 0.0, deim_online_seconds = 0.0;
  double bound_satisfied_fraction = 0.0;
  bool energy_increases_only_at_bound_violations = true;
  Index pod_dissipation_violations = 0;
  Index deim_dissipation_violations = 0;
  double r_inv_norm = 0.0, inv_ptq_1 = 0.0, inv_ptq_2 = 0.0;
};

// Runs the reduced models (per config.rom_mode), then writes the error,
// bound and timing reports next to the stored artifacts.
CompareResult cmd_compare(const ExperimentConfig& config);

// Recomputes the comparison reports from stored artifacts without re-running.
CompareResult cmd_report(const ExperimentConfig& config);

std::filesystem::path fom_dir(const ExperimentConfig& config);
std::filesystem::path reduce_dir(const ExperimentConfig& config);
std::filesystem::path rom_dir(const ExperimentConfig& config, RomMode mode);
std::filesystem::path compare_dir(const ExperimentConfig& config);

}  // namespace gradrom
