// Experiment driver: gradient reaction-diffusion full-order runs, POD/DEIM
// reduction and structure-preservation reports.
//
//   gradrom fom     --preset rgl --out out_rgl
//   gradrom reduce  --preset rgl --out out_rgl
//   gradrom rom     --preset rgl --out out_rgl [--mode galerkin|deim|both]
//   gradrom compare --preset rgl --out out_rgl
//   gradrom report  --preset rgl --out out_rgl
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O error.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gradrom/pipeline.hpp"

namespace {

gradrom::ExperimentConfig resolve_config(const std::string& preset, const std::string& config_path,
                                         const std::string& out, std::optional<std::uint64_t> seed,
                                         const std::string& mode) {
  gradrom::ExperimentConfig config;
  if (!config_path.empty())
    config = gradrom::load_config(config_path);
  else if (preset == "rgl")
    config = gradrom::rgl_preset();
  else if (preset == "sh")
    config = gradrom::sh_preset();
  else
    throw gradrom::ConfigError("either --config or --preset {rgl,sh} is required");
  if (!out.empty()) config.out_dir = out;
  if (seed) config.seed = *seed;
  if (!mode.empty()) {
    if (mode == "galerkin")
      config.rom_mode = gradrom::RomModeChoice::galerkin;
    else if (mode == "deim")
      config.rom_mode = gradrom::RomModeChoice::deim;
    else if (mode == "both")
      config.rom_mode = gradrom::RomModeChoice::both;
    else
      throw gradrom::ConfigError("--mode must be galerkin, deim or both");
  }
  config.validate();
  return config;
}

void print_compare(const gradrom::CompareResult& r) {
  std::printf("modes: k_u=%lld k_v=%lld m1=%lld m2=%lld\n", (long long)r.k_u, (long long)r.k_v,
              (long long)r.m1, (long long)r.m2);
  std::printf("state errors  pod: u %.6e v %.6e   deim: u %.6e v %.6e\n", r.state_error_u_pod,
              r.state_error_v_pod, r.state_error_u_deim, r.state_error_v_deim);
  std::printf("energy errors pod: %.6e   deim: %.6e\n", r.energy_error_pod, r.energy_error_deim);
  std::printf("wall seconds  fom: %.3f  pod online: %.3f  deim online: %.3f\n", r.fom_seconds,
              r.pod_online_seconds, r.deim_online_seconds);
  std::printf("bound satisfied fraction: %.4f (increases only at violations: %s)\n",
              r.bound_satisfied_fraction,
              r.energy_increases_only_at_bound_violations ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient reaction-diffusion solver with POD/DEIM reduction"};
  app.require_subcommand(1);

  std::string preset, config_path, out, mode;
  std::optional<std::uint64_t> seed;
  app.add_option("--preset", preset, "experiment preset: rgl or sh");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out, "output directory (overrides the config)");
  app.add_option("--seed", seed, "random seed (overrides the config)");

  auto* c_fom = app.add_subcommand("fom", "run the full-order model, write snapshots");
  auto* c_red = app.add_subcommand("reduce", "build POD bases and DEIM operators");
  auto* c_rom = app.add_subcommand("rom", "integrate the reduced models");
  c_rom->add_option("--mode", mode, "galerkin, deim or both");
  auto* c_cmp = app.add_subcommand("compare", "run reduced models and write reports");
  auto* c_rep = app.add_subcommand("report", "recompute reports from stored artifacts");

  CLI11_PARSE(app, argc, argv);

  try {
    const gradrom::ExperimentConfig config =
        resolve_config(preset, config_path, out, seed, mode);
    if (c_fom->parsed()) {
      const auto res = gradrom::cmd_fom(config);
      std::printf("fom: %lld steps, reached_tol=%s, %.3f s\n", (long long)res.trajectory.steps,
                  res.trajectory.reached_tol ? "yes" : "no", res.wall_seconds);
    } else if (c_red->parsed()) {
      const auto res = gradrom::cmd_reduce(config);
      std::printf("reduce: k_u=%lld k_v=%lld m1=%lld m2=%lld (%.3f s)\n",
                  (long long)res.pod_u.k, (long long)res.pod_v.k,
                  (long long)(res.deim1 ? res.deim1->m : 0),
                  (long long)(res.deim2 ? res.deim2->m : 0), res.offline_seconds);
    } else if (c_rom->parsed()) {
      const auto want = config.rom_mode;
      if (want == gradrom::RomModeChoice::galerkin || want == gradrom::RomModeChoice::both) {
        const auto res = gradrom::cmd_rom(config, gradrom::RomMode::galerkin);
        std::printf("rom galerkin: %lld steps, online %.3f s\n",
                    (long long)res.trajectory.steps, res.online_seconds);
      }
      if (want == gradrom::RomModeChoice::deim || want == gradrom::RomModeChoice::both) {
        const auto res = gradrom::cmd_rom(config, gradrom::RomMode::deim);
        std::printf("rom deim: %lld steps, online %.3f s\n", (long long)res.trajectory.steps,
                    res.online_seconds);
      }
    } else if (c_cmp->parsed()) {
      print_compare(gradrom::cmd_compare(config));
    } else if (c_rep->parsed()) {
      print_compare(gradrom::cmd_report(config));
    }
  } catch (const gradrom::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const gradrom::NumericsError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const gradrom::IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 4;
  }
  return 0;
}
