#include "gradrom/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <json.hpp>

namespace gradrom {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path fom_dir(const ExperimentConfig& c) { return fs::path(c.out_dir) / "fom"; }
fs::path reduce_dir(const ExperimentConfig& c) { return fs::path(c.out_dir) / "reduce"; }
fs::path rom_dir(const ExperimentConfig& c, RomMode mode) {
  return fs::path(c.out_dir) / "rom" / (mode == RomMode::galerkin ? "galerkin" : "deim");
}
fs::path compare_dir(const ExperimentConfig& c) { return fs::path(c.out_dir) / "compare"; }

Discretization::Discretization(const ExperimentConfig& config) {
  config.validate();
  mesh_ = std::make_unique<Mesh>(
      build_uniform_mesh(config.domain_lo, config.domain_hi, config.nx, config.ny));
  space_ = std::make_unique<DGSpace>(*mesh_, config.q_poly);
  ops_ = assemble_operators(*space_, config.resolved_kappa());
}

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": invalid JSON: " + e.what());
  }
  return j;
}

json newton_stats(const Trajectory& traj) {
  int total = 0, peak = 0;
  for (int k : traj.newton_iters) {
    total += k;
    peak = std::max(peak, k);
  }
  return json{{"total", total},
              {"max", peak},
              {"mean", traj.newton_iters.empty()
                           ? 0.0
                           : double(total) / double(traj.newton_iters.size())}};
}

void write_steps_csv(const fs::path& path, const Trajectory& traj) {
  std::vector<double> t(traj.level_times.begin() + 1, traj.level_times.end());
  std::vector<double> its(traj.newton_iters.begin(), traj.newton_iters.end());
  write_csv(path, {"t", "du_norm2", "dv_norm2", "newton_iters"},
            {t, traj.du_norm2, traj.dv_norm2, its});
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size()));
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

// Cubic load vectors at every recorded level; these are the DEIM snapshots.
std::pair<Matrix, Matrix> cubic_snapshots(const ModelSpec& model, const DGSpace& space,
                                          const Matrix& u_snaps, const Matrix& v_snaps) {
  const Index cols = u_snaps.cols();
  Matrix b1(space.dim(), cols);
  Matrix b2;
  if (model.kind == ModelKind::rgl) b2.resize(space.dim(), cols);
  for (Index j = 0; j < cols; ++j) {
    const Vector u = u_snaps.col(j);
    const Vector v = v_snaps.col(j);
    if (model.kind == ModelKind::rgl) {
      b1.col(j) = assemble_nonlinear(
          space, [](double a, double b) { return -(a * a + b * b) * a; }, u, v);
      b2.col(j) = assemble_nonlinear(
          space, [](double a, double b) { return -(a * a + b * b) * b; }, u, v);
    } else {
      b1.col(j) = assemble_nonlinear(
          space, [](double a, double) { return -a * a * a; }, u, v);
    }
  }
  return {std::move(b1), std::move(b2)};
}

}  // namespace

FomResult cmd_fom(const ExperimentConfig& config) {
  Discretization d(config);
  const ModelSpec model = make_model(config.model, config.mu);
  const fs::path dir = fom_dir(config);
  ensure_dir(dir);
  save_config(fs::path(config.out_dir) / "config.json", config);

  auto [u0, v0] = initial_condition(model, d.space(), d.ops(), config.seed);
  auto system = make_fom_system(d.space(), d.ops(), model, config.solver());
  Vector x0(2 * d.space().dim());
  x0 << u0, v0;

  Trajectory traj;
  try {
    traj = run_to_steady_state(*system, x0, config.grid(), config.solver(),
                               config.snapshot_stride,
                               [&](const Vector& x) { return system->energy(x); });
  } catch (const NumericsError& err) {
    write_json(dir / "meta.json", json{{"kind", "fom"}, {"failure", err.what()}});
    throw;
  }

  write_matrix(dir / "u_snapshots.grdm", traj.u_snapshots);
  write_matrix(dir / "v_snapshots.grdm", traj.v_snapshots);
  auto [b1, b2] = cubic_snapshots(model, d.space(), traj.u_snapshots, traj.v_snapshots);
  write_matrix(dir / "b1_snapshots.grdm", b1);
  if (model.kind == ModelKind::rgl) write_matrix(dir / "b2_snapshots.grdm", b2);

  write_energy_csv(dir / "energy.csv", traj.level_times, traj.energy);
  write_vector(dir / "energy_levels.grdm", to_vector(traj.energy));
  write_steps_csv(dir / "steps.csv", traj);
  if (config.field_output == FieldOutput::final)
    write_vtk_fields(dir / "final.vtk", d.space(), traj.final_u, traj.final_v);

  write_json(dir / "meta.json",
             json{{"kind", "fom"},
                  {"model", config.model == ModelKind::rgl ? "rgl" : "sh"},
                  {"seed", config.seed},
                  {"n", d.space().dim()},
                  {"steps", traj.steps},
                  {"dt", traj.dt},
                  {"snapshot_stride", traj.stride},
                  {"n_snapshots", traj.n_snapshots()},
                  {"reached_tol", traj.reached_tol},
                  {"wall_seconds", traj.online_seconds},
                  {"newton", newton_stats(traj)},
                  {"failure", nullptr}});

  FomResult res;
  res.trajectory = std::move(traj);
  res.u0 = std::move(u0);
  res.v0 = std::move(v0);
  res.wall_seconds = res.trajectory.online_seconds;
  return res;
}

ReduceResult cmd_reduce(const ExperimentConfig& config) {
  Discretization d(config);
  const ModelSpec model = make_model(config.model, config.mu);
  const fs::path src = fom_dir(config);
  const fs::path dir = reduce_dir(config);
  ensure_dir(dir);

  const Matrix u_snaps = read_matrix(src / "u_snapshots.grdm");
  const Matrix v_snaps = read_matrix(src / "v_snapshots.grdm");
  const Matrix b1 = read_matrix(src / "b1_snapshots.grdm");

  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);  // reduction stream, decoupled from the IC

  ReduceResult res;
  res.pod_u = compute_pod_basis(u_snaps, d.ops().mass, config.pod_eps, config.rsvd, rng, "u");
  res.pod_v = compute_pod_basis(v_snaps, d.ops().mass, config.pod_eps, config.rsvd, rng, "v");
  res.deim1 = deim_build(b1, config.deim_eps, res.pod_u, config.rsvd, rng);
  if (model.kind == ModelKind::rgl) {
    const Matrix b2 = read_matrix(src / "b2_snapshots.grdm");
    res.deim2 = deim_build(b2, config.deim_eps, res.pod_v, config.rsvd, rng);
  }
  res.offline_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_matrix(dir / "pod_u.grdm", res.pod_u.psi);
  write_matrix(dir / "pod_v.grdm", res.pod_v.psi);
  write_vector(dir / "pod_u_sigma.grdm", res.pod_u.sigma);
  write_vector(dir / "pod_v_sigma.grdm", res.pod_v.sigma);
  write_matrix(dir / "deim1_basis.grdm", res.deim1->q);
  write_vector(dir / "deim1_sigma.grdm", res.deim1->sigma);
  write_vector(dir / "deim1_indices.grdm",
               to_vector(std::vector<double>(res.deim1->indices.begin(), res.deim1->indices.end())));
  if (res.deim2) {
    write_matrix(dir / "deim2_basis.grdm", res.deim2->q);
    write_vector(dir / "deim2_sigma.grdm", res.deim2->sigma);
    write_vector(dir / "deim2_indices.grdm",
                 to_vector(std::vector<double>(res.deim2->indices.begin(), res.deim2->indices.end())));
  }

  json meta{{"kind", "reduce"},
            {"k_u", res.pod_u.k},
            {"k_v", res.pod_v.k},
            {"ric_u", res.pod_u.achieved_ric},
            {"ric_v", res.pod_v.achieved_ric},
            {"pod_fallback_u", res.pod_u.deterministic_fallback},
            {"pod_fallback_v", res.pod_v.deterministic_fallback},
            {"m1", res.deim1->m},
            {"ric_b1", res.deim1->achieved_ric},
            {"inv_ptq_1", res.deim1->inv_ptq_norm},
            {"offline_seconds", res.offline_seconds},
            {"notes", res.deim1->notes}};
  if (res.deim2) {
    meta["m2"] = res.deim2->m;
    meta["ric_b2"] = res.deim2->achieved_ric;
    meta["inv_ptq_2"] = res.deim2->inv_ptq_norm;
  }
  write_json(dir / "meta.json", meta);
  return res;
}

namespace {

struct LoadedFom {
  Matrix u_snaps, v_snaps;
  std::vector<double> energy;
  double dt = 0.0;
  Index stride = 1;
  Index steps = 0;
  double wall_seconds = 0.0;
};

LoadedFom load_fom(const ExperimentConfig& config) {
  const fs::path dir = fom_dir(config);
  const json meta = load_json(dir / "meta.json");
  if (!meta.contains("steps"))
    throw IoError(dir.string() + "/meta.json: incomplete run (failure marker present?)");
  LoadedFom f;
  f.u_snaps = read_matrix(dir / "u_snapshots.grdm");
  f.v_snaps = read_matrix(dir / "v_snapshots.grdm");
  f.energy = to_std(read_vector(dir / "energy_levels.grdm"));
  f.dt = meta.at("dt").get<double>();
  f.stride = meta.at("snapshot_stride").get<Index>();
  f.steps = meta.at("steps").get<Index>();
  f.wall_seconds = meta.at("wall_seconds").get<double>();
  return f;
}

ReduceResult load_reduce(const ExperimentConfig& config, const ModelSpec& model) {
  const fs::path dir = reduce_dir(config);
  const json meta = load_json(dir / "meta.json");
  ReduceResult res;
  res.pod_u.psi = read_matrix(dir / "pod_u.grdm");
  res.pod_u.sigma = read_vector(dir / "pod_u_sigma.grdm");
  res.pod_u.k = res.pod_u.psi.cols();
  res.pod_u.achieved_ric = meta.at("ric_u").get<double>();
  res.pod_u.tag = "u";
  res.pod_v.psi = read_matrix(dir / "pod_v.grdm");
  res.pod_v.sigma = read_vector(dir / "pod_v_sigma.grdm");
  res.pod_v.k = res.pod_v.psi.cols();
  res.pod_v.achieved_ric = meta.at("ric_v").get<double>();
  res.pod_v.tag = "v";
  res.offline_seconds = meta.at("offline_seconds").get<double>();

  DeimOperator d1;
  d1.q = read_matrix(dir / "deim1_basis.grdm");
  d1.sigma = read_vector(dir / "deim1_sigma.grdm");
  const Vector idx1 = read_vector(dir / "deim1_indices.grdm");
  for (Index i = 0; i < idx1.size(); ++i) d1.indices.push_back(static_cast<Index>(idx1[i]));
  deim_finalize(d1, res.pod_u);
  res.deim1 = std::move(d1);
  if (model.kind == ModelKind::rgl) {
    DeimOperator d2;
    d2.q = read_matrix(dir / "deim2_basis.grdm");
    d2.sigma = read_vector(dir / "deim2_sigma.grdm");
    const Vector idx2 = read_vector(dir / "deim2_indices.grdm");
    for (Index i = 0; i < idx2.size(); ++i) d2.indices.push_back(static_cast<Index>(idx2[i]));
    deim_finalize(d2, res.pod_v);
    res.deim2 = std::move(d2);
  }
  return res;
}

struct LoadedRom {
  Matrix ur, vr;
  std::vector<double> energy;
  double online_seconds = 0.0;
  double offline_seconds = 0.0;
};

LoadedRom load_rom(const ExperimentConfig& config, RomMode mode) {
  const fs::path dir = rom_dir(config, mode);
  const json meta = load_json(dir / "meta.json");
  LoadedRom r;
  r.ur = read_matrix(dir / "ur.grdm");
  r.vr = read_matrix(dir / "vr.grdm");
  r.energy = to_std(read_vector(dir / "energy_levels.grdm"));
  r.online_seconds = meta.at("online_seconds").get<double>();
  r.offline_seconds = meta.at("offline_seconds").get<double>();
  return r;
}

ReducedSystem build_reduced(const ExperimentConfig& config, const Discretization& d,
                            const ModelSpec& model, const ReduceResult& red, RomMode mode) {
  return build_rom(d.space(), d.ops(), model, mode, red.pod_u, red.pod_v,
                   mode == RomMode::deim ? red.deim1 : std::nullopt,
                   mode == RomMode::deim ? red.deim2 : std::nullopt, config.solver());
}

RomResult run_rom_stage(const ExperimentConfig& config, const Discretization& d,
                        const ModelSpec& model, const ReduceResult& red, RomMode mode) {
  const fs::path dir = rom_dir(config, mode);
  ensure_dir(dir);

  const LoadedFom fom = load_fom(config);
  ReducedSystem system = build_reduced(config, d, model, red, mode);

  const Vector u0 = fom.u_snaps.col(0);
  const Vector v0 = fom.v_snaps.col(0);
  const Vector x0 = system.reduced_initial_state(u0, v0);

  const TimeGrid grid{fom.dt, fom.dt * static_cast<double>(fom.steps)};
  Trajectory traj = run_rom(system, x0, grid, config.solver(), config.rom_steady_stop);

  RomResult res;
  res.trajectory = std::move(traj);
  res.online_seconds = res.trajectory.online_seconds;
  res.offline_seconds = system.offline_seconds();

  const EnergySeries es = rom_energy_series(res.trajectory, system);
  res.lifted_energy = es.values;

  write_matrix(dir / "ur.grdm", res.trajectory.u_snapshots);
  write_matrix(dir / "vr.grdm", res.trajectory.v_snapshots);
  write_vector(dir / "energy_levels.grdm", to_vector(res.lifted_energy));
  write_energy_csv(dir / "energy.csv", es.times, es.values);
  if (config.field_output == FieldOutput::final)
    write_vtk_fields(dir / "final.vtk", d.space(), system.lift_u(res.trajectory.final_u),
                     system.lift_v(res.trajectory.final_v));
  write_json(dir / "meta.json",
             json{{"kind", "rom"},
                  {"mode", mode == RomMode::galerkin ? "galerkin" : "deim"},
                  {"steps", res.trajectory.steps},
                  {"dt", res.trajectory.dt},
                  {"k_u", system.n_u()},
                  {"k_v", system.n_v()},
                  {"online_seconds", res.online_seconds},
                  {"offline_seconds", res.offline_seconds},
                  {"reached_tol", res.trajectory.reached_tol},
                  {"newton", newton_stats(res.trajectory)}});
  return res;
}

// Lifted reduced states at the levels the full-order run recorded.
Matrix lift_at_common_levels(const Matrix& psi, const Matrix& reduced_states, Index stride,
                             Index n_common) {
  Matrix lifted(psi.rows(), n_common);
  for (Index j = 0; j < n_common; ++j) lifted.col(j) = psi * reduced_states.col(j * stride);
  return lifted;
}

CompareResult make_reports(const ExperimentConfig& config, const Discretization& d,
                           const ModelSpec& model, const ReduceResult& red, const LoadedFom& fom,
                           const LoadedRom* pod_run, const LoadedRom* deim_run) {
  const fs::path dir = compare_dir(config);
  ensure_dir(dir);

  CompareResult out;
  out.k_u = red.pod_u.k;
  out.k_v = red.pod_v.k;
  out.m1 = red.deim1 ? red.deim1->m : 0;
  out.m2 = red.deim2 ? red.deim2->m : 0;
  out.fom_seconds = fom.wall_seconds;
  out.inv_ptq_1 = red.deim1 ? red.deim1->inv_ptq_norm : 0.0;
  out.inv_ptq_2 = red.deim2 ? red.deim2->inv_ptq_norm : 0.0;

  const Index n_common = fom.u_snaps.cols();
  const double grid_dt = fom.dt * static_cast<double>(fom.stride);

  EnergySeries fom_series;
  fom_series.values = fom.energy;
  fom_series.times.resize(fom.energy.size());
  for (std::size_t n = 0; n < fom.energy.size(); ++n)
    fom_series.times[n] = fom.dt * static_cast<double>(n);

  // an early-stopped reduced run is compared over the shorter horizon
  auto state_errors = [&](const LoadedRom& run, double& eu, double& ev) {
    const Index n_run = (run.ur.cols() - 1) / fom.stride + 1;
    const Index n = std::min(n_common, n_run);
    const Matrix lu = lift_at_common_levels(red.pod_u.psi, run.ur, fom.stride, n);
    eu = l2l2_error(fom.u_snaps.leftCols(n), lu, d.ops().mass, grid_dt);
    const Matrix lv = lift_at_common_levels(red.pod_v.psi, run.vr, fom.stride, n);
    ev = l2l2_error(fom.v_snaps.leftCols(n), lv, d.ops().mass, grid_dt);
  };
  auto energy_err = [&](const LoadedRom& run) {
    const std::size_t len = std::min(fom.energy.size(), run.energy.size());
    EnergySeries a, b;
    a.values.assign(fom.energy.begin(), fom.energy.begin() + len);
    b.values.assign(run.energy.begin(), run.energy.begin() + len);
    a.times.assign(fom_series.times.begin(), fom_series.times.begin() + len);
    b.times = a.times;
    return energy_error(a, b, fom.dt);
  };

  auto own_series = [&](const LoadedRom& run) {
    EnergySeries rs;
    rs.values = run.energy;
    rs.times.resize(run.energy.size());
    for (std::size_t n = 0; n < run.energy.size(); ++n)
      rs.times[n] = fom.dt * static_cast<double>(n);
    return rs;
  };

  if (pod_run) {
    state_errors(*pod_run, out.state_error_u_pod, out.state_error_v_pod);
    out.energy_error_pod = energy_err(*pod_run);
    out.pod_online_seconds = pod_run->online_seconds;
    out.pod_dissipation_violations =
        static_cast<Index>(check_dissipation(own_series(*pod_run), 1e-8).violations.size());
  }

  if (deim_run) {
    state_errors(*deim_run, out.state_error_u_deim, out.state_error_v_deim);
    out.energy_error_deim = energy_err(*deim_run);
    out.deim_online_seconds = deim_run->online_seconds;

    // bound diagnostics need the deim-mode system and the per-step reduced states
    out.r_inv_norm = mass_inverse_spectral_norm(d.ops().mass);
    ReducedSystem system = build_reduced(config, d, model, red, RomMode::deim);
    Trajectory traj;
    traj.dt = fom.dt;
    traj.stride = 1;
    traj.n_u = deim_run->ur.rows();
    traj.n_v = deim_run->vr.rows();
    traj.u_snapshots = deim_run->ur;
    traj.v_snapshots = deim_run->vr;
    traj.snapshot_times.resize(deim_run->ur.cols());
    for (Index n = 0; n < deim_run->ur.cols(); ++n)
      traj.snapshot_times[n] = fom.dt * static_cast<double>(n);
    const BoundReport bounds = stepsize_bound(traj, system, out.r_inv_norm, fom.dt);
    out.bound_satisfied_fraction =
        bounds.dt_max.empty()
            ? 1.0
            : double(bounds.n_satisfied) / double(bounds.dt_max.size());

    const DissipationReport diss = check_dissipation(own_series(*deim_run), 1e-8);
    out.deim_dissipation_violations = static_cast<Index>(diss.violations.size());
    for (Index step : diss.violations)
      if (bounds.satisfied[step]) out.energy_increases_only_at_bound_violations = false;

    std::vector<double> t(traj.snapshot_times.begin() + 1, traj.snapshot_times.end());
    std::vector<double> sat(bounds.satisfied.size());
    for (std::size_t i = 0; i < bounds.satisfied.size(); ++i) sat[i] = bounds.satisfied[i] ? 1 : 0;
    std::vector<double> r2 = bounds.residual_2.empty()
                                 ? std::vector<double>(bounds.residual_1.size(), 0.0)
                                 : bounds.residual_2;
    std::vector<double> dv = bounds.dv_norm.empty()
                                 ? std::vector<double>(bounds.du_norm.size(), 0.0)
                                 : bounds.dv_norm;
    write_csv(dir / "bounds.csv",
              {"t", "dt_max", "residual_1", "residual_2", "du_norm", "dv_norm", "satisfied"},
              {t, bounds.dt_max, bounds.residual_1, r2, bounds.du_norm, dv, sat});
  }

  // error table, one row per reduced model
  {
    std::vector<double> ku, kv, m1, m2, eu, ev, ee, online, speedup;
    auto add_row = [&](const LoadedRom* run, double se_u, double se_v, double en_err, double m1v,
                       double m2v) {
      if (!run) return;
      ku.push_back(double(out.k_u));
      kv.push_back(double(out.k_v));
      m1.push_back(m1v);
      m2.push_back(m2v);
      eu.push_back(se_u);
      ev.push_back(se_v);
      ee.push_back(en_err);
      online.push_back(run->online_seconds);
      speedup.push_back(run->online_seconds > 0 ? fom.wall_seconds / run->online_seconds : 0.0);
    };
    add_row(pod_run, out.state_error_u_pod, out.state_error_v_pod, out.energy_error_pod, 0, 0);
    add_row(deim_run, out.state_error_u_deim, out.state_error_v_deim, out.energy_error_deim,
            double(out.m1), double(out.m2));
    write_csv(dir / "report.csv",
              {"k_u", "k_v", "m1", "m2", "state_error_u", "state_error_v", "energy_error",
               "online_seconds", "speedup_vs_fom"},
              {ku, kv, m1, m2, eu, ev, ee, online, speedup});
  }

  const TimingReport timing =
      timing_report(fom.wall_seconds, pod_run ? pod_run->online_seconds : 0.0,
                    deim_run ? deim_run->online_seconds : 0.0);
  write_csv(dir / "timing.csv",
            {"fom_seconds", "pod_online_seconds", "deim_online_seconds", "speedup_pod",
             "speedup_deim"},
            {{timing.fom_seconds},
             {timing.pod_online_seconds},
             {timing.deim_online_seconds},
             {timing.speedup_pod},
             {timing.speedup_deim}});

  write_json(dir / "meta.json",
             json{{"kind", "compare"},
                  {"k_u", out.k_u},
                  {"k_v", out.k_v},
                  {"m1", out.m1},
                  {"m2", out.m2},
                  {"state_error_u_pod", out.state_error_u_pod},
                  {"state_error_v_pod", out.state_error_v_pod},
                  {"state_error_u_deim", out.state_error_u_deim},
                  {"state_error_v_deim", out.state_error_v_deim},
                  {"energy_error_pod", out.energy_error_pod},
                  {"energy_error_deim", out.energy_error_deim},
                  {"fom_seconds", out.fom_seconds},
                  {"pod_online_seconds", out.pod_online_seconds},
                  {"deim_online_seconds", out.deim_online_seconds},
                  {"bound_satisfied_fraction", out.bound_satisfied_fraction},
                  {"energy_increases_only_at_bound_violations",
                   out.energy_increases_only_at_bound_violations},
                  {"pod_dissipation_violations", out.pod_dissipation_violations},
                  {"deim_dissipation_violations", out.deim_dissipation_violations},
                  {"r_inv_norm", out.r_inv_norm},
                  {"inv_ptq_1", out.inv_ptq_1},
                  {"inv_ptq_2", out.inv_ptq_2}});
  return out;
}

}  // namespace

RomResult cmd_rom(const ExperimentConfig& config, RomMode mode) {
  Discretization d(config);
  const ModelSpec model = make_model(config.model, config.mu);
  const ReduceResult red = load_reduce(config, model);
  return run_rom_stage(config, d, model, red, mode);
}

CompareResult cmd_compare(const ExperimentConfig& config) {
  Discretization d(config);
  const ModelSpec model = make_model(config.model, config.mu);
  const ReduceResult red = load_reduce(config, model);
  const LoadedFom fom = load_fom(config);

  const bool want_pod =
      config.rom_mode == RomModeChoice::galerkin || config.rom_mode == RomModeChoice::both;
  const bool want_deim =
      config.rom_mode == RomModeChoice::deim || config.rom_mode == RomModeChoice::both;

  std::optional<LoadedRom> pod_run, deim_run;
  if (want_pod) {
    run_rom_stage(config, d, model, red, RomMode::galerkin);
    pod_run = load_rom(config, RomMode::galerkin);
  }
  if (want_deim) {
    run_rom_stage(config, d, model, red, RomMode::deim);
    deim_run = load_rom(config, RomMode::deim);
  }
  return make_reports(config, d, model, red, fom, pod_run ? &*pod_run : nullptr,
                      deim_run ? &*deim_run : nullptr);
}

CompareResult cmd_report(const ExperimentConfig& config) {
  Discretization d(config);
  const ModelSpec model = make_model(config.model, config.mu);
  const ReduceResult red = load_reduce(config, model);
  const LoadedFom fom = load_fom(config);

  std::optional<LoadedRom> pod_run, deim_run;
  const fs::path pod_meta = rom_dir(config, RomMode::galerkin) / "meta.json";
  const fs::path deim_meta = rom_dir(config, RomMode::deim) / "meta.json";
  if (fs::exists(pod_meta)) pod_run = load_rom(config, RomMode::galerkin);
  if (fs::exists(deim_meta)) deim_run = load_rom(config, RomMode::deim);
  if (!pod_run && !deim_run)
    throw IoError("report: no stored reduced runs under " + config.out_dir);
  return make_reports(config, d, model, red, fom, pod_run ? &*pod_run : nullptr,
                      deim_run ? &*deim_run : nullptr);
}

}  // namespace gradrom
