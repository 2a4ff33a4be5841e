#include "hyperforge/pipeline.hpp"

#include "hyperforge/orbits.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace hyperforge::pipeline {

using curvatureflow::CurvatureState;
using curvatureflow::HaltReason;
using curvatureflow::IntegrateOptions;
using nlohmann::ordered_json;
using spaceform::Kind;

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig cfg;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  const auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("space", cfg.space);
  get("c", cfg.c);
  if (j.contains("p")) {
    const auto v = j.at("p").get<std::vector<double>>();
    if (v.size() != 3) throw ConfigError("config: p must have 3 components");
    cfg.p << v[0], v[1], v[2];
  }
  get("w_angle", cfg.w_angle);
  if (j.contains("branch"))
    cfg.branch = curvatureflow::branch_from_string(j.at("branch").get<std::string>());
  get("t_min", cfg.t_min);
  get("t_max", cfg.t_max);
  get("ode_step", cfg.ode_step);
  get("ode_tol", cfg.ode_tol);
  get("grid_t", cfg.grid_t);
  get("grid_theta", cfg.grid_theta);
  get("fd_step", cfg.fd_step);
  get("tol_mult", cfg.tol_mult);
  get("tol_match", cfg.tol_match);
  get("tol_hopf", cfg.tol_hopf);
  get("seed", cfg.seed);
  get("out_dir", cfg.out_dir);
  get("geodesic", cfg.geodesic);
  return cfg;
}

std::string RunConfig::to_json() const {
  ordered_json j;
  j["space"] = space;
  j["c"] = c;
  j["p"] = {p[0], p[1], p[2]};
  j["w_angle"] = w_angle;
  j["branch"] = curvatureflow::to_string(branch);
  j["t_min"] = t_min;
  j["t_max"] = t_max;
  j["ode_step"] = ode_step;
  j["ode_tol"] = ode_tol;
  j["grid_t"] = grid_t;
  j["grid_theta"] = grid_theta;
  j["fd_step"] = fd_step;
  j["tol_mult"] = tol_mult;
  j["tol_match"] = tol_match;
  j["tol_hopf"] = tol_hopf;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["geodesic"] = geodesic;
  return j.dump(2) + "\n";
}

SpaceFormParams RunConfig::params() const {
  if (space != "cp2" && space != "ch2")
    throw ConfigError("config: space must be cp2 or ch2");
  const Kind kind = space == "cp2" ? Kind::Projective : Kind::Hyperbolic;
  try {
    return spaceform::make_params(kind, c);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

SectionPoint RunConfig::base_point() const {
  const SpaceFormParams sp = params();
  const double n2 = spaceform::section_metric(sp, p, p);
  if (n2 * sp.lift_norm2() <= 0.0)
    throw ConfigError("config: p cannot be scaled onto the section model");
  V3 x = p * std::sqrt(sp.lift_norm2() / n2);
  if (sp.kind == Kind::Hyperbolic && x[0] < 0.0) x = -x;
  const SectionPoint pt{x};
  if (!orbits::is_regular(sp, pt))
    throw ConfigError("config: p is not a regular point (zero lift coordinate)");
  return pt;
}

V3 RunConfig::direction() const {
  const SpaceFormParams sp = params();
  const auto basis = spaceform::section_tangent_basis(sp, base_point());
  return std::cos(w_angle) * basis[0] + std::sin(w_angle) * basis[1];
}

hypersurface::VerifyTolerances RunConfig::tolerances() const {
  hypersurface::VerifyTolerances t = hypersurface::VerifyTolerances::defaults(c);
  if (tol_mult > 0.0) t.tol_mult = tol_mult;
  t.tol_match = tol_match;
  t.tol_hopf = tol_hopf;
  return t;
}

void RunConfig::validate() const {
  params();
  base_point();
  if (!(t_max >= t_min)) throw ConfigError("config: t_max must be >= t_min");
  if (!(ode_step > 0.0)) throw ConfigError("config: ode_step must be > 0");
  if (!(ode_tol > 0.0)) throw ConfigError("config: ode_tol must be > 0");
  if (!(fd_step >= 1e-6 && fd_step <= 1e-3))
    throw ConfigError("config: fd_step must lie in [1e-6, 1e-3]");
  if (grid_t < 3 || grid_theta < 3)
    throw ConfigError("config: grid must be >= 3 per direction");
  if (!(tol_match > 0.0) || !(tol_hopf > 0.0) || tol_mult < 0.0)
    throw ConfigError("config: tolerances must be positive");
}

namespace {

// merge a backward half (integrated over (0, t_min]) with a forward half
Trajectory merge_spans(const Trajectory& back, const Trajectory& fwd) {
  Trajectory out;
  out.c = fwd.c;
  out.branch = fwd.branch;
  out.halt = fwd.halt != HaltReason::None ? fwd.halt : back.halt;
  for (std::size_t i = back.size(); i-- > 1;) {
    out.t.push_back(back.t[i]);
    out.states.push_back(back.states[i]);
  }
  out.t.insert(out.t.end(), fwd.t.begin(), fwd.t.end());
  out.states.insert(out.states.end(), fwd.states.begin(), fwd.states.end());
  return out;
}

std::vector<FramedCurveSample> merge_curves(
    const std::vector<FramedCurveSample>& back,
    const std::vector<FramedCurveSample>& fwd) {
  std::vector<FramedCurveSample> out;
  for (std::size_t i = back.size(); i-- > 1;) out.push_back(back[i]);
  out.insert(out.end(), fwd.begin(), fwd.end());
  return out;
}

}  // namespace

ConstructResult run_construct(const RunConfig& cfg) {
  cfg.validate();
  const SpaceFormParams sp = cfg.params();
  const SectionPoint pt = cfg.base_point();
  const V3 w = cfg.direction();

  curvatureflow::InitialConditionOptions ic_opts;
  ic_opts.fd_step = cfg.fd_step;
  ConstructResult res{};
  res.init = curvatureflow::initial_conditions_from_orbit(sp, pt, w, cfg.branch,
                                                          ic_opts);

  IntegrateOptions opts;
  opts.initial_step = cfg.ode_step;
  opts.branch = cfg.branch;

  curvebuilder::CurveOptions curve_opts;
  if (cfg.geodesic) curve_opts.source = curvebuilder::CurvatureSource::Zero;

  const Trajectory fwd = curvatureflow::integrate(res.init.state, cfg.c,
                                                  {0.0, cfg.t_max}, cfg.ode_tol, opts);
  auto curve_fwd =
      curvebuilder::reconstruct_curve(sp, fwd, pt, res.init.w, res.init.xi, curve_opts);

  if (cfg.t_min < 0.0) {
    const Trajectory back = curvatureflow::integrate(
        res.init.state, cfg.c, {0.0, cfg.t_min}, cfg.ode_tol, opts);
    const auto curve_back = curvebuilder::reconstruct_curve(
        sp, back, pt, res.init.w, res.init.xi, curve_opts);
    res.trajectory = merge_spans(back, fwd);
    res.curve = merge_curves(curve_back, curve_fwd);
  } else {
    res.trajectory = fwd;
    res.curve = std::move(curve_fwd);
  }
  res.halted = res.trajectory.halt != HaltReason::None;
  return res;
}

VerifyResult run_verify(const RunConfig& cfg, const Trajectory& traj,
                        const std::vector<FramedCurveSample>& curve) {
  cfg.validate();
  const SpaceFormParams sp = cfg.params();
  if (std::abs(traj.c - cfg.c) > 1e-12)
    throw ConfigError("verify: trajectory c does not match config");

  curvebuilder::CurveOptions curve_opts;
  if (cfg.geodesic) curve_opts.source = curvebuilder::CurvatureSource::Zero;
  const curvebuilder::CurveEvaluator eval(sp, curve, curve_opts);

  VerifyResult out;
  out.samples = hypersurface::sample_hypersurface(
      sp, eval, {cfg.grid_t, cfg.grid_theta});
  hypersurface::analyze_samples(sp, eval, out.samples, cfg.fd_step);
  out.report = hypersurface::verify_two_curvatures(sp, out.samples, cfg.tolerances());
  return out;
}

namespace {

int thread_cap() {
  if (const char* env = std::getenv("HYPERFORGE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

SweepSummary run_sweep(const RunConfig& cfg, int n_dirs) {
  if (n_dirs < 4) throw ConfigError("sweep: n_dirs must be >= 4");
  cfg.validate();

  SweepSummary summary;
  summary.rows.resize(n_dirs);
  std::atomic<int> next{0};

  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_dirs) return;
      RunConfig local = cfg;
      local.w_angle = 2.0 * std::numbers::pi * i / n_dirs;
      SweepRow row;
      row.w_angle = local.w_angle;
      try {
        const ConstructResult c = run_construct(local);
        row.constructed = true;
        row.halt = curvatureflow::to_string(c.trajectory.halt);
        const VerifyResult v = run_verify(local, c.trajectory, c.curve);
        row.pass = v.report.pass;
        row.min_b = v.report.min_b;
      } catch (const std::exception&) {
        row.constructed = false;
        row.pass = false;
        row.min_b = 0.0;
        row.halt = "construction-failed";
      }
      summary.rows[i] = row;
    }
  };

  const int n_threads = std::min(thread_cap(), n_dirs);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return summary;
}

std::string sweep_to_json(const SweepSummary& s) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : s.rows) {
    ordered_json j;
    j["w_angle"] = r.w_angle;
    j["constructed"] = r.constructed;
    j["pass"] = r.pass;
    j["min_b"] = r.min_b;
    j["halt"] = r.halt;
    rows.push_back(j);
  }
  ordered_json out;
  out["rows"] = rows;
  return out.dump(2) + "\n";
}

std::string sweep_to_table(const SweepSummary& s) {
  char buf[128];
  std::string out = "   w_angle  constructed  pass   min_b        halt\n";
  for (const auto& r : s.rows) {
    std::snprintf(buf, sizeof(buf), "%10.6f  %-11s  %-5s  %-11.4e  %s\n",
                  r.w_angle, r.constructed ? "yes" : "no",
                  r.pass ? "yes" : "no", r.min_b, r.halt.c_str());
    out += buf;
  }
  return out;
}

}  // namespace hyperforge::pipeline
