// Command-line front end: construct | verify | sweep | export.
//
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 configuration error, 3 numerical halt (partial output written).

#include "hyperforge/io.hpp"
#include "hyperforge/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <vector>

namespace {

using hyperforge::pipeline::ConfigError;
using hyperforge::pipeline::RunConfig;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CliOptions {
  RunConfig cfg;
  std::string config_path;
  std::string branch = "beta-double";
  std::vector<double> p_vec;
  std::vector<double> t_span;
  std::vector<int> grid;
};

void add_config_flags(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON config file (flags override it)");
  cmd->add_option("--space", o.cfg.space, "cp2 | ch2");
  cmd->add_option("--c", o.cfg.c, "holomorphic sectional curvature (sign matches space)");
  cmd->add_option("--p", o.p_vec, "section base point, 3 reals (scaled onto the model)")
      ->expected(3);
  cmd->add_option("--w-angle", o.cfg.w_angle, "direction angle in T_p Sigma");
  cmd->add_option("--branch", o.branch, "beta-double | alpha-double");
  cmd->add_option("--t-span", o.t_span, "curve parameter span: min max")->expected(2);
  cmd->add_option("--ode-step", o.cfg.ode_step, "initial ODE step");
  cmd->add_option("--ode-tol", o.cfg.ode_tol, "ODE step-control tolerance");
  cmd->add_option("--grid", o.grid, "verification grid: n_t n_theta")->expected(2);
  cmd->add_option("--fd-step", o.cfg.fd_step, "finite-difference step");
  cmd->add_option("--tol-mult", o.cfg.tol_mult, "intra-pair spread tolerance (0 = default)");
  cmd->add_option("--tol-match", o.cfg.tol_match, "curvature match tolerance");
  cmd->add_option("--tol-hopf", o.cfg.tol_hopf, "Hopf angle tolerance");
  cmd->add_option("--seed", o.cfg.seed, "seed echoed into outputs");
  cmd->add_option("--out", o.cfg.out_dir, "output directory");
  cmd->add_flag("--geodesic", o.cfg.geodesic,
                "replace gamma by a section geodesic (negative control)");
}

RunConfig resolve_config(const CLI::App* cmd, CliOptions& o) {
  RunConfig cfg;
  if (!o.config_path.empty())
    cfg = RunConfig::from_json(hyperforge::io::read_file(o.config_path));
  // flags the user actually passed override the file
  const auto passed = [&](const char* name) { return cmd->count(name) > 0; };
  if (passed("--space")) cfg.space = o.cfg.space;
  if (passed("--c")) cfg.c = o.cfg.c;
  if (passed("--p")) cfg.p << o.p_vec[0], o.p_vec[1], o.p_vec[2];
  if (passed("--w-angle")) cfg.w_angle = o.cfg.w_angle;
  if (passed("--branch"))
    cfg.branch = hyperforge::curvatureflow::branch_from_string(o.branch);
  if (passed("--t-span")) {
    cfg.t_min = o.t_span[0];
    cfg.t_max = o.t_span[1];
  }
  if (passed("--ode-step")) cfg.ode_step = o.cfg.ode_step;
  if (passed("--ode-tol")) cfg.ode_tol = o.cfg.ode_tol;
  if (passed("--grid")) {
    cfg.grid_t = o.grid[0];
    cfg.grid_theta = o.grid[1];
  }
  if (passed("--fd-step")) cfg.fd_step = o.cfg.fd_step;
  if (passed("--tol-mult")) cfg.tol_mult = o.cfg.tol_mult;
  if (passed("--tol-match")) cfg.tol_match = o.cfg.tol_match;
  if (passed("--tol-hopf")) cfg.tol_hopf = o.cfg.tol_hopf;
  if (passed("--seed")) cfg.seed = o.cfg.seed;
  if (passed("--out")) cfg.out_dir = o.cfg.out_dir;
  if (passed("--geodesic")) cfg.geodesic = o.cfg.geodesic;
  cfg.validate();
  return cfg;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int cmd_construct(const RunConfig& cfg) {
  std::filesystem::create_directories(cfg.out_dir);
  const auto res = hyperforge::pipeline::run_construct(cfg);
  hyperforge::io::write_file_atomic(join(cfg.out_dir, "trajectory.json"),
                                    hyperforge::io::trajectory_to_json(res.trajectory));
  hyperforge::io::write_file_atomic(join(cfg.out_dir, "curve.csv"),
                                    hyperforge::io::curve_to_csv(res.curve));
  hyperforge::io::write_file_atomic(join(cfg.out_dir, "config.json"), cfg.to_json());
  std::printf("construct: %zu trajectory nodes, halt=%s\n", res.trajectory.size(),
              hyperforge::curvatureflow::to_string(res.trajectory.halt).c_str());
  return res.halted ? kExitNumerical : kExitPass;
}

int cmd_verify(const RunConfig& cfg, const std::string& traj_path,
               const std::string& curve_path) {
  std::filesystem::create_directories(cfg.out_dir);
  const auto traj =
      hyperforge::io::trajectory_from_json(hyperforge::io::read_file(traj_path));
  const auto curve =
      hyperforge::io::curve_from_csv(hyperforge::io::read_file(curve_path));
  const auto res = hyperforge::pipeline::run_verify(cfg, traj, curve);
  hyperforge::io::write_file_atomic(join(cfg.out_dir, "report.json"),
                                    hyperforge::io::report_to_json(res.report));
  hyperforge::io::write_file_atomic(join(cfg.out_dir, "samples.csv"),
                                    hyperforge::io::samples_to_csv(res.samples));
  std::printf("verify: %s (max spread %.3e, max curvature residual %.3e)\n",
              res.report.pass ? "pass" : "FAIL", res.report.max_spread,
              std::max(res.report.max_double_residual, res.report.max_simple_residual));
  return res.report.pass ? kExitPass : kExitVerifyFail;
}

int cmd_sweep(const RunConfig& cfg, int n_dirs) {
  std::filesystem::create_directories(cfg.out_dir);
  const auto summary = hyperforge::pipeline::run_sweep(cfg, n_dirs);
  hyperforge::io::write_file_atomic(join(cfg.out_dir, "sweep.json"),
                                    hyperforge::pipeline::sweep_to_json(summary));
  std::fputs(hyperforge::pipeline::sweep_to_table(summary).c_str(), stdout);
  return kExitPass;
}

int cmd_export(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
  std::string text;
  try {
    text = hyperforge::io::read_file(in_path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  std::string out;
  if (format == "csv") {
    out = hyperforge::io::sample_rows_to_csv(hyperforge::io::sample_rows_from_csv(text));
  } else if (format == "json-mesh") {
    out = hyperforge::io::sample_rows_to_mesh_json(
        hyperforge::io::sample_rows_from_csv(text));
  } else {
    throw ConfigError("export: unknown format " + format);
  }
  hyperforge::io::write_file_atomic(out_path, out);
  std::printf("export: wrote %s\n", out_path.c_str());
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hyperforge: construct and verify two-curvature hypersurfaces "
               "in CP^2 and CH^2"};
  app.require_subcommand(1);

  CliOptions o_construct, o_verify, o_sweep;
  auto* construct = app.add_subcommand("construct",
                                       "integrate the curvature ODE and rebuild gamma");
  add_config_flags(construct, o_construct);

  auto* verify = app.add_subcommand("verify",
                                    "sample H*gamma and certify the two-curvature property");
  add_config_flags(verify, o_verify);
  std::string traj_path = "trajectory.json", curve_path = "curve.csv";
  verify->add_option("--trajectory", traj_path, "trajectory JSON from construct");
  verify->add_option("--curve", curve_path, "curve CSV from construct");

  auto* sweep = app.add_subcommand("sweep", "run the pipeline over many directions");
  add_config_flags(sweep, o_sweep);
  int n_dirs = 8;
  sweep->add_option("--n-dirs", n_dirs, "number of directions (>= 4)");

  auto* exportc = app.add_subcommand("export", "convert sample files");
  std::string in_path, format = "csv", out_path = "export.out";
  exportc->add_option("--in", in_path, "input samples.csv")->required();
  exportc->add_option("--format", format, "csv | json-mesh");
  exportc->add_option("--out-file", out_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (construct->parsed()) return cmd_construct(resolve_config(construct, o_construct));
    if (verify->parsed())
      return cmd_verify(resolve_config(verify, o_verify), traj_path, curve_path);
    if (sweep->parsed()) return cmd_sweep(resolve_config(sweep, o_sweep), n_dirs);
    if (exportc->parsed()) return cmd_export(in_path, format, out_path);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const hyperforge::curvatureflow::SingularityError& e) {
    std::fprintf(stderr, "numerical halt: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitConfig;
}
