#pragma once

#include "hyperforge/curvatureflow.hpp"
#include "hyperforge/curvebuilder.hpp"
#include "hyperforge/hypersurface.hpp"
#include "hyperforge/spaceform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hyperforge::pipeline {

using curvatureflow::Branch;
using curvatureflow::Trajectory;
using curvebuilder::FramedCurveSample;
using spaceform::SectionPoint;
using spaceform::SpaceFormParams;
using spaceform::V3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat run configuration; every field maps to a CLI flag and a JSON key.
/// Curvatures are in 1/length^2, steps in arc length; c has no implicit
/// default sign - it must be consistent with the chosen space.
struct RunConfig {
  std::string space = "cp2";  // cp2 | ch2
  double c = 4.0;
  V3 p{1.0, 1.2, 0.8};  // scaled onto the section model
  double w_angle = 0.3;  // direction in the canonical basis of T_p Sigma
  Branch branch = Branch::BetaDouble;
  double t_min = 0.0;
  double t_max = 0.2;
  double ode_step = 1e-3;
  double ode_tol = 1e-10;
  int grid_t = 20;
  int grid_theta = 12;
  double fd_step = 1e-4;
  double tol_mult = 0.0;  // 0 = default 1e-3 * max(1, |c|)
  double tol_match = 5e-3;
  double tol_hopf = 1e-3;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool geodesic = false;  // replace gamma by a section geodesic (negative control)

  static RunConfig from_json(const std::string& text);
  std::string to_json() const;

  void validate() const;           // throws ConfigError
  SpaceFormParams params() const;  // throws ConfigError on sign mismatch
  SectionPoint base_point() const;
  V3 direction() const;  // unit w from w_angle
  hypersurface::VerifyTolerances tolerances() const;
};

struct ConstructResult {
  Trajectory trajectory;
  std::vector<FramedCurveSample> curve;
  curvatureflow::InitialData init;
  bool halted = false;
};

/// ODE integration over [t_min, t_max] (two half-spans merged when t_min < 0)
/// plus curve reconstruction.  Halts are reported, not thrown.
ConstructResult run_construct(const RunConfig& cfg);

struct VerifyResult {
  hypersurface::CurvatureReport report;
  std::vector<hypersurface::HypersurfaceSample> samples;
};

VerifyResult run_verify(const RunConfig& cfg, const Trajectory& traj,
                        const std::vector<FramedCurveSample>& curve);

struct SweepRow {
  double w_angle = 0.0;
  bool constructed = false;
  bool pass = false;
  double min_b = 0.0;
  std::string halt = "none";
};

struct SweepSummary {
  std::vector<SweepRow> rows;
};

/// Pipeline over n_dirs directions at the configured base point, run
/// concurrently (HYPERFORGE_THREADS caps the worker count).
SweepSummary run_sweep(const RunConfig& cfg, int n_dirs);

std::string sweep_to_json(const SweepSummary& s);
std::string sweep_to_table(const SweepSummary& s);

}  // namespace hyperforge::pipeline
