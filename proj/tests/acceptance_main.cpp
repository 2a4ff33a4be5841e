// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are pinned here, not configurable.

#include "hyperforge/curvatureflow.hpp"
#include "hyperforge/curvebuilder.hpp"
#include "hyperforge/hypersurface.hpp"
#include "hyperforge/io.hpp"
#include "hyperforge/orbits.hpp"
#include "hyperforge/pipeline.hpp"
#include "hyperforge/spaceform.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <vector>

using namespace hyperforge;
using spaceform::SectionPoint;
using spaceform::SpaceFormParams;
using spaceform::V3;

namespace {

int g_failures = 0;

void report(int idx, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %-34s %s\n", ok ? "PASS" : "FAIL", idx, name,
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

SectionPoint random_regular(const SpaceFormParams& p, std::mt19937_64& rng) {
  const double R = p.radius();
  if (p.kind == spaceform::Kind::Projective) {
    for (;;) {
      V3 x(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1));
      if (x.cwiseAbs().minCoeff() < 0.15 || x.norm() < 0.3) continue;
      return SectionPoint{x * (R / x.norm())};
    }
  }
  const double x1 = uniform(rng, 0.15, 0.9);
  const double x2 = uniform(rng, 0.15, 0.9);
  return SectionPoint{V3(std::sqrt(R * R + x1 * x1 + x2 * x2), x1, x2)};
}

// ---- criterion 1: eigenvalue formula vs direct 2x2 eigensolve --------------

void criterion1() {
  std::mt19937_64 rng(1001);
  double worst = 0.0, min_gap = 1e300;
  bool gap_ok = true;
  for (const double c : {4.0, -4.0}) {
    for (int i = 0; i < 1000; ++i) {
      const double rmin = c < 0 ? std::sqrt(-c / 8.0) + 1e-3 : 0.0;
      const double r =
          (rmin + uniform(rng, 0.0, 2.0)) * (uniform(rng, 0, 1) < 0.5 ? -1 : 1);
      const orbits::OrbitParams op{c, r, uniform(rng, -3.14, 3.14)};
      const double th = uniform(rng, -3.14, 3.14);
      const auto m = orbits::shape_operator_matrices(op);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
          std::cos(th) * m.S3 + std::sin(th) * m.S4);
      const auto [hi, lo] = orbits::orbit_principal_curvatures(op, th);
      worst = std::max({worst, std::abs(hi - es.eigenvalues()[1]),
                        std::abs(lo - es.eigenvalues()[0])});
      min_gap = std::min(min_gap, hi - lo);
      gap_ok = gap_ok && (hi - lo > 1e-3 * std::sqrt(std::abs(c)));
    }
  }
  report(1, "eigenvalue-formula oracle", worst < 1e-12 && gap_ok,
         fmt("max |formula - eigensolve| = %.3e (tol 1e-12), min gap = %.3e", worst,
             min_gap));
}

// ---- criterion 2: orbit characterization (Thm 2.1 direction) ---------------

void criterion2() {
  std::mt19937_64 rng(1002);
  double worst_lag = 0.0, worst_K = 0.0, worst_pmc = 0.0;
  for (const double c : {4.0, -4.0}) {
    const SpaceFormParams p = c > 0 ? spaceform::projective(c) : spaceform::hyperbolic(c);
    for (int i = 0; i < 10; ++i) {
      const orbits::OrbitPoint q{random_regular(p, rng), uniform(rng, 0, 6.28),
                                 uniform(rng, 0, 6.28)};
      const auto geo = orbits::numeric_orbit_geometry(p, q, 1e-4);
      worst_lag = std::max(worst_lag, geo.lagrangian_residual);
      worst_K = std::max(worst_K, std::abs(geo.gauss_curvature));
      worst_pmc = std::max(worst_pmc, orbits::parallel_mean_curvature_residual(p, q, 1e-4));
    }
  }
  report(2, "orbit characterization (20 orbits)",
         worst_lag < 1e-9 && worst_K < 1e-5 && worst_pmc < 1e-4,
         fmt("lagrangian %.2e (1e-9), |K| %.2e (1e-5), pmc %.2e (1e-4)", worst_lag,
             worst_K, worst_pmc));
}

// ---- criterion 3: ODE right-hand side and order-4 convergence --------------

void criterion3() {
  const auto d = curvatureflow::ode_rhs({2.0, 0.0, std::numbers::pi / 4}, 4.0);
  const double rhs_err = std::max(
      {std::abs(d[0] - 4.5), std::abs(d[1] + 1.5), std::abs(d[2] + 0.25)});

  const curvatureflow::CurvatureState init{2.0, 0.0, std::numbers::pi / 4};
  const auto endpoint = [&](double step) {
    curvatureflow::IntegrateOptions opts;
    opts.fixed_step = step;
    return curvatureflow::integrate(init, 4.0, {0.0, 0.3}, 1e-9, opts).states.back();
  };
  const auto ref = endpoint(0.3 / 3840);
  const auto err = [&](const curvatureflow::CurvatureState& s) {
    return std::max({std::abs(s.alpha - ref.alpha), std::abs(s.beta - ref.beta),
                     std::abs(s.phi - ref.phi)});
  };
  const double ratio = err(endpoint(0.3 / 60)) / err(endpoint(0.3 / 120));
  report(3, "ODE rhs + order-4 convergence",
         rhs_err < 1e-12 && ratio > 12.0 && ratio < 20.0,
         fmt("rhs err %.2e (1e-12), halving ratio %.2f (in [12,20])", rhs_err, ratio));
}

// ---- criterion 4: identity suite (derivative laws along trajectories) ------

void criterion4() {
  std::mt19937_64 rng(1004);
  double worst = 0.0;
  int done = 0;
  while (done < 10) {
    const double c = done % 2 == 0 ? 4.0 : -4.0;
    const curvatureflow::CurvatureState init{uniform(rng, 1.0, 2.5),
                                             uniform(rng, -1.0, 0.2),
                                             uniform(rng, 0.5, 1.0)};
    curvatureflow::IntegrateOptions opts;
    opts.fixed_step = 1e-4;
    const auto tr = curvatureflow::integrate(init, c, {0.0, 0.02}, 1e-9, opts);
    if (tr.halt != curvatureflow::HaltReason::None || tr.size() < 30) continue;
    ++done;
    const double h = 1e-4;
    // five-point central differences at step 1e-4
    const auto d5 = [&](auto&& f, std::size_t k) {
      return (-f(k + 2) + 8 * f(k + 1) - 8 * f(k - 1) + f(k - 2)) / (12 * h);
    };
    for (std::size_t k = 2; k + 2 < tr.size(); k += 10) {
      const auto& s0 = tr.states[k];
      const double a = s0.a(), b = s0.b(), gap = s0.alpha - s0.beta;
      const double da_fd = d5([&](std::size_t i) { return tr.states[i].a(); }, k);
      const double da_law = b * c * (2 * b * b - a * a) / (4 * gap) - b * s0.beta;
      const double db_fd = d5([&](std::size_t i) { return tr.states[i].beta; }, k);
      const double db_law = -(3 * c / 8) * std::sin(2 * s0.phi);
      const double dal_fd = d5([&](std::size_t i) { return tr.states[i].alpha; }, k);
      const double dal_law = (b / (4 * a)) * (c * (3 * a * a - 1) + 4 * s0.alpha * gap);
      worst = std::max({worst, std::abs(da_fd - da_law), std::abs(db_fd - db_law),
                        std::abs(dal_fd - dal_law)});
    }
  }
  report(4, "identity suite (eq:ab/beta/alpha)", worst < 1e-8,
         fmt("max law residual %.3e (tol 1e-8, fd step 1e-4)", worst));
}

// ---- criterion 5: end-to-end Main Theorem check -----------------------------

void criterion5() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (const std::string space : {"cp2", "ch2"}) {
    pipeline::RunConfig cfg;
    cfg.space = space;
    cfg.c = space == "cp2" ? 4.0 : -4.0;
    cfg.p = space == "cp2" ? V3(1.0, 1.2, 0.8) : V3(1.2, 0.5, 0.35);
    cfg.w_angle = 0.3;
    cfg.t_max = 0.2;
    cfg.grid_t = 20;
    cfg.grid_theta = 12;

    std::vector<curvebuilder::FramedCurveSample> curves[2];
    for (int bi = 0; bi < 2; ++bi) {
      cfg.branch = bi == 0 ? curvatureflow::Branch::BetaDouble
                           : curvatureflow::Branch::AlphaDouble;
      const auto c = pipeline::run_construct(cfg);
      if (c.halted) {
        ok = false;
        detail += space + ": halted; ";
        continue;
      }
      curves[bi] = c.curve;
      const auto v = pipeline::run_verify(cfg, c.trajectory, c.curve);
      const bool branch_ok = v.report.max_spread < 1e-3 &&
                             v.report.max_double_residual < 5e-3 &&
                             v.report.max_simple_residual < 5e-3 &&
                             v.report.max_hopf_residual < 1e-3;
      ok = ok && branch_ok;
      if (bi == 0)
        detail += fmt("%s: spread %.1e match %.1e hopf %.1e; ", space.c_str(),
                      v.report.max_spread,
                      std::max(v.report.max_double_residual, v.report.max_simple_residual),
                      v.report.max_hopf_residual);
    }
    // the two branches separate
    const auto sp = cfg.params();
    const curvebuilder::CurveEvaluator e0(sp, curves[0]), e1(sp, curves[1]);
    double sep = 0.0;
    for (double t = 0.0; t <= 0.2; t += 0.01)
      sep = std::max(sep, spaceform::section_distance(sp, e0.at(t).pos, e1.at(t).pos));
    ok = ok && sep > 1e-4;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ok = ok && secs < 300.0;
  report(5, "end-to-end two-curvature check", ok,
         detail + fmt("runtime %.1fs (< 300s)", secs));
}

// ---- criterion 6: negative control ------------------------------------------

void criterion6() {
  pipeline::RunConfig cfg;
  cfg.t_max = 0.2;
  cfg.grid_t = 8;
  cfg.grid_theta = 6;
  cfg.geodesic = true;
  const auto c = pipeline::run_construct(cfg);
  const auto v = pipeline::run_verify(cfg, c.trajectory, c.curve);
  int separated = 0;
  for (const auto& s : v.samples) {
    const double g01 = s.eigs[0] - s.eigs[1];
    const double g12 = s.eigs[1] - s.eigs[2];
    if (std::min(g01, g12) > 1e-2) ++separated;
  }
  const double frac = static_cast<double>(separated) / v.samples.size();
  report(6, "negative control (geodesic curve)", !v.report.pass && frac > 0.5,
         fmt("verify %s, %.0f%% of samples with pairwise gaps > 1e-2",
             v.report.pass ? "passed (BAD)" : "fails", 100 * frac));
}

// ---- criterion 7: equidistance of leaves ------------------------------------

void criterion7() {
  pipeline::RunConfig cfg;
  cfg.t_max = 0.2;
  const auto c = pipeline::run_construct(cfg);
  const curvebuilder::CurveEvaluator eval(cfg.params(), c.curve);
  const auto rep = hypersurface::check_equidistance(cfg.params(), eval, 0.05, 0.15, 5);
  const double rel = rep.spread / rep.mean;
  report(7, "equidistance of leaves", rel < 1e-3,
         fmt("spread/mean = %.3e (tol 1e-3) at separation 0.1", rel));
}

// ---- criterion 8: non-Hopf genericity sweep ---------------------------------

void criterion8() {
  pipeline::RunConfig cfg;
  cfg.t_max = 0.1;
  cfg.grid_t = 6;
  cfg.grid_theta = 6;
  const auto summary = pipeline::run_sweep(cfg, 8);
  int good = 0;
  for (const auto& r : summary.rows)
    if (r.constructed && r.min_b > 1e-3) ++good;
  report(8, "non-Hopf genericity (8 directions)", good >= 6,
         fmt("%d/8 directions with min-b > 1e-3 (need >= 6)", good));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%d/8 criteria passed in %.1fs\n", 8 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
