#include "hyperforge/curvatureflow.hpp"

#include "hyperforge/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hyperforge::curvatureflow {

using spaceform::C3;
using spaceform::complexd;

std::string to_string(Branch b) {
  return b == Branch::BetaDouble ? "beta-double" : "alpha-double";
}

std::string to_string(HaltReason r) {
  switch (r) {
    case HaltReason::None: return "none";
    case HaltReason::GapCollapse: return "gap-collapse";
    case HaltReason::AngleCollapse: return "angle-collapse";
    case HaltReason::StepUnderflow: return "step-underflow";
  }
  return "none";
}

Branch branch_from_string(const std::string& s) {
  if (s == "beta-double") return Branch::BetaDouble;
  if (s == "alpha-double") return Branch::AlphaDouble;
  throw std::invalid_argument("unknown branch: " + s);
}

HaltReason halt_from_string(const std::string& s) {
  if (s == "none") return HaltReason::None;
  if (s == "gap-collapse") return HaltReason::GapCollapse;
  if (s == "angle-collapse") return HaltReason::AngleCollapse;
  if (s == "step-underflow") return HaltReason::StepUnderflow;
  throw std::invalid_argument("unknown halt reason: " + s);
}

std::array<double, 3> ode_rhs(const CurvatureState& st, double c,
                              const OdeLimits& lim) {
  const double gap = st.alpha - st.beta;
  if (std::abs(gap) <= lim.gap_eps)
    throw SingularityError(HaltReason::GapCollapse,
                           "ode_rhs: |alpha - beta| below gap threshold");
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(st.phi > lim.angle_margin && st.phi < half_pi - lim.angle_margin))
    throw SingularityError(HaltReason::AngleCollapse,
                           "ode_rhs: phi outside (0, pi/2) margin");
  const double s = std::sin(st.phi);
  const double s2 = s * s;
  const double dalpha =
      0.25 * (c * (2.0 - 3.0 * s2) + 4.0 * st.alpha * gap) * std::tan(st.phi);
  const double dbeta = -(3.0 * c / 8.0) * std::sin(2.0 * st.phi);
  const double dphi = st.beta + c * (1.0 - 3.0 * s2) / (4.0 * gap);
  return {dalpha, dbeta, dphi};
}

namespace {

using Y = std::array<double, 3>;

Y add(const Y& a, const Y& b, double f) {
  return {a[0] + f * b[0], a[1] + f * b[1], a[2] + f * b[2]};
}

CurvatureState as_state(const Y& y) { return {y[0], y[1], y[2]}; }

Y rk4_step(const Y& y, double c, double h, const OdeLimits& lim) {
  const Y k1 = ode_rhs(as_state(y), c, lim);
  const Y k2 = ode_rhs(as_state(add(y, k1, h / 2)), c, lim);
  const Y k3 = ode_rhs(as_state(add(y, k2, h / 2)), c, lim);
  const Y k4 = ode_rhs(as_state(add(y, k3, h)), c, lim);
  return {y[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
          y[2] + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])};
}

bool guards_ok(const Y& y, const OdeLimits& lim) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  return std::abs(y[0] - y[1]) > lim.gap_eps && y[2] > lim.angle_margin &&
         y[2] < half_pi - lim.angle_margin && std::isfinite(y[0]) &&
         std::isfinite(y[1]) && std::isfinite(y[2]);
}

}  // namespace

Trajectory integrate(const CurvatureState& init, double c,
                     std::pair<double, double> t_span, double tol,
                     const IntegrateOptions& opts) {
  if (!(tol > 0.0)) throw std::invalid_argument("integrate: tol must be > 0");
  if (!guards_ok({init.alpha, init.beta, init.phi}, opts.limits))
    throw std::invalid_argument("integrate: initial state violates invariants");

  Trajectory traj;
  traj.c = c;
  traj.branch = opts.branch;
  traj.t.push_back(t_span.first);
  traj.states.push_back(init);

  const double span = t_span.second - t_span.first;
  if (span == 0.0) return traj;
  const double dir = span > 0.0 ? 1.0 : -1.0;

  Y y{init.alpha, init.beta, init.phi};
  double t = t_span.first;
  const bool fixed = opts.fixed_step > 0.0;
  double h = dir * (fixed ? opts.fixed_step : opts.initial_step);

  while (dir * (t_span.second - t) > 1e-15 * std::max(1.0, std::abs(span))) {
    if (dir * (t + h) > dir * t_span.second) h = t_span.second - t;

    Y y_next;
    double err = 0.0;
    try {
      if (fixed) {
        y_next = rk4_step(y, c, h, opts.limits);
      } else {
        const Y full = rk4_step(y, c, h, opts.limits);
        const Y half = rk4_step(rk4_step(y, c, h / 2, opts.limits), c, h / 2,
                                opts.limits);
        err = std::max({std::abs(half[0] - full[0]), std::abs(half[1] - full[1]),
                        std::abs(half[2] - full[2])}) /
              15.0;
        y_next = half;
      }
    } catch (const SingularityError& e) {
      if (fixed || std::abs(h) / 2 < opts.min_step) {
        traj.halt = e.reason();
        return traj;
      }
      h /= 2;
      continue;
    }

    const double scale = std::max({1.0, std::abs(y[0]), std::abs(y[1])});
    if (!fixed && err > tol * scale) {
      if (std::abs(h) / 2 < opts.min_step) {
        traj.halt = HaltReason::StepUnderflow;
        return traj;
      }
      h /= 2;
      continue;
    }
    if (!guards_ok(y_next, opts.limits)) {
      traj.halt = std::abs(y_next[0] - y_next[1]) <= opts.limits.gap_eps
                      ? HaltReason::GapCollapse
                      : HaltReason::AngleCollapse;
      return traj;
    }

    t += h;
    y = y_next;
    traj.t.push_back(t);
    traj.states.push_back(as_state(y));

    if (!fixed && err < tol * scale / 64.0 && std::abs(h) * 2 <= opts.max_step)
      h *= 2;
  }
  return traj;
}

InitialData initial_conditions_from_orbit(const SpaceFormParams& p,
                                          const SectionPoint& pt, const V3& w,
                                          Branch branch,
                                          const InitialConditionOptions& opts) {
  if (!orbits::is_regular(p, pt))
    throw std::invalid_argument("initial_conditions: point is not regular");
  if (std::abs(section_metric(p, w, w) - 1.0) > 1e-8)
    throw std::invalid_argument("initial_conditions: w must be unit");
  if (std::abs(section_metric(p, pt.x, w)) > 1e-8)
    throw std::invalid_argument("initial_conditions: w must be tangent at p");

  // in-section unit normal: w rotated by +90 degrees in the oriented basis
  const auto basis = section_tangent_basis(p, pt);
  const double c1 = section_metric(p, w, basis[0]);
  const double c2 = section_metric(p, w, basis[1]);
  V3 xi = -c2 * basis[0] + c1 * basis[1];

  const auto geo = orbits::numeric_orbit_geometry(p, {pt, 0.0, 0.0}, opts.fd_step);

  // shape operator of the orbit w.r.t. xi, in the (T1, T2) frame
  const C3 xiv = xi.cast<complexd>();
  const double n1 = p.inner(xiv, geo.N1);
  const double n2 = p.inner(xiv, geo.N2);
  const Eigen::Matrix2d Sxi = n1 * geo.S3 + n2 * geo.S4;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Sxi);
  const double lam_lo = es.eigenvalues()[0];
  const double lam_hi = es.eigenvalues()[1];
  const C3 E_lo = es.eigenvectors()(0, 0) * geo.T1 + es.eigenvectors()(1, 0) * geo.T2;
  const C3 E_hi = es.eigenvectors()(0, 1) * geo.T1 + es.eigenvectors()(1, 1) * geo.T2;

  // branch decides which eigenvalue becomes alpha0 (the simple curvature)
  const bool beta_double = branch == Branch::BetaDouble;
  const C3& E_alpha = beta_double ? E_hi : E_lo;
  double alpha0 = beta_double ? lam_hi : lam_lo;
  double beta0 = beta_double ? lam_lo : lam_hi;

  const C3 Jxi = complexd(0, 1) * xiv;
  const C3 Jw = complexd(0, 1) * w.cast<complexd>();
  double proj_a = p.inner(Jxi, E_alpha);

  // orientation fix of Remark-style construction: <Jw, U_p> > 0
  if (p.inner(Jw, E_alpha) * proj_a < 0.0) {
    xi = -xi;
    alpha0 = -alpha0;
    beta0 = -beta0;
    proj_a = -proj_a;
  }

  const double a0 = std::clamp(std::abs(proj_a), 0.0, 1.0);
  const double phi0 = std::acos(a0);
  constexpr double half_pi = std::numbers::pi / 2.0;
  if (!(phi0 > opts.hopf_margin && phi0 < half_pi - opts.hopf_margin))
    throw SingularityError(HaltReason::AngleCollapse,
                           "initial_conditions: Hopf initial data (phi0 at 0 or pi/2)");

  if (std::abs(alpha0 - beta0) <= 1e-8)
    throw SingularityError(HaltReason::GapCollapse,
                           "initial_conditions: coincident orbit curvatures");

  return InitialData{CurvatureState{alpha0, beta0, phi0}, xi, w};
}

}  // namespace hyperforge::curvatureflow
