#include "hyperforge/curvebuilder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperforge::curvebuilder {

using curvatureflow::ode_rhs;
using spaceform::section_metric;
using spaceform::section_point;
using spaceform::section_project_tangent;

FrenetRates frenet_rhs(const SpaceFormParams& p, const V3& pos, const V3& tangent,
                       const V3& normal, double kappa) {
  return FrenetRates{tangent, kappa * normal - 0.25 * p.c * pos,
                     -kappa * tangent};
}

namespace {

struct FrameY {
  V3 pos, tan, nor;
};

FrameY add(const FrameY& y, const FrameY& d, double f) {
  return {y.pos + f * d.pos, y.tan + f * d.tan, y.nor + f * d.nor};
}

FrameY rates(const SpaceFormParams& p, const FrameY& y, double kappa) {
  const FrenetRates r = frenet_rhs(p, y.pos, y.tan, y.nor, kappa);
  return {r.dpos, r.dtangent, r.dnormal};
}

// one RK4 step of the frame with prescribed stage curvatures (k0, kmid, k1)
FrameY rk4_frame(const SpaceFormParams& p, const FrameY& y, double h, double k0,
                 double kmid, double k1) {
  const FrameY d1 = rates(p, y, k0);
  const FrameY d2 = rates(p, add(y, d1, h / 2), kmid);
  const FrameY d3 = rates(p, add(y, d2, h / 2), kmid);
  const FrameY d4 = rates(p, add(y, d3, h), k1);
  return {y.pos + h / 6 * (d1.pos + 2 * d2.pos + 2 * d3.pos + d4.pos),
          y.tan + h / 6 * (d1.tan + 2 * d2.tan + 2 * d3.tan + d4.tan),
          y.nor + h / 6 * (d1.nor + 2 * d2.nor + 2 * d3.nor + d4.nor)};
}

// renormalize pos onto the model and re-orthonormalize the frame
double renorm(const SpaceFormParams& p, FrameY& y) {
  double drift = 0.0;
  const double n2 = section_metric(p, y.pos, y.pos);
  const double target = p.lift_norm2();
  if (n2 * target <= 0.0)
    throw std::runtime_error("curve frame degenerated off the section model");
  const double sc = std::sqrt(target / n2);
  drift = std::max(drift, std::abs(sc - 1.0));
  y.pos *= sc;

  y.tan = section_project_tangent(p, SectionPoint{y.pos}, y.tan);
  const double nt = std::sqrt(section_metric(p, y.tan, y.tan));
  drift = std::max(drift, std::abs(nt - 1.0));
  y.tan /= nt;

  y.nor = section_project_tangent(p, SectionPoint{y.pos}, y.nor);
  const double tn = section_metric(p, y.tan, y.nor);
  drift = std::max(drift, std::abs(tn));
  y.nor -= tn * y.tan;
  const double nn = std::sqrt(section_metric(p, y.nor, y.nor));
  drift = std::max(drift, std::abs(nn - 1.0));
  y.nor /= nn;
  return drift;
}

double beta_rate(const CurvatureState& st, double c) {
  return -(3.0 * c / 8.0) * std::sin(2.0 * st.phi);
}

// stage curvatures over [t_k, t_{k+1}]
struct StageKappa {
  double k0, kmid, k1;
};

StageKappa stage_kappa(const Trajectory& traj, std::size_t k,
                       const CurveOptions& opts) {
  switch (opts.source) {
    case CurvatureSource::Zero:
      return {0.0, 0.0, 0.0};
    case CurvatureSource::ConstantBeta:
      return {opts.constant_kappa, opts.constant_kappa, opts.constant_kappa};
    case CurvatureSource::TrajectoryBeta:
      break;
  }
  const double h = traj.t[k + 1] - traj.t[k];
  const double b0 = traj.states[k].beta;
  const double b1 = traj.states[k + 1].beta;
  const double d0 = beta_rate(traj.states[k], traj.c);
  const double d1 = beta_rate(traj.states[k + 1], traj.c);
  // cubic Hermite midpoint, O(h^4): keeps the RK4 order of the frame step
  const double kmid = 0.5 * (b0 + b1) + 0.125 * h * (d0 - d1);
  return {b0, kmid, b1};
}

}  // namespace

std::vector<FramedCurveSample> reconstruct_curve(const SpaceFormParams& p,
                                                 const Trajectory& traj,
                                                 const SectionPoint& start,
                                                 const V3& w, const V3& xi,
                                                 const CurveOptions& opts,
                                                 double* max_drift) {
  if (traj.size() == 0) throw std::invalid_argument("reconstruct_curve: empty trajectory");
  if (traj.size() != traj.states.size())
    throw std::invalid_argument("reconstruct_curve: grid/state size mismatch");
  if (std::abs(section_metric(p, w, w) - 1.0) > 1e-8 ||
      std::abs(section_metric(p, xi, xi) - 1.0) > 1e-8 ||
      std::abs(section_metric(p, w, xi)) > 1e-8)
    throw std::invalid_argument("reconstruct_curve: (w, xi) must be orthonormal");

  std::vector<FramedCurveSample> out;
  out.reserve(traj.size());
  FrameY y{start.x, w, xi};
  double drift = renorm(p, y);
  out.push_back({traj.t[0], SectionPoint{y.pos}, y.tan, y.nor, traj.states[0]});

  for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
    const double h = traj.t[k + 1] - traj.t[k];
    const StageKappa sk = stage_kappa(traj, k, opts);
    y = rk4_frame(p, y, h, sk.k0, sk.kmid, sk.k1);
    drift = std::max(drift, renorm(p, y));
    out.push_back({traj.t[k + 1], SectionPoint{y.pos}, y.tan, y.nor,
                   traj.states[k + 1]});
  }
  if (max_drift) *max_drift = drift;
  return out;
}

CurveEvaluator::CurveEvaluator(SpaceFormParams p,
                               std::vector<FramedCurveSample> samples,
                               CurveOptions opts)
    : p_(p), samples_(std::move(samples)), opts_(opts) {
  if (samples_.empty()) throw std::invalid_argument("CurveEvaluator: no samples");
  if (!std::is_sorted(samples_.begin(), samples_.end(),
                      [](const auto& a, const auto& b) { return a.t < b.t; }))
    throw std::invalid_argument("CurveEvaluator: samples must be sorted in t");
}

FramedCurveSample CurveEvaluator::at(double t) const {
  // nearest node
  const auto it = std::lower_bound(
      samples_.begin(), samples_.end(), t,
      [](const FramedCurveSample& s, double v) { return s.t < v; });
  std::size_t idx;
  if (it == samples_.begin()) {
    idx = 0;
  } else if (it == samples_.end()) {
    idx = samples_.size() - 1;
  } else {
    const std::size_t hi = static_cast<std::size_t>(it - samples_.begin());
    idx = (t - samples_[hi - 1].t <= samples_[hi].t - t) ? hi - 1 : hi;
  }
  const FramedCurveSample& node = samples_[idx];
  const double dt = t - node.t;
  if (dt == 0.0) return node;

  FrameY y{node.pos.x, node.tangent, node.normal};
  CurvatureState st = node.state;

  if (opts_.source == CurvatureSource::TrajectoryBeta) {
    // coupled RK4 step: state and frame advance together
    using A6 = std::array<double, 3>;
    const auto stage = [&](const CurvatureState& s, const FrameY& fy)
        -> std::pair<A6, FrameY> {
      return {ode_rhs(s, p_.c), rates(p_, fy, s.beta)};
    };
    const auto bump = [](const CurvatureState& s, const A6& d, double f) {
      return CurvatureState{s.alpha + f * d[0], s.beta + f * d[1],
                            s.phi + f * d[2]};
    };
    const auto [a1, f1] = stage(st, y);
    const auto [a2, f2] = stage(bump(st, a1, dt / 2), add(y, f1, dt / 2));
    const auto [a3, f3] = stage(bump(st, a2, dt / 2), add(y, f2, dt / 2));
    const auto [a4, f4] = stage(bump(st, a3, dt), add(y, f3, dt));
    st = CurvatureState{
        st.alpha + dt / 6 * (a1[0] + 2 * a2[0] + 2 * a3[0] + a4[0]),
        st.beta + dt / 6 * (a1[1] + 2 * a2[1] + 2 * a3[1] + a4[1]),
        st.phi + dt / 6 * (a1[2] + 2 * a2[2] + 2 * a3[2] + a4[2])};
    y = {y.pos + dt / 6 * (f1.pos + 2 * f2.pos + 2 * f3.pos + f4.pos),
         y.tan + dt / 6 * (f1.tan + 2 * f2.tan + 2 * f3.tan + f4.tan),
         y.nor + dt / 6 * (f1.nor + 2 * f2.nor + 2 * f3.nor + f4.nor)};
  } else {
    const double kappa = opts_.source == CurvatureSource::Zero
                             ? 0.0
                             : opts_.constant_kappa;
    y = rk4_frame(p_, y, dt, kappa, kappa, kappa);
  }
  renorm(p_, y);
  return {t, SectionPoint{y.pos}, y.tan, y.nor, st};
}

}  // namespace hyperforge::curvebuilder
