#pragma once

#include "hyperforge/curvatureflow.hpp"
#include "hyperforge/spaceform.hpp"

#include <vector>

namespace hyperforge::curvebuilder {

using curvatureflow::CurvatureState;
using curvatureflow::Trajectory;
using spaceform::SectionPoint;
using spaceform::SpaceFormParams;
using spaceform::V3;

/// One node of the reconstructed unit-speed curve gamma in the section:
/// position, unit tangent, in-section unit normal (the restriction of xi),
/// and the attached ODE state.
struct FramedCurveSample {
  double t;
  SectionPoint pos;
  V3 tangent;
  V3 normal;
  CurvatureState state;
};

/// Where the prescribed geodesic curvature kappa(t) comes from.
enum class CurvatureSource {
  TrajectoryBeta,  // the trajectory's multiplicity-two curvature (the construction)
  Zero,            // section geodesic, negative control
  ConstantBeta,    // fixed kappa, for closed-form checks
};

struct CurveOptions {
  CurvatureSource source = CurvatureSource::TrajectoryBeta;
  double constant_kappa = 0.0;  // used by ConstantBeta
};

/// Frenet derivatives in the section's flat embedding space: the position
/// term -(c/4) pos is the ambient correction keeping the motion on the
/// curvature-c/4 model (both signs of c share the formula).
struct FrenetRates {
  V3 dpos;
  V3 dtangent;
  V3 dnormal;
};

FrenetRates frenet_rhs(const SpaceFormParams& p, const V3& pos, const V3& tangent,
                       const V3& normal, double kappa);

/// Co-integrates the frame along the trajectory's t-grid with kappa(t) given
/// by the multiplicity-two curvature (RK4; interval-midpoint kappa by cubic
/// Hermite from the ODE's beta-law).  Frames are re-orthonormalized each
/// step; the largest correction is reported through max_drift when given.
std::vector<FramedCurveSample> reconstruct_curve(const SpaceFormParams& p,
                                                 const Trajectory& traj,
                                                 const SectionPoint& start,
                                                 const V3& w, const V3& xi,
                                                 const CurveOptions& opts = {},
                                                 double* max_drift = nullptr);

/// Dense curve evaluation: one local coupled RK4 step (ODE state + frame)
/// from the nearest stored node.  Off-node states are advanced together with
/// the frame for TrajectoryBeta, and held for the synthetic sources.
class CurveEvaluator {
 public:
  CurveEvaluator(SpaceFormParams p, std::vector<FramedCurveSample> samples,
                 CurveOptions opts = {});

  FramedCurveSample at(double t) const;

  double t_front() const { return samples_.front().t; }
  double t_back() const { return samples_.back().t; }
  const std::vector<FramedCurveSample>& samples() const { return samples_; }
  const SpaceFormParams& params() const { return p_; }
  const CurveOptions& options() const { return opts_; }

 private:
  SpaceFormParams p_;
  std::vector<FramedCurveSample> samples_;
  CurveOptions opts_;
};

}  // namespace hyperforge::curvebuilder
