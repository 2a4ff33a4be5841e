#pragma once

#include "hyperforge/curvebuilder.hpp"
#include "hyperforge/spaceform.hpp"

#include <array>
#include <optional>
#include <vector>

namespace hyperforge::hypersurface {

using curvatureflow::CurvatureState;
using curvebuilder::CurveEvaluator;
using spaceform::AmbientPoint;
using spaceform::C3;
using spaceform::SpaceFormParams;

/// Decomposition of J xi against the eigenspaces: J xi = a U + b V with U in
/// the simple eigenspace and V, A spanning the multiplicity-two one.
/// degenerate marks samples where b < 1e-6 (J xi numerically principal);
/// U, V, A are not meaningful there.
struct HopfFrame {
  double a = 0.0;
  double b = 0.0;
  double phi = 0.0;
  C3 U, V, A;
  bool degenerate = false;
};

struct HypersurfaceSample {
  double t = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;
  AmbientPoint point;
  std::array<C3, 3> frame;  // curve direction, then the two orbit directions
  C3 normal;
  CurvatureState ode_state;  // trajectory state at t

  Eigen::Matrix3d shape = Eigen::Matrix3d::Zero();  // in frame coordinates
  Eigen::Vector3d eigs = Eigen::Vector3d::Zero();   // descending
  Eigen::Matrix3d eigvecs = Eigen::Matrix3d::Zero();
  double shape_asymmetry = 0.0;
  HopfFrame hopf;
};

struct SweepGrid {
  int n_t = 20;
  int n_theta = 12;
};

/// Point of M = H * gamma at parameters (t, th1, th2).
C3 sweep_point(const SpaceFormParams& p, const CurveEvaluator& curve, double t,
               double th1, double th2);

/// Geometric scaffolding of one sample: point, orthonormal tangent frame
/// from the parametrization derivatives, and the transported unit normal
/// (matches the curve's xi at angles (0,0)).  Shape data is left empty.
HypersurfaceSample sample_at(const SpaceFormParams& p, const CurveEvaluator& curve,
                             double t, double th1, double th2);

/// Samples on the (n_t) x (n_theta)^2 grid over the curve's t-range and
/// [0, 2pi)^2.  Geometry only; see numeric_shape_operator / analyze_samples.
std::vector<HypersurfaceSample> sample_hypersurface(const SpaceFormParams& p,
                                                    const CurveEvaluator& curve,
                                                    const SweepGrid& grid);

/// S X = -(D_X xi)^T by central differences of the transported normal field
/// along the parametrization, with the lift-quadric connection correction and
/// horizontal projection.  Returns the symmetrized matrix in the sample's
/// frame; the asymmetry defect is reported through the sample.  Throws when
/// the defect exceeds asymmetry_tol.
Eigen::Matrix3d numeric_shape_operator(const SpaceFormParams& p,
                                       const CurveEvaluator& curve,
                                       HypersurfaceSample& s, double h,
                                       double asymmetry_tol = 1e-5);

/// Eigen-split and Hopf decomposition of an analyzed sample.
HopfFrame hopf_frame(const SpaceFormParams& p, const HypersurfaceSample& s,
                     double b_degenerate = 1e-6);

/// Fills shape, eigs, eigvecs and hopf for every sample.
void analyze_samples(const SpaceFormParams& p, const CurveEvaluator& curve,
                     std::vector<HypersurfaceSample>& samples, double h);

struct VerifyTolerances {
  double tol_mult;   // intra-pair spread of the double eigenvalue
  double tol_match;  // |eigenvalue - ODE curvature|
  double tol_hopf;   // |phi_num - phi|

  static VerifyTolerances defaults(double c) {
    return {1e-3 * std::max(1.0, std::abs(c)), 5e-3, 1e-3};
  }
};

struct SampleResidual {
  double t, theta1, theta2;
  double intra_pair_spread;
  double double_residual;
  double simple_residual;
  double hopf_residual;
  double b;  // sin(phi_num), non-Hopf margin
  bool degenerate;
  bool ok;
};

struct CurvatureReport {
  std::vector<SampleResidual> rows;
  double max_spread = 0.0;
  double max_double_residual = 0.0;
  double max_simple_residual = 0.0;
  double max_hopf_residual = 0.0;
  double mean_double_residual = 0.0;
  double mean_simple_residual = 0.0;
  double min_b = 0.0;
  bool pass = false;
  VerifyTolerances tols{};
};

/// Per-sample two-group eigenvalue split checked against the trajectory's
/// (alpha, beta) carried by the samples.
CurvatureReport verify_two_curvatures(const SpaceFormParams& p,
                                      const std::vector<HypersurfaceSample>& samples,
                                      const VerifyTolerances& tols);

struct EquidistanceReport {
  std::vector<double> distances;  // per probe, minimized over the target leaf
  double mean = 0.0;
  double spread = 0.0;  // max - min
};

/// Distances from probes on the leaf at t1 to the (continuous) leaf at t2,
/// each minimized over the target torus angles by compass search.
EquidistanceReport check_equidistance(const SpaceFormParams& p,
                                      const CurveEvaluator& curve, double t1,
                                      double t2, int n_probe = 6);

struct GaussCodazziResidual {
  double codazzi_max = 0.0;
  double gauss_max = 0.0;
};

/// Residuals of the Codazzi and Gauss equations at parameters (t, th1, th2),
/// built from coordinate vector fields of the sweep parametrization; the
/// ambient side uses the closed-form curvature tensor.  shape_override, when
/// given, replaces the center-point shape operator (frame coordinates).
GaussCodazziResidual gauss_codazzi_residual(
    const SpaceFormParams& p, const CurveEvaluator& curve, double t, double th1,
    double th2, double h, const Eigen::Matrix3d* shape_override = nullptr);

}  // namespace hyperforge::hypersurface
