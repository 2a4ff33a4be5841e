#pragma once

#include "hyperforge/spaceform.hpp"

#include <functional>
#include <utility>

namespace hyperforge::orbits {

using spaceform::AmbientPoint;
using spaceform::C3;
using spaceform::SectionPoint;
using spaceform::SpaceFormParams;
using spaceform::V3;

/// Parameters (r, s) of a principal-orbit shape operator pair; r' is derived
/// and never stored.
struct OrbitParams {
  double c;
  double r;
  double s;

  /// sqrt(c + 8 r^2); throws if the radicand is negative.
  double rprime() const;
};

struct ShapeOperatorPair {
  Eigen::Matrix2d S3;  // shape operator w.r.t. e3, symmetric
  Eigen::Matrix2d S4;  // shape operator w.r.t. e4, symmetric
};

/// Closed-form shape operators of a principal orbit in a parallel normal
/// frame (e3, e4).
ShapeOperatorPair shape_operator_matrices(const OrbitParams& op);

/// Principal curvatures w.r.t. the unit normal cos(theta) e3 + sin(theta) e4:
///   2 r cos(theta) +- sqrt(r'^2/8 + r^2 - (r r'/sqrt 2) cos(s + 2 theta)).
/// Larger eigenvalue first; the two are distinct whenever c != 0.
std::pair<double, double> orbit_principal_curvatures(const OrbitParams& op,
                                                     double theta);

/// A principal torus-orbit point: a regular section point plus the two
/// torus angles (the diagonal circle acts trivially on the base, so two
/// angles suffice with the first lift coordinate's phase held fixed).
struct OrbitPoint {
  SectionPoint section_base;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

constexpr double kRegularityEps = 1e-6;

/// Every lift coordinate of the embedded base must have modulus > eps.
bool is_regular(const SpaceFormParams& p, const SectionPoint& s,
                double eps = kRegularityEps);

/// Coordinatewise phases (1, e^{i th1}, e^{i th2}) applied to the embedded
/// section point.  Throws for non-regular bases.
AmbientPoint torus_orbit_point(const SpaceFormParams& p, const OrbitPoint& q);

/// Generic parametrized surface patch on the lift quadric.
using SurfacePatch = std::function<C3(double, double)>;

/// Numeric second-order geometry of a surface patch at parameter (0,0):
/// orthonormal tangent frame, orthonormal normal frame, numeric shape
/// operators, mean curvature, intrinsic Gauss curvature (via the Gauss
/// equation with the closed-form ambient curvature), and the Lagrangian
/// residual max |<J T_i, T_j>|.
struct OrbitGeometry {
  AmbientPoint point;
  C3 T1, T2;                     // orthonormal tangent frame
  C3 N1, N2;                     // orthonormal normal frame
  Eigen::Matrix2d S3, S4;        // numeric shape operators w.r.t. N1, N2
  Eigen::Vector2d mean_curvature;  // coefficients of H in (N1, N2)
  double gauss_curvature = 0.0;
  double lagrangian_residual = 0.0;
  Eigen::Matrix2d param_dirs;    // columns: parameter velocities realizing T1, T2
};

/// Geometry of an arbitrary patch; normal frame seeded from seedN (projected
/// onto the normal space) or, if seeds are empty, from J of the tangents.
OrbitGeometry surface_geometry(const SpaceFormParams& p, const SurfacePatch& F,
                               double h, const C3* seedN1 = nullptr,
                               const C3* seedN2 = nullptr);

/// Geometry of the torus orbit through q.  The normal frame is the
/// equivariant transport of the section tangent basis (parallel w.r.t. the
/// normal connection).  Step h in [1e-6, 1e-3].
OrbitGeometry numeric_orbit_geometry(const SpaceFormParams& p,
                                     const OrbitPoint& q, double h = 1e-4);

/// One normal-connection parallel-transport step of the frame (N1, N2) from
/// the patch point at parameter u0 to u0 + du, using substeps of the midpoint
/// scheme.  Returns the transported frame; *drift (optional) reports the
/// orthonormality defect accumulated before re-orthonormalization.
struct NormalFrame {
  C3 N1, N2;
  double drift = 0.0;
};

NormalFrame parallel_transport_normal_frame(const SpaceFormParams& p,
                                            const SurfacePatch& F,
                                            const Eigen::Vector2d& u0,
                                            const Eigen::Vector2d& du,
                                            const C3& N1, const C3& N2,
                                            int substeps, double fd_step);

/// max |d/ds <H, N_i>| over the two orbit directions, with the normal frame
/// parallel-transported from the center point.  The inner differencing uses
/// fd_step; the outer derivative spans +-outer_step (H is constant along the
/// orbit, so any outer step estimates the same derivative; a wider one
/// averages out the second-difference roundoff floor).
double parallel_mean_curvature_residual(const SpaceFormParams& p,
                                        const OrbitPoint& q,
                                        double fd_step = 1e-4,
                                        double outer_step = 1e-2);

/// Gauge-resolved inversion of the closed-form matrix family: least-residual
/// (r, s) plus the frame alignment mapping the measured frames onto the
/// family's.  Throws if the residual exceeds max_residual (the surface is
/// not a principal orbit).
struct OrbitFit {
  OrbitParams params;
  double normal_angle = 0.0;   // measured N-frame angle against (e3, e4)
  double tangent_angle = 0.0;  // measured T-frame rotation against the family's
  bool normal_flip = false;    // measured N2 = -family e4 direction
  bool tangent_flip = false;   // measured T-frame reflected
  double residual = 0.0;       // max-entry rebuild error

  /// Matrices of the fitted family expressed in the measured frames.
  ShapeOperatorPair rebuild() const;
};

OrbitFit fit_orbit_params(double c, const Eigen::Matrix2d& S3,
                          const Eigen::Matrix2d& S4,
                          double max_residual = 1e-6);

/// Orbit point of the CH^2 cohomogeneity-two family generated by the pair
/// of u(1,2) matrices with parameters (r, s): exp(t X + u Yhat) applied to
/// the hyperboloid base point (R, 0, 0).  Requires c < 0 and c + 8 r^2 >= 0.
AmbientPoint ch2_hirakawa_orbit(double c, double r, double s, double t,
                                double u);

}  // namespace hyperforge::orbits
