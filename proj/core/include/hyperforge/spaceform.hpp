#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <functional>

namespace hyperforge::spaceform {

using C3 = Eigen::Vector3cd;
using V3 = Eigen::Vector3d;
using complexd = std::complex<double>;

enum class Kind { Projective, Hyperbolic };

/// Ambient model of the complex space form M(c), complex dimension 2:
/// the base of the Hopf fibration over the radius-R sphere in C^3 (c > 0),
/// or of the anti-Hopf fibration over the Lorentz hyperboloid in C^{1,2}
/// (c < 0), with R = 2/sqrt(|c|).  All points live on the lift quadric
/// <z,z> = +-R^2; tangent vectors are horizontal lifts.
struct SpaceFormParams {
  Kind kind;
  double c;  // holomorphic sectional curvature; nonzero, sign matches kind

  double radius() const { return 2.0 / std::sqrt(std::abs(c)); }

  // signature weight of the 0-th coordinate: +1 Euclidean, -1 Lorentz
  double sig0() const { return kind == Kind::Projective ? 1.0 : -1.0; }

  // <z,z> held by every lift point: +R^2 (sphere) or -R^2 (hyperboloid)
  double lift_norm2() const {
    const double r = radius();
    return sig0() * r * r;
  }

  /// Hermitian form of the lift space, conjugate-linear in the first slot.
  complexd hermitian(const C3& z, const C3& w) const {
    return sig0() * std::conj(z[0]) * w[0] + std::conj(z[1]) * w[1] +
           std::conj(z[2]) * w[2];
  }

  /// Real part of the Hermitian form: the ambient Riemannian metric
  /// (positive definite on horizontal vectors).
  double inner(const C3& v, const C3& w) const { return hermitian(v, w).real(); }
};

SpaceFormParams projective(double c);
SpaceFormParams hyperbolic(double c);
SpaceFormParams make_params(Kind kind, double c);

/// A point of the lift quadric.  Equality of base points is up to a unit
/// complex phase; see same_base_point.
struct AmbientPoint {
  C3 z;
};

/// Horizontal tangent vector attached to a lift point: <v, z> = 0 as a
/// complex number, i.e. v is orthogonal to both z and iz.
struct TangentVec {
  AmbientPoint base;
  C3 v;
};

/// A point of the totally geodesic totally real section Sigma, in its
/// own model: the radius-R sphere in R^3, or the upper hyperboloid sheet
/// <x,x> = -R^2 in R^{1,2}.  Both have constant curvature c/4.
struct SectionPoint {
  V3 x;
};

// ---- lift-point utilities ------------------------------------------------

/// Scale z back onto the quadric.  Throws if z is on the wrong side of the
/// light cone (hyperbolic) or numerically zero.
AmbientPoint renormalized(const SpaceFormParams& p, const C3& z);

/// Validated constructor: requires |<z,z> - lift_norm2| within tol, then
/// renormalizes exactly.
AmbientPoint ambient_point(const SpaceFormParams& p, const C3& z,
                           double tol = 1e-6);

/// Base points agree iff |<z,w>| = R^2 (lift phases may differ).
bool same_base_point(const SpaceFormParams& p, const AmbientPoint& a,
                     const AmbientPoint& b, double tol = 1e-10);

/// Geodesic distance between base points of M(c).
double base_distance(const SpaceFormParams& p, const AmbientPoint& a,
                     const AmbientPoint& b);

// ---- tangent vectors -----------------------------------------------------

/// Project out the complex span of z (both the quadric normal and the
/// vertical fibre direction), leaving the horizontal component.
C3 horizontal_project(const SpaceFormParams& p, const C3& z, const C3& v);

/// Validated constructor: requires |<base.z, v>| within tol of zero.
TangentVec tangent_vec(const SpaceFormParams& p, const AmbientPoint& base,
                       const C3& v, double tol = 1e-10);

TangentVec horizontalized(const SpaceFormParams& p, const AmbientPoint& base,
                          const C3& v);

/// Riemannian metric on horizontal vectors.  Throws on mismatched bases.
double metric(const SpaceFormParams& p, const TangentVec& X,
              const TangentVec& Y);

/// Complex structure: multiplication by i on horizontal vectors.
TangentVec apply_J(const SpaceFormParams& p, const TangentVec& X);

/// <R(X,Y)V, W> of the constant-holomorphic-curvature ambient, evaluated
/// algebraically from the metric and J.
double curvature_tensor(const SpaceFormParams& p, const TangentVec& X,
                        const TangentVec& Y, const TangentVec& V,
                        const TangentVec& W);

// ---- geodesics -------------------------------------------------------------

/// Closed-form horizontal geodesic through p with unit initial velocity v.
AmbientPoint geodesic(const SpaceFormParams& p, const AmbientPoint& base,
                      const TangentVec& v, double t);

struct GeodesicState {
  AmbientPoint point;
  TangentVec velocity;  // parallel transport of v along the geodesic
};

GeodesicState geodesic_flow(const SpaceFormParams& p, const AmbientPoint& base,
                            const TangentVec& v, double t);

// ---- section ---------------------------------------------------------------

/// Model bilinear form of the section: Euclidean or Lorentz dot product.
double section_metric(const SpaceFormParams& p, const V3& u, const V3& w);

/// Validated constructor; renormalizes onto the model quadric.
SectionPoint section_point(const SpaceFormParams& p, const V3& x,
                           double tol = 1e-9);

V3 section_project_tangent(const SpaceFormParams& p, const SectionPoint& s,
                           const V3& u);

/// Deterministic orthonormal basis of the tangent plane at s, built by
/// Gram-Schmidt over the coordinate axes.
std::array<V3, 2> section_tangent_basis(const SpaceFormParams& p,
                                        const SectionPoint& s);

/// All-real embedding of the section into the lift quadric.
AmbientPoint section_embed(const SpaceFormParams& p, const SectionPoint& s);

TangentVec section_tangent_embed(const SpaceFormParams& p,
                                 const SectionPoint& s, const V3& u);

SectionPoint section_geodesic(const SpaceFormParams& p, const SectionPoint& s,
                              const V3& u, double t);

struct SectionGeodesicState {
  SectionPoint point;
  V3 velocity;
};

SectionGeodesicState section_geodesic_flow(const SpaceFormParams& p,
                                           const SectionPoint& s, const V3& u,
                                           double t);

double section_distance(const SpaceFormParams& p, const SectionPoint& a,
                        const SectionPoint& b);

// ---- path calculus on the lift quadric -------------------------------------
//
// Covariant derivatives of the base M(c) computed through the submersion.
// For a path F on the quadric (not necessarily horizontal) the horizontal
// lift is e^{i psi(t)} F(t) with psi'(0) = i<F,F'>/<F,F>, and the base
// covariant derivative of a horizontal field W attached along F is
//
//     D_t W  =  hor( W' + i psi'(0) W(0) ),
//
// exact at t = 0; in particular the base acceleration of the projected path
// is hor(F'') + 2 i psi' hor(F').  Stencil wrappers use 3-point central
// differences at step h.

using AmbientPath = std::function<C3(double)>;

double phase_rate(const SpaceFormParams& p, const C3& z, const C3& dz);

C3 covariant_derivative(const SpaceFormParams& p, const C3& z, const C3& dF,
                        const C3& W0, const C3& dW);

C3 covariant_acceleration(const SpaceFormParams& p, const C3& z, const C3& dF,
                          const C3& d2F);

C3 path_velocity(const SpaceFormParams& p, const AmbientPath& F, double h);

C3 path_acceleration(const SpaceFormParams& p, const AmbientPath& F, double h);

/// Derivative of the field W (horizontal at F(t)) along the projected path.
C3 field_derivative(const SpaceFormParams& p, const AmbientPath& F,
                    const AmbientPath& W, double h);

}  // namespace hyperforge::spaceform
