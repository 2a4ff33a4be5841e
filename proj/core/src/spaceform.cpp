#include "hyperforge/spaceform.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperforge::spaceform {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

SpaceFormParams projective(double c) { return make_params(Kind::Projective, c); }

SpaceFormParams hyperbolic(double c) { return make_params(Kind::Hyperbolic, c); }

SpaceFormParams make_params(Kind kind, double c) {
  require(c != 0.0 && std::isfinite(c), "space form: c must be finite and nonzero");
  if (kind == Kind::Projective) require(c > 0.0, "space form: projective needs c > 0");
  if (kind == Kind::Hyperbolic) require(c < 0.0, "space form: hyperbolic needs c < 0");
  return SpaceFormParams{kind, c};
}

AmbientPoint renormalized(const SpaceFormParams& p, const C3& z) {
  const double n2 = p.hermitian(z, z).real();
  const double target = p.lift_norm2();
  require(n2 * target > 0.0, "renormalized: point on wrong side of the quadric");
  return AmbientPoint{z * std::sqrt(target / n2)};
}

AmbientPoint ambient_point(const SpaceFormParams& p, const C3& z, double tol) {
  const double n2 = p.hermitian(z, z).real();
  const double target = p.lift_norm2();
  require(std::abs(n2 - target) <= tol * std::max(1.0, std::abs(target)),
          "ambient_point: norm constraint violated");
  return renormalized(p, z);
}

bool same_base_point(const SpaceFormParams& p, const AmbientPoint& a,
                     const AmbientPoint& b, double tol) {
  const double r2 = std::abs(p.lift_norm2());
  return std::abs(std::abs(p.hermitian(a.z, b.z)) - r2) <= tol * r2;
}

double base_distance(const SpaceFormParams& p, const AmbientPoint& a,
                     const AmbientPoint& b) {
  const double R = p.radius();
  const double q = std::abs(p.hermitian(a.z, b.z)) / (R * R);
  if (p.kind == Kind::Projective) {
    return R * std::acos(std::clamp(q, -1.0, 1.0));
  }
  return R * std::acosh(std::max(1.0, q));
}

C3 horizontal_project(const SpaceFormParams& p, const C3& z, const C3& v) {
  return v - z * (p.hermitian(z, v) / p.hermitian(z, z));
}

TangentVec tangent_vec(const SpaceFormParams& p, const AmbientPoint& base,
                       const C3& v, double tol) {
  const double scale = std::max(1.0, v.norm() * base.z.norm());
  require(std::abs(p.hermitian(base.z, v)) <= tol * scale,
          "tangent_vec: vector is not horizontal at base");
  return TangentVec{base, v};
}

TangentVec horizontalized(const SpaceFormParams& p, const AmbientPoint& base,
                          const C3& v) {
  return TangentVec{base, horizontal_project(p, base.z, v)};
}

namespace {

void require_same_base(const SpaceFormParams& p, const TangentVec& X,
                       const TangentVec& Y) {
  if ((X.base.z - Y.base.z).norm() > 1e-9 * X.base.z.norm())
    throw std::invalid_argument("tangent vectors attached to different base points");
  (void)p;
}

}  // namespace

double metric(const SpaceFormParams& p, const TangentVec& X, const TangentVec& Y) {
  require_same_base(p, X, Y);
  return p.inner(X.v, Y.v);
}

TangentVec apply_J(const SpaceFormParams& p, const TangentVec& X) {
  const double scale = std::max(1.0, X.v.norm() * X.base.z.norm());
  require(std::abs(p.hermitian(X.base.z, X.v)) <= 1e-8 * scale,
          "apply_J: input is not horizontal");
  return TangentVec{X.base, complexd(0.0, 1.0) * X.v};
}

double curvature_tensor(const SpaceFormParams& p, const TangentVec& X,
                        const TangentVec& Y, const TangentVec& V,
                        const TangentVec& W) {
  require_same_base(p, X, Y);
  require_same_base(p, X, V);
  require_same_base(p, X, W);
  const C3 JX = complexd(0, 1) * X.v;
  const C3 JY = complexd(0, 1) * Y.v;
  const C3 JV = complexd(0, 1) * V.v;
  const auto g = [&](const C3& a, const C3& b) { return p.inner(a, b); };
  return 0.25 * p.c *
         (g(Y.v, V.v) * g(X.v, W.v) - g(X.v, V.v) * g(Y.v, W.v) +
          g(JY, V.v) * g(JX, W.v) - g(JX, V.v) * g(JY, W.v) -
          2.0 * g(JX, Y.v) * g(JV, W.v));
}

GeodesicState geodesic_flow(const SpaceFormParams& p, const AmbientPoint& base,
                            const TangentVec& v, double t) {
  if ((v.base.z - base.z).norm() > 1e-9 * base.z.norm())
    throw std::invalid_argument("geodesic: velocity not attached at base");
  const double n = std::sqrt(p.inner(v.v, v.v));
  require(n > 1e-12, "geodesic: zero velocity");
  require(std::abs(n - 1.0) <= 1e-6, "geodesic: velocity must be unit");
  const double R = p.radius();
  C3 z, dz;
  if (p.kind == Kind::Projective) {
    z = std::cos(t / R) * base.z + R * std::sin(t / R) * v.v;
    dz = -(1.0 / R) * std::sin(t / R) * base.z + std::cos(t / R) * v.v;
  } else {
    z = std::cosh(t / R) * base.z + R * std::sinh(t / R) * v.v;
    dz = (1.0 / R) * std::sinh(t / R) * base.z + std::cosh(t / R) * v.v;
  }
  AmbientPoint pt = renormalized(p, z);
  return GeodesicState{pt, TangentVec{pt, horizontal_project(p, pt.z, dz)}};
}

AmbientPoint geodesic(const SpaceFormParams& p, const AmbientPoint& base,
                      const TangentVec& v, double t) {
  return geodesic_flow(p, base, v, t).point;
}

// ---- section ---------------------------------------------------------------

double section_metric(const SpaceFormParams& p, const V3& u, const V3& w) {
  return p.sig0() * u[0] * w[0] + u[1] * w[1] + u[2] * w[2];
}

SectionPoint section_point(const SpaceFormParams& p, const V3& x, double tol) {
  const double n2 = section_metric(p, x, x);
  const double target = p.lift_norm2();
  require(n2 * target > 0.0, "section_point: wrong side of the model quadric");
  if (p.kind == Kind::Hyperbolic)
    require(x[0] > 0.0, "section_point: hyperboloid model needs x0 > 0");
  require(std::abs(n2 - target) <= tol * std::abs(target),
          "section_point: norm constraint violated");
  return SectionPoint{x * std::sqrt(target / n2)};
}

V3 section_project_tangent(const SpaceFormParams& p, const SectionPoint& s,
                           const V3& u) {
  return u - s.x * (section_metric(p, s.x, u) / section_metric(p, s.x, s.x));
}

std::array<V3, 2> section_tangent_basis(const SpaceFormParams& p,
                                        const SectionPoint& s) {
  std::array<V3, 2> basis;
  int found = 0;
  for (int axis = 0; axis < 3 && found < 2; ++axis) {
    V3 v = section_project_tangent(p, s, V3::Unit(axis));
    for (int j = 0; j < found; ++j)
      v -= basis[j] * section_metric(p, basis[j], v);
    const double n2 = section_metric(p, v, v);
    if (n2 > 1e-12) basis[found++] = v / std::sqrt(n2);
  }
  require(found == 2, "section_tangent_basis: degenerate point");
  return basis;
}

AmbientPoint section_embed(const SpaceFormParams& p, const SectionPoint& s) {
  return renormalized(p, s.x.cast<complexd>());
}

TangentVec section_tangent_embed(const SpaceFormParams& p,
                                 const SectionPoint& s, const V3& u) {
  require(std::abs(section_metric(p, s.x, u)) <= 1e-8 * std::max(1.0, u.norm()),
          "section_tangent_embed: u is not tangent at s");
  return TangentVec{section_embed(p, s), u.cast<complexd>()};
}

SectionGeodesicState section_geodesic_flow(const SpaceFormParams& p,
                                           const SectionPoint& s, const V3& u,
                                           double t) {
  const double n = std::sqrt(section_metric(p, u, u));
  require(n > 1e-12, "section_geodesic: zero velocity");
  const double R = p.radius();
  const double a = t * n / R;  // arc angle for speed-n parametrization
  V3 x, dx;
  if (p.kind == Kind::Projective) {
    x = std::cos(a) * s.x + (R / n) * std::sin(a) * u;
    dx = -(n / R) * std::sin(a) * s.x + std::cos(a) * u;
  } else {
    x = std::cosh(a) * s.x + (R / n) * std::sinh(a) * u;
    dx = (n / R) * std::sinh(a) * s.x + std::cosh(a) * u;
  }
  SectionPoint pt{x * std::sqrt(std::abs(p.lift_norm2() / section_metric(p, x, x)))};
  return SectionGeodesicState{pt, section_project_tangent(p, pt, dx)};
}

SectionPoint section_geodesic(const SpaceFormParams& p, const SectionPoint& s,
                              const V3& u, double t) {
  return section_geodesic_flow(p, s, u, t).point;
}

double section_distance(const SpaceFormParams& p, const SectionPoint& a,
                        const SectionPoint& b) {
  const double R = p.radius();
  const double q = section_metric(p, a.x, b.x) / p.lift_norm2();
  if (p.kind == Kind::Projective) return R * std::acos(std::clamp(q, -1.0, 1.0));
  return R * std::acosh(std::max(1.0, q));
}

// ---- path calculus ---------------------------------------------------------

double phase_rate(const SpaceFormParams& p, const C3& z, const C3& dz) {
  return (complexd(0, 1) * p.hermitian(z, dz) / p.hermitian(z, z)).real();
}

C3 covariant_derivative(const SpaceFormParams& p, const C3& z, const C3& dF,
                        const C3& W0, const C3& dW) {
  const double psi = phase_rate(p, z, dF);
  return horizontal_project(p, z, dW + complexd(0, psi) * W0);
}

C3 covariant_acceleration(const SpaceFormParams& p, const C3& z, const C3& dF,
                          const C3& d2F) {
  const double psi = phase_rate(p, z, dF);
  return horizontal_project(p, z, d2F) +
         complexd(0, 2.0 * psi) * horizontal_project(p, z, dF);
}

C3 path_velocity(const SpaceFormParams& p, const AmbientPath& F, double h) {
  const C3 z = F(0.0);
  const C3 dF = (F(h) - F(-h)) / (2.0 * h);
  return horizontal_project(p, z, dF);
}

C3 path_acceleration(const SpaceFormParams& p, const AmbientPath& F, double h) {
  const C3 z = F(0.0);
  const C3 zp = F(h), zm = F(-h);
  const C3 dF = (zp - zm) / (2.0 * h);
  const C3 d2F = (zp - 2.0 * z + zm) / (h * h);
  return covariant_acceleration(p, z, dF, d2F);
}

C3 field_derivative(const SpaceFormParams& p, const AmbientPath& F,
                    const AmbientPath& W, double h) {
  const C3 z = F(0.0);
  const C3 dF = (F(h) - F(-h)) / (2.0 * h);
  const C3 dW = (W(h) - W(-h)) / (2.0 * h);
  return covariant_derivative(p, z, dF, W(0.0), dW);
}

}  // namespace hyperforge::spaceform
