#include "hyperforge/orbits.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperforge::orbits {

using spaceform::complexd;
using spaceform::horizontal_project;

namespace {
constexpr complexd kI{0.0, 1.0};
}

double OrbitParams::rprime() const {
  const double rad = c + 8.0 * r * r;
  if (rad < 0.0)
    throw std::domain_error("OrbitParams: c + 8 r^2 < 0, r' undefined");
  return std::sqrt(rad);
}

ShapeOperatorPair shape_operator_matrices(const OrbitParams& op) {
  const double k = op.rprime() / (2.0 * std::numbers::sqrt2);
  const double kc = std::cos(op.s) * k;
  const double ks = std::sin(op.s) * k;
  ShapeOperatorPair out;
  out.S3 << op.r + kc, ks, ks, 3.0 * op.r - kc;
  out.S4 << -ks, op.r + kc, op.r + kc, ks;
  return out;
}

std::pair<double, double> orbit_principal_curvatures(const OrbitParams& op,
                                                     double theta) {
  const double rp = op.rprime();
  const double rad = rp * rp / 8.0 + op.r * op.r -
                     (op.r * rp / std::numbers::sqrt2) * std::cos(op.s + 2.0 * theta);
  if (rad < -1e-12)
    throw std::domain_error("orbit_principal_curvatures: negative radicand");
  const double q = std::sqrt(std::max(rad, 0.0));
  const double m = 2.0 * op.r * std::cos(theta);
  return {m + q, m - q};
}

bool is_regular(const SpaceFormParams& p, const SectionPoint& s, double eps) {
  (void)p;
  return std::abs(s.x[0]) > eps && std::abs(s.x[1]) > eps && std::abs(s.x[2]) > eps;
}

namespace {

C3 apply_phases(const C3& z, double th1, double th2) {
  return C3(z[0], std::exp(kI * th1) * z[1], std::exp(kI * th2) * z[2]);
}

void require_regular(const SpaceFormParams& p, const SectionPoint& s) {
  if (!is_regular(p, s))
    throw std::invalid_argument("torus orbit: section point is not regular");
}

}  // namespace

AmbientPoint torus_orbit_point(const SpaceFormParams& p, const OrbitPoint& q) {
  require_regular(p, q.section_base);
  return AmbientPoint{apply_phases(section_embed(p, q.section_base).z,
                                   q.theta1, q.theta2)};
}

namespace {

// Gram-Schmidt in the ambient metric; vectors assumed horizontal at z.
void orthonormalize2(const SpaceFormParams& p, C3& a, C3& b, double* drift = nullptr) {
  double d = 0.0;
  const double na = std::sqrt(p.inner(a, a));
  d = std::max(d, std::abs(na - 1.0));
  a /= na;
  const double ab = p.inner(a, b);
  d = std::max(d, std::abs(ab));
  b -= ab * a;
  const double nb = std::sqrt(p.inner(b, b));
  d = std::max(d, std::abs(nb - 1.0));
  b /= nb;
  if (drift) *drift = d;
}

}  // namespace

OrbitGeometry surface_geometry(const SpaceFormParams& p, const SurfacePatch& F,
                               double h, const C3* seedN1, const C3* seedN2) {
  OrbitGeometry g;
  const C3 z = F(0.0, 0.0);
  g.point = AmbientPoint{z};

  const C3 d1 = (F(h, 0.0) - F(-h, 0.0)) / (2.0 * h);
  const C3 d2 = (F(0.0, h) - F(0.0, -h)) / (2.0 * h);
  C3 t1 = horizontal_project(p, z, d1);
  C3 t2 = horizontal_project(p, z, d2);
  if (p.inner(t1, t1) < 1e-18 || p.inner(t2, t2) < 1e-18)
    throw std::runtime_error("surface_geometry: degenerate tangent frame");
  orthonormalize2(p, t1, t2);
  g.T1 = t1;
  g.T2 = t2;

  // parameter velocities realizing unit frame directions
  Eigen::Matrix2d G;
  G << p.inner(d1, t1), p.inner(d2, t1), p.inner(d1, t2), p.inner(d2, t2);
  const double scale = d1.norm() * d2.norm() + 1e-300;
  if (std::abs(G.determinant()) < 1e-10 * scale)
    throw std::runtime_error("surface_geometry: near-singular Gram matrix");
  g.param_dirs = G.inverse();

  // normal frame
  C3 n1 = seedN1 ? *seedN1 : (kI * t1);
  C3 n2 = seedN2 ? *seedN2 : (kI * t2);
  for (const C3* T : {&g.T1, &g.T2}) {
    n1 -= p.inner(*T, n1) * (*T);
    n2 -= p.inner(*T, n2) * (*T);
  }
  n1 = horizontal_project(p, z, n1);
  n2 = horizontal_project(p, z, n2);
  orthonormalize2(p, n1, n2);
  g.N1 = n1;
  g.N2 = n2;

  g.lagrangian_residual =
      std::max({std::abs(p.inner(kI * t1, t1)), std::abs(p.inner(kI * t1, t2)),
                std::abs(p.inner(kI * t2, t2))});

  // second fundamental form via covariant acceleration of parameter rays,
  // mixed term by polarization
  const auto accel = [&](const Eigen::Vector2d& u) {
    const auto ray = [&](double t) { return F(t * u[0], t * u[1]); };
    return spaceform::path_acceleration(p, ray, h);
  };
  const auto ncoeff = [&](const C3& a) {
    return Eigen::Vector2d(p.inner(a, n1), p.inner(a, n2));
  };
  const Eigen::Vector2d u1 = g.param_dirs.col(0), u2 = g.param_dirs.col(1);
  const Eigen::Vector2d ii11 = ncoeff(accel(u1));
  const Eigen::Vector2d ii22 = ncoeff(accel(u2));
  const Eigen::Vector2d ii12 =
      (ncoeff(accel(u1 + u2)) - ncoeff(accel(u1 - u2))) / 4.0;

  g.S3 << ii11[0], ii12[0], ii12[0], ii22[0];
  g.S4 << ii11[1], ii12[1], ii12[1], ii22[1];
  g.mean_curvature = ii11 + ii22;

  const AmbientPoint pt{z};
  const spaceform::TangentVec X{pt, t1}, Y{pt, t2};
  g.gauss_curvature = spaceform::curvature_tensor(p, X, Y, Y, X) +
                      ii11.dot(ii22) - ii12.dot(ii12);
  return g;
}

OrbitGeometry numeric_orbit_geometry(const SpaceFormParams& p,
                                     const OrbitPoint& q, double h) {
  require_regular(p, q.section_base);
  if (!(h >= 1e-6 && h <= 1e-3))
    throw std::invalid_argument("numeric_orbit_geometry: h must lie in [1e-6, 1e-3]");
  const C3 x = section_embed(p, q.section_base).z;
  const auto F = [&, x](double a, double b) {
    return apply_phases(x, q.theta1 + a, q.theta2 + b);
  };
  // the equivariant transport of the section tangent basis seeds the
  // parallel normal frame
  const auto basis = section_tangent_basis(p, q.section_base);
  const C3 s1 = apply_phases(basis[0].cast<complexd>(), q.theta1, q.theta2);
  const C3 s2 = apply_phases(basis[1].cast<complexd>(), q.theta1, q.theta2);
  return surface_geometry(p, F, h, &s1, &s2);
}

NormalFrame parallel_transport_normal_frame(const SpaceFormParams& p,
                                            const SurfacePatch& F,
                                            const Eigen::Vector2d& u0,
                                            const Eigen::Vector2d& du,
                                            const C3& N1, const C3& N2,
                                            int substeps, double fd_step) {
  NormalFrame fr{N1, N2, 0.0};
  const double h = fd_step;
  Eigen::Vector2d u = u0;
  const Eigen::Vector2d step = du / substeps;

  const auto point = [&](const Eigen::Vector2d& w) { return F(w[0], w[1]); };
  const auto tangents = [&](const Eigen::Vector2d& w) {
    const C3 z = point(w);
    C3 a = horizontal_project(
        p, z, (F(w[0] + h, w[1]) - F(w[0] - h, w[1])) / (2.0 * h));
    C3 b = horizontal_project(
        p, z, (F(w[0], w[1] + h) - F(w[0], w[1] - h)) / (2.0 * h));
    orthonormalize2(p, a, b);
    return std::pair{a, b};
  };
  const auto project_normal = [&](const Eigen::Vector2d& w, C3 v) {
    const C3 z = point(w);
    const auto [a, b] = tangents(w);
    v = horizontal_project(p, z, v);
    v -= p.inner(a, v) * a;
    v -= p.inner(b, v) * b;
    return v;
  };

  for (int k = 0; k < substeps; ++k) {
    const Eigen::Vector2d mid = u + 0.5 * step;
    const Eigen::Vector2d next = u + step;
    // integrated phase over the segment, midpoint rule
    const C3 zm = point(mid);
    const C3 dseg = point(next) - point(u);
    const double psi = spaceform::phase_rate(p, zm, dseg);
    const complexd rot = std::exp(-kI * psi);
    C3 a = project_normal(next, rot * fr.N1);
    C3 b = project_normal(next, rot * fr.N2);
    double d = 0.0;
    orthonormalize2(p, a, b, &d);
    fr.drift = std::max(fr.drift, d);
    fr.N1 = a;
    fr.N2 = b;
    u = next;
  }
  return fr;
}

double parallel_mean_curvature_residual(const SpaceFormParams& p,
                                        const OrbitPoint& q, double fd_step,
                                        double outer_step) {
  const OrbitGeometry geo = numeric_orbit_geometry(p, q, fd_step);
  const C3 x = section_embed(p, q.section_base).z;
  const auto F = [&, x](double a, double b) {
    return apply_phases(x, q.theta1 + a, q.theta2 + b);
  };
  const Eigen::Vector2d at(0.0, 0.0);
  double worst = 0.0;
  for (int dir = 0; dir < 2; ++dir) {
    const Eigen::Vector2d u = geo.param_dirs.col(dir);
    Eigen::Vector2d coeff[2];
    for (int side = 0; side < 2; ++side) {
      const double s = side == 0 ? -outer_step : outer_step;
      const OrbitPoint qd{q.section_base, q.theta1 + s * u[0], q.theta2 + s * u[1]};
      const OrbitGeometry gd = numeric_orbit_geometry(p, qd, fd_step);
      const NormalFrame tf = parallel_transport_normal_frame(
          p, F, at, s * u, geo.N1, geo.N2, 8, fd_step);
      const C3 H = gd.mean_curvature[0] * gd.N1 + gd.mean_curvature[1] * gd.N2;
      coeff[side] = Eigen::Vector2d(p.inner(H, tf.N1), p.inner(H, tf.N2));
    }
    const Eigen::Vector2d dH = (coeff[1] - coeff[0]) / (2.0 * outer_step);
    worst = std::max({worst, std::abs(dH[0]), std::abs(dH[1])});
  }
  return worst;
}

// ---- family inversion -------------------------------------------------------

namespace {

Eigen::Vector2d traceless_vec(const Eigen::Matrix2d& S) {
  return {0.5 * (S(0, 0) - S(1, 1)), S(0, 1)};
}

Eigen::Matrix2d rot2(double a) {
  Eigen::Matrix2d R;
  R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return R;
}

const Eigen::Matrix2d kReflect = (Eigen::Matrix2d() << 1.0, 0.0, 0.0, -1.0).finished();

}  // namespace

ShapeOperatorPair OrbitFit::rebuild() const {
  const ShapeOperatorPair fam = shape_operator_matrices(params);
  const Eigen::Matrix2d Rt = rot2(tangent_angle);
  const Eigen::Matrix2d B3 = Rt.transpose() * fam.S3 * Rt;
  const Eigen::Matrix2d B4 = Rt.transpose() * fam.S4 * Rt;
  const double cw = std::cos(normal_angle), sw = std::sin(normal_angle);
  Eigen::Matrix2d M3 = cw * B3 + sw * B4;
  Eigen::Matrix2d M4 = -sw * B3 + cw * B4;
  if (tangent_flip) {
    M3 = kReflect * M3 * kReflect;
    M4 = kReflect * M4 * kReflect;
  }
  if (normal_flip) M4 = -M4;
  return {M3, M4};
}

OrbitFit fit_orbit_params(double c, const Eigen::Matrix2d& S3,
                          const Eigen::Matrix2d& S4, double max_residual) {
  const double scale = std::max({1.0, S3.cwiseAbs().maxCoeff(), S4.cwiseAbs().maxCoeff()});
  OrbitFit best;
  best.residual = std::numeric_limits<double>::infinity();

  for (const bool flipN : {false, true}) {
    for (const bool flipT : {false, true}) {
      Eigen::Matrix2d A3 = S3;
      Eigen::Matrix2d A4 = flipN ? Eigen::Matrix2d(-S4) : S4;
      if (flipT) {
        A3 = kReflect * A3 * kReflect;
        A4 = kReflect * A4 * kReflect;
      }
      const double t3 = A3.trace(), t4 = A4.trace();
      const double r = std::hypot(t3, t4) / 4.0;
      const bool minimal = r < 1e-6 * scale;
      const double omega = minimal ? 0.0 : std::atan2(-t4, t3);
      // undo the normal rotation
      const Eigen::Matrix2d Ca = std::cos(omega) * A3 - std::sin(omega) * A4;
      const Eigen::Matrix2d Cb = std::sin(omega) * A3 + std::cos(omega) * A4;
      const Eigen::Vector2d m3 = traceless_vec(Ca);
      const Eigen::Vector2d m4 = traceless_vec(Cb);
      const double cross = m3[0] * m4[1] - m3[1] * m4[0];  // = c/8 in the family gauge
      if (cross * c < 0.0) continue;

      double s, xc, xs;
      if (minimal) {
        s = 0.0;
        xc = std::sqrt(std::max(c, 0.0) / 8.0);
        xs = 0.0;
      } else {
        xs = m3.dot(m4) / (2.0 * r);
        xc = (m4.squaredNorm() - m3.squaredNorm()) / (4.0 * r);
        s = std::atan2(xs, xc);
      }
      const Eigen::Vector2d model3(xc - r, xs);
      const double tau =
          0.5 * (std::atan2(model3[1], model3[0]) - std::atan2(m3[1], m3[0]));

      OrbitFit cand;
      cand.params = OrbitParams{c, r, s};
      if (cand.params.c + 8.0 * r * r < 0.0) continue;
      cand.normal_angle = omega;
      cand.tangent_angle = tau;
      cand.normal_flip = flipN;
      cand.tangent_flip = flipT;
      const ShapeOperatorPair R = cand.rebuild();
      cand.residual = std::max((R.S3 - S3).cwiseAbs().maxCoeff(),
                               (R.S4 - S4).cwiseAbs().maxCoeff());
      if (cand.residual < best.residual) best = cand;
    }
  }

  if (!(best.residual <= max_residual * scale))
    throw std::runtime_error("fit_orbit_params: residual above threshold, "
                             "surface is not in the orbit family");
  return best;
}

AmbientPoint ch2_hirakawa_orbit(double c, double r, double s, double t,
                                double u) {
  if (!(c < 0.0)) throw std::invalid_argument("ch2_hirakawa_orbit: needs c < 0");
  if (c + 8.0 * r * r < 0.0)
    throw std::domain_error("ch2_hirakawa_orbit: c + 8 r^2 < 0");
  if (std::abs(t) > 50.0 || std::abs(u) > 50.0)
    throw std::invalid_argument("ch2_hirakawa_orbit: |t|, |u| must be <= 50");
  const SpaceFormParams p = spaceform::hyperbolic(c);
  const double sc = std::sqrt(-c);
  const double rp = std::sqrt(c + 8.0 * r * r);
  const double sq2 = std::numbers::sqrt2;
  const complexd eis = std::exp(kI * s);
  const complexd emis = std::exp(-kI * s);

  Eigen::Matrix3cd X, Y;
  X << 0.0, sc, sc,
       sc, 0.0, 2.0 * sq2 * r + emis * rp,
       sc, -2.0 * sq2 * r - eis * rp, 0.0;
  Y << 0.0, sc, -sc,
       -sc, 4.0 * sq2 * r, emis * rp - 2.0 * sq2 * r,
       sc, eis * rp - 2.0 * sq2 * r, 4.0 * sq2 * r;
  Y *= kI;

  const Eigen::Matrix3cd A = t * X + u * Y;
  const Eigen::Matrix3cd E = A.exp();
  const C3 o(p.radius(), 0.0, 0.0);
  return ambient_point(p, E * o, 1e-9);
}

}  // namespace hyperforge::orbits
