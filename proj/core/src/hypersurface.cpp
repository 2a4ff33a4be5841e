#include "hyperforge/hypersurface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperforge::hypersurface {

using curvebuilder::FramedCurveSample;
using spaceform::complexd;
using spaceform::covariant_derivative;
using spaceform::horizontal_project;
using spaceform::TangentVec;
using spaceform::V3;

namespace {

constexpr complexd kI{0.0, 1.0};
constexpr double kTwoPi = 2.0 * std::numbers::pi;

C3 apply_phases(const C3& z, double th1, double th2) {
  return C3(z[0], std::exp(kI * th1) * z[1], std::exp(kI * th2) * z[2]);
}

C3 embed(const V3& x) { return x.cast<complexd>(); }

void orthonormalize_against(const SpaceFormParams& p, C3& v,
                            std::initializer_list<const C3*> prev) {
  for (const C3* q : prev) v -= p.inner(*q, v) * (*q);
  const double n = std::sqrt(p.inner(v, v));
  if (n < 1e-12) throw std::runtime_error("hypersurface frame degenerated");
  v /= n;
}

}  // namespace

C3 sweep_point(const SpaceFormParams& p, const CurveEvaluator& curve, double t,
               double th1, double th2) {
  (void)p;
  return apply_phases(embed(curve.at(t).pos.x), th1, th2);
}

HypersurfaceSample sample_at(const SpaceFormParams& p, const CurveEvaluator& curve,
                             double t, double th1, double th2) {
  const FramedCurveSample cs = curve.at(t);
  HypersurfaceSample s;
  s.t = t;
  s.theta1 = th1;
  s.theta2 = th2;
  s.ode_state = cs.state;

  const C3 z = apply_phases(embed(cs.pos.x), th1, th2);
  s.point = AmbientPoint{z};

  C3 et = apply_phases(embed(cs.tangent), th1, th2);
  C3 e1 = horizontal_project(p, z, kI * C3(0.0, z[1], 0.0));
  C3 e2 = horizontal_project(p, z, kI * C3(0.0, 0.0, z[2]));
  orthonormalize_against(p, et, {});
  orthonormalize_against(p, e1, {&et});
  orthonormalize_against(p, e2, {&et, &e1});
  s.frame = {et, e1, e2};

  C3 nu = apply_phases(embed(cs.normal), th1, th2);
  nu = horizontal_project(p, z, nu);
  orthonormalize_against(p, nu, {&s.frame[0], &s.frame[1], &s.frame[2]});
  s.normal = nu;
  return s;
}

std::vector<HypersurfaceSample> sample_hypersurface(const SpaceFormParams& p,
                                                    const CurveEvaluator& curve,
                                                    const SweepGrid& grid) {
  if (grid.n_t < 3 || grid.n_theta < 3)
    throw std::invalid_argument("sample_hypersurface: grid must be >= 3 per direction");
  std::vector<HypersurfaceSample> out;
  out.reserve(static_cast<std::size_t>(grid.n_t) * grid.n_theta * grid.n_theta);
  const double t0 = curve.t_front(), t1 = curve.t_back();
  for (int i = 0; i < grid.n_t; ++i) {
    const double t = grid.n_t == 1 ? t0 : t0 + (t1 - t0) * i / (grid.n_t - 1);
    for (int j = 0; j < grid.n_theta; ++j) {
      for (int k = 0; k < grid.n_theta; ++k) {
        out.push_back(sample_at(p, curve, t, kTwoPi * j / grid.n_theta,
                                kTwoPi * k / grid.n_theta));
      }
    }
  }
  return out;
}

Eigen::Matrix3d numeric_shape_operator(const SpaceFormParams& p,
                                       const CurveEvaluator& curve,
                                       HypersurfaceSample& s, double h,
                                       double asymmetry_tol) {
  if (!(h >= 1e-6 && h <= 1e-3))
    throw std::invalid_argument("numeric_shape_operator: h must lie in [1e-6, 1e-3]");
  const C3& z = s.point.z;

  // parameter velocities realizing the two orbit frame directions
  const C3 d1 = kI * C3(0.0, z[1], 0.0);
  const C3 d2 = kI * C3(0.0, 0.0, z[2]);
  Eigen::Matrix2d G;
  G << p.inner(d1, s.frame[1]), p.inner(d2, s.frame[1]),
       p.inner(d1, s.frame[2]), p.inner(d2, s.frame[2]);
  if (std::abs(G.determinant()) < 1e-12)
    throw std::runtime_error("numeric_shape_operator: degenerate orbit directions");
  const Eigen::Matrix2d U = G.inverse();

  Eigen::Matrix3d M, Gx;
  for (int dir = 0; dir < 3; ++dir) {
    spaceform::AmbientPath F, W;
    if (dir == 0) {
      F = [&](double u) {
        return apply_phases(embed(curve.at(s.t + u).pos.x), s.theta1, s.theta2);
      };
      W = [&](double u) {
        return apply_phases(embed(curve.at(s.t + u).normal), s.theta1, s.theta2);
      };
    } else {
      const Eigen::Vector2d uv = U.col(dir - 1);
      const FramedCurveSample cs = curve.at(s.t);
      const C3 pos = embed(cs.pos.x), nor = embed(cs.normal);
      F = [&, uv, pos](double u) {
        return apply_phases(pos, s.theta1 + u * uv[0], s.theta2 + u * uv[1]);
      };
      W = [&, uv, nor](double u) {
        return apply_phases(nor, s.theta1 + u * uv[0], s.theta2 + u * uv[1]);
      };
    }
    const C3 dF = (F(h) - F(-h)) / (2.0 * h);
    const C3 dW = (W(h) - W(-h)) / (2.0 * h);
    const C3 X = horizontal_project(p, z, dF);
    C3 Dnu = covariant_derivative(p, z, dF, W(0.0), dW);
    Dnu -= p.inner(Dnu, s.normal) * s.normal;  // tangential part
    for (int i = 0; i < 3; ++i) {
      M(i, dir) = -p.inner(Dnu, s.frame[i]);
      Gx(i, dir) = p.inner(X, s.frame[i]);
    }
  }

  const Eigen::Matrix3d S = M * Gx.inverse();
  s.shape_asymmetry = (S - S.transpose()).cwiseAbs().maxCoeff();
  if (s.shape_asymmetry > asymmetry_tol)
    throw std::runtime_error(
        "numeric_shape_operator: asymmetry above tolerance (step too large "
        "or frame drift)");
  s.shape = 0.5 * (S + S.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s.shape);
  // descending order
  for (int i = 0; i < 3; ++i) {
    s.eigs[i] = es.eigenvalues()[2 - i];
    s.eigvecs.col(i) = es.eigenvectors().col(2 - i);
  }
  return s.shape;
}

HopfFrame hopf_frame(const SpaceFormParams& p, const HypersurfaceSample& s,
                     double b_degenerate) {
  HopfFrame hf;
  const double g01 = s.eigs[0] - s.eigs[1];
  const double g12 = s.eigs[1] - s.eigs[2];
  const int simple = g01 <= g12 ? 2 : 0;  // the closest pair is the double one
  const int dbl1 = simple == 2 ? 0 : 1;
  const int dbl2 = simple == 2 ? 1 : 2;

  const auto frame_vec = [&](int col) {
    return C3(s.eigvecs(0, col) * s.frame[0] + s.eigvecs(1, col) * s.frame[1] +
              s.eigvecs(2, col) * s.frame[2]);
  };

  const C3 Jxi = kI * s.normal;
  C3 Udir = frame_vec(simple);
  double pa = p.inner(Jxi, Udir);
  if (pa < 0.0) {
    Udir = -Udir;
    pa = -pa;
  }
  hf.a = std::clamp(pa, 0.0, 1.0);
  const C3 rest = Jxi - pa * Udir;
  hf.b = std::sqrt(std::max(0.0, p.inner(rest, rest)));
  hf.phi = std::atan2(hf.b, hf.a);
  if (hf.b < b_degenerate) {
    hf.degenerate = true;
    return hf;
  }
  hf.U = Udir;
  hf.V = rest / hf.b;

  // A completes the double eigenspace; sign per <JU, A> = -b
  const C3 q1 = frame_vec(dbl1), q2 = frame_vec(dbl2);
  C3 A = q1 - p.inner(q1, hf.V) * hf.V;
  if (p.inner(A, A) < 0.25) A = q2 - p.inner(q2, hf.V) * hf.V;
  A /= std::sqrt(p.inner(A, A));
  if (p.inner(kI * hf.U, A) > 0.0) A = -A;
  hf.A = A;
  return hf;
}

void analyze_samples(const SpaceFormParams& p, const CurveEvaluator& curve,
                     std::vector<HypersurfaceSample>& samples, double h) {
  for (auto& s : samples) {
    numeric_shape_operator(p, curve, s, h);
    s.hopf = hopf_frame(p, s);
  }
}

CurvatureReport verify_two_curvatures(const SpaceFormParams& p,
                                      const std::vector<HypersurfaceSample>& samples,
                                      const VerifyTolerances& tols) {
  (void)p;
  CurvatureReport rep;
  rep.tols = tols;
  if (samples.empty()) {
    rep.pass = false;
    return rep;
  }
  rep.min_b = std::numeric_limits<double>::infinity();
  rep.pass = true;
  double sum_d = 0.0, sum_s = 0.0;

  for (const auto& s : samples) {
    const double g01 = s.eigs[0] - s.eigs[1];
    const double g12 = s.eigs[1] - s.eigs[2];
    SampleResidual row{};
    row.t = s.t;
    row.theta1 = s.theta1;
    row.theta2 = s.theta2;
    row.degenerate = s.hopf.degenerate;
    if (g01 <= g12) {
      row.intra_pair_spread = g01;
      row.double_residual = std::abs(0.5 * (s.eigs[0] + s.eigs[1]) - s.ode_state.beta);
      row.simple_residual = std::abs(s.eigs[2] - s.ode_state.alpha);
    } else {
      row.intra_pair_spread = g12;
      row.double_residual = std::abs(0.5 * (s.eigs[1] + s.eigs[2]) - s.ode_state.beta);
      row.simple_residual = std::abs(s.eigs[0] - s.ode_state.alpha);
    }
    row.hopf_residual = std::abs(s.hopf.phi - s.ode_state.phi);
    row.b = s.hopf.b;
    row.ok = !row.degenerate && row.intra_pair_spread < tols.tol_mult &&
             row.double_residual < tols.tol_match &&
             row.simple_residual < tols.tol_match &&
             row.hopf_residual < tols.tol_hopf;

    rep.max_spread = std::max(rep.max_spread, row.intra_pair_spread);
    rep.max_double_residual = std::max(rep.max_double_residual, row.double_residual);
    rep.max_simple_residual = std::max(rep.max_simple_residual, row.simple_residual);
    rep.max_hopf_residual = std::max(rep.max_hopf_residual, row.hopf_residual);
    rep.min_b = std::min(rep.min_b, row.b);
    sum_d += row.double_residual;
    sum_s += row.simple_residual;
    rep.pass = rep.pass && row.ok;
    rep.rows.push_back(row);
  }
  rep.mean_double_residual = sum_d / static_cast<double>(samples.size());
  rep.mean_simple_residual = sum_s / static_cast<double>(samples.size());
  return rep;
}

EquidistanceReport check_equidistance(const SpaceFormParams& p,
                                      const CurveEvaluator& curve, double t1,
                                      double t2, int n_probe) {
  EquidistanceReport rep;
  const FramedCurveSample target = curve.at(t2);
  const C3 target_pos = embed(target.pos.x);

  const auto dist = [&](const C3& z, double a1, double a2) {
    return spaceform::base_distance(p, AmbientPoint{z},
                                    AmbientPoint{apply_phases(target_pos, a1, a2)});
  };

  for (int j = 0; j < n_probe; ++j) {
    for (int k = 0; k < n_probe; ++k) {
      const double th1 = kTwoPi * j / n_probe;
      const double th2 = kTwoPi * k / n_probe;
      const C3 z = sweep_point(p, curve, t1, th1, th2);
      // compass search over the target leaf's angles
      double a1 = th1, a2 = th2;
      double best = dist(z, a1, a2);
      double step = 0.3;
      int iter = 0;
      while (step > 1e-8) {
        if (++iter > 500)
          throw std::runtime_error("check_equidistance: minimization did not converge");
        bool improved = false;
        for (const auto& [d1, d2] : std::initializer_list<std::pair<double, double>>{
                 {step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
          const double v = dist(z, a1 + d1, a2 + d2);
          if (v < best - 1e-15) {
            best = v;
            a1 += d1;
            a2 += d2;
            improved = true;
          }
        }
        if (!improved) step *= 0.5;
      }
      rep.distances.push_back(best);
    }
  }
  const auto [mn, mx] = std::minmax_element(rep.distances.begin(), rep.distances.end());
  rep.spread = *mx - *mn;
  rep.mean = 0.0;
  for (double d : rep.distances) rep.mean += d;
  rep.mean /= static_cast<double>(rep.distances.size());
  return rep;
}

// ---- Gauss / Codazzi --------------------------------------------------------

namespace {

using Param = Eigen::Vector3d;  // (t, th1, th2)

struct ChartOps {
  const SpaceFormParams& p;
  const CurveEvaluator& curve;

  C3 point(const Param& q) const {
    return apply_phases(embed(curve.at(q[0]).pos.x), q[1], q[2]);
  }
  // exact horizontal lifts of the coordinate vector fields
  C3 coord_field(int b, const Param& q) const {
    if (b == 0) return apply_phases(embed(curve.at(q[0]).tangent), q[1], q[2]);
    const C3 z = point(q);
    C3 d = C3::Zero();
    d[b] = kI * z[b];
    return horizontal_project(p, z, d);
  }
  C3 normal(const Param& q) const {
    const C3 z = point(q);
    C3 nu = apply_phases(embed(curve.at(q[0]).normal), q[1], q[2]);
    nu = horizontal_project(p, z, nu);
    for (int b = 0; b < 3; ++b) {
      // keep nu orthogonal to the coordinate frame at q
      C3 X = coord_field(b, q);
      X /= std::sqrt(p.inner(X, X));
      nu -= p.inner(X, nu) * X;
    }
    return nu / std::sqrt(p.inner(nu, nu));
  }
};

}  // namespace

GaussCodazziResidual gauss_codazzi_residual(
    const SpaceFormParams& p, const CurveEvaluator& curve, double t, double th1,
    double th2, double h, const Eigen::Matrix3d* shape_override) {
  const ChartOps chart{p, curve};
  const Param q0(t, th1, th2);
  const double inner_h = std::min(1e-4, h);

  HypersurfaceSample s0 = sample_at(p, curve, t, th1, th2);
  numeric_shape_operator(p, curve, s0, inner_h);
  const Eigen::Matrix3d S_use = shape_override ? *shape_override : s0.shape;
  const C3 z0 = s0.point.z;
  const C3 nu0 = s0.normal;

  const auto frame_coords = [&](const C3& v) {
    return Eigen::Vector3d(p.inner(v, s0.frame[0]), p.inner(v, s0.frame[1]),
                           p.inner(v, s0.frame[2]));
  };
  const auto S_apply = [&](const C3& v) {
    const Eigen::Vector3d cv = S_use * frame_coords(v);
    return C3(cv[0] * s0.frame[0] + cv[1] * s0.frame[1] + cv[2] * s0.frame[2]);
  };
  const auto tan0 = [&](const C3& v) { return C3(v - p.inner(v, nu0) * nu0); };

  const std::array<C3, 3> X0 = {chart.coord_field(0, q0), chart.coord_field(1, q0),
                                chart.coord_field(2, q0)};

  // ambient covariant derivative of coordinate field b along direction a
  const auto Dab = [&](int a, int b, const Param& at) {
    const auto F = [&](double u) { return chart.point(at + u * Param::Unit(a)); };
    const auto W = [&](double u) {
      return chart.coord_field(b, at + u * Param::Unit(a));
    };
    return spaceform::field_derivative(p, F, W, h);
  };

  // M-tangential part of Dab evaluated at an arbitrary parameter point
  const auto P_field = [&](int a, int b, const Param& at) {
    const C3 nu = chart.normal(at);
    const C3 D = Dab(a, b, at);
    return C3(D - p.inner(D, nu) * nu);
  };

  GaussCodazziResidual out;

  // shape operators at displaced points along each direction, for (nabla S)
  std::array<std::array<HypersurfaceSample, 2>, 3> disp;
  for (int a = 0; a < 3; ++a) {
    for (int side = 0; side < 2; ++side) {
      const Param q = q0 + (side == 0 ? -h : h) * Param::Unit(a);
      disp[a][side] = sample_at(p, curve, q[0], q[1], q[2]);
      numeric_shape_operator(p, curve, disp[a][side], inner_h);
    }
  }
  const auto S_at_disp = [&](int a, int side, const C3& v) {
    const HypersurfaceSample& sd = disp[a][side];
    Eigen::Vector3d cv(p.inner(v, sd.frame[0]), p.inner(v, sd.frame[1]),
                       p.inner(v, sd.frame[2]));
    cv = sd.shape * cv;
    return C3(cv[0] * sd.frame[0] + cv[1] * sd.frame[1] + cv[2] * sd.frame[2]);
  };

  // (nabla_{X_a} S) X_b as an ambient vector at the center
  const auto nablaS = [&](int a, int b) {
    const auto F = [&](double u) { return chart.point(q0 + u * Param::Unit(a)); };
    const auto SY = [&](double u) -> C3 {
      if (u == 0.0) return S_apply(X0[b]);
      const int side = u < 0.0 ? 0 : 1;
      const Param q = q0 + u * Param::Unit(a);
      return S_at_disp(a, side, chart.coord_field(b, q));
    };
    const C3 dSY = tan0(spaceform::field_derivative(p, F, SY, h));
    const C3 SdY = S_apply(tan0(Dab(a, b, q0)));
    return C3(dSY - SdY);
  };

  const AmbientPoint pt{z0};
  const auto tv = [&](const C3& v) { return TangentVec{pt, v}; };

  const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};

  for (const auto& [a, b] : pairs) {
    const C3 cod = nablaS(a, b) - nablaS(b, a);
    for (int zdx = 0; zdx < 3; ++zdx) {
      const double amb =
          spaceform::curvature_tensor(p, tv(X0[a]), tv(X0[b]), tv(X0[zdx]), tv(nu0));
      out.codazzi_max =
          std::max(out.codazzi_max, std::abs(amb - p.inner(cod, X0[zdx])));
    }
  }

  // intrinsic curvature of M on coordinate fields ([X_a, X_b] = 0)
  for (const auto& [a, b] : pairs) {
    for (int zdx = 0; zdx < 3; ++zdx) {
      const auto Fa = [&](double u) { return chart.point(q0 + u * Param::Unit(a)); };
      const auto Fb = [&](double u) { return chart.point(q0 + u * Param::Unit(b)); };
      const auto Pbz = [&](double u) { return P_field(b, zdx, q0 + u * Param::Unit(a)); };
      const auto Paz = [&](double u) { return P_field(a, zdx, q0 + u * Param::Unit(b)); };
      const C3 Rabz = tan0(spaceform::field_derivative(p, Fa, Pbz, h)) -
                      tan0(spaceform::field_derivative(p, Fb, Paz, h));
      for (const auto& [zi, wi] : pairs) {
        if (zi != zdx) continue;
        const int w = wi;
        const double amb = spaceform::curvature_tensor(p, tv(X0[a]), tv(X0[b]),
                                                       tv(X0[zdx]), tv(X0[w]));
        const double sprod = p.inner(S_apply(X0[a]), X0[zdx]) *
                                 p.inner(S_apply(X0[b]), X0[w]) -
                             p.inner(S_apply(X0[a]), X0[w]) *
                                 p.inner(S_apply(X0[b]), X0[zdx]);
        const double rhs = p.inner(Rabz, X0[w]) + sprod;
        out.gauss_max = std::max(out.gauss_max, std::abs(amb - rhs));
      }
    }
  }
  return out;
}

}  // namespace hyperforge::hypersurface
