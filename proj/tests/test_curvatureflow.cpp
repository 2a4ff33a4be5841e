#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperforge/curvatureflow.hpp"
#include "hyperforge/orbits.hpp"
#include "testutil.hpp"

#include <cmath>
#include <numbers>

using namespace hyperforge::curvatureflow;
using namespace hyperforge::spaceform;
using testutil::Rng;

namespace {
const SpaceFormParams kCP2 = projective(4.0);
const SpaceFormParams kCH2 = hyperbolic(-4.0);
constexpr double kPi = std::numbers::pi;

CurvatureState random_state(Rng& rng) {
  // comfortably inside the guards
  const double alpha = testutil::uniform(rng, 1.0, 2.5);
  const double beta = testutil::uniform(rng, -1.0, 0.2);
  const double phi = testutil::uniform(rng, 0.5, 1.0);
  return {alpha, beta, phi};
}
}  // namespace

TEST_CASE("ode_rhs: hand-evaluated triple and special angles") {
  const auto d = ode_rhs({2.0, 0.0, kPi / 4}, 4.0);
  CHECK(std::abs(d[0] - 4.5) < 1e-12);
  CHECK(std::abs(d[1] + 1.5) < 1e-12);
  CHECK(std::abs(d[2] + 0.25) < 1e-12);

  // sin^2 phi = 1/3 kills the c-term of phi'
  const double phi3 = std::asin(std::sqrt(1.0 / 3.0));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    CurvatureState st = random_state(rng);
    st.phi = phi3;
    CHECK(ode_rhs(st, 4.0)[2] == doctest::Approx(st.beta).epsilon(1e-13));
    st.phi = kPi / 4;
    CHECK(ode_rhs(st, 4.0)[1] == doctest::Approx(-3.0 * 4.0 / 8.0).epsilon(1e-13));
    CHECK(ode_rhs(st, -4.0)[1] == doctest::Approx(3.0 * 4.0 / 8.0).epsilon(1e-13));
  }
}

TEST_CASE("ode_rhs: singularity guards name the failing condition") {
  CHECK_THROWS_AS(ode_rhs({1.0, 1.0, 0.7}, 4.0), SingularityError);
  CHECK_THROWS_AS(ode_rhs({2.0, 0.0, 1e-12}, 4.0), SingularityError);
  try {
    ode_rhs({1.0, 1.0 - 1e-12, 0.7}, 4.0);
    CHECK(false);
  } catch (const SingularityError& e) {
    CHECK(e.reason() == HaltReason::GapCollapse);
  }
  try {
    ode_rhs({2.0, 0.0, kPi / 2 - 1e-12}, 4.0);
    CHECK(false);
  } catch (const SingularityError& e) {
    CHECK(e.reason() == HaltReason::AngleCollapse);
  }
}

TEST_CASE("alpha-law evaluation paths agree bitwise-tightly") {
  // (b/4a)(c(3a^2-1) + 4 alpha (alpha-beta)) is the same function as the
  // rhs's (1/4)(c(2-3 sin^2 phi) + 4 alpha (alpha-beta)) tan(phi)
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const CurvatureState st = random_state(rng);
    const double c = testutil::uniform(rng, 0, 1) < 0.5 ? 4.0 : -4.0;
    const double a = st.a(), b = st.b();
    const double alt = (b / (4 * a)) * (c * (3 * a * a - 1) + 4 * st.alpha * (st.alpha - st.beta));
    const double rhs = ode_rhs(st, c)[0];
    CHECK(std::abs(alt - rhs) < 1e-13 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("integrate: empty span, reversibility, guard alarm") {
  const CurvatureState init{2.0, 0.0, kPi / 4};
  const Trajectory single = integrate(init, 4.0, {0.0, 0.0}, 1e-10);
  CHECK(single.size() == 1);
  CHECK(single.states[0].alpha == init.alpha);
  CHECK(single.halt == HaltReason::None);

  // forward then backward returns to the initial state
  const Trajectory fwd = integrate(init, 4.0, {0.0, 0.25}, 1e-12);
  REQUIRE(fwd.halt == HaltReason::None);
  const CurvatureState end = fwd.states.back();
  const Trajectory back = integrate(end, 4.0, {fwd.t.back(), 0.0}, 1e-12);
  REQUIRE(back.halt == HaltReason::None);
  CHECK(std::abs(back.states.back().alpha - init.alpha) < 1e-9);
  CHECK(std::abs(back.states.back().beta - init.beta) < 1e-9);
  CHECK(std::abs(back.states.back().phi - init.phi) < 1e-9);

  // every emitted state respects the gap and angle guards
  OdeLimits lim;
  for (const auto& s : fwd.states) {
    CHECK(std::abs(s.alpha - s.beta) > lim.gap_eps);
    CHECK(s.phi > lim.angle_margin);
    CHECK(s.phi < kPi / 2 - lim.angle_margin);
  }

  CHECK_THROWS(integrate(init, 4.0, {0.0, 1.0}, -1.0));
  CHECK_THROWS(integrate({1.0, 1.0, 0.5}, 4.0, {0.0, 1.0}, 1e-10));
}

TEST_CASE("integrate: order-4 self convergence") {
  const CurvatureState init{2.0, 0.0, kPi / 4};
  const auto endpoint = [&](double step) {
    IntegrateOptions opts;
    opts.fixed_step = step;
    const Trajectory tr = integrate(init, 4.0, {0.0, 0.3}, 1e-9, opts);
    REQUIRE(tr.halt == HaltReason::None);
    return tr.states.back();
  };
  const CurvatureState ref = endpoint(0.3 / 3840);
  const auto err = [&](const CurvatureState& s) {
    return std::max({std::abs(s.alpha - ref.alpha), std::abs(s.beta - ref.beta),
                     std::abs(s.phi - ref.phi)});
  };
  const double e1 = err(endpoint(0.3 / 60));
  const double e2 = err(endpoint(0.3 / 120));
  const double ratio = e1 / e2;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("integrate: truncates with halt reason near the Hopf locus") {
  // beta > 0 with phi driven towards pi/2: c < 0 pushes phi up
  const CurvatureState init{0.5, -0.5, 1.45};
  IntegrateOptions opts;
  const Trajectory tr = integrate(init, -4.0, {0.0, 5.0}, 1e-10, opts);
  CHECK(tr.halt != HaltReason::None);
  CHECK(tr.size() >= 1);
  CHECK(tr.t.back() < 5.0);
  // trajectory is still valid up to the truncation point
  for (const auto& s : tr.states) CHECK(std::isfinite(s.alpha));
}

TEST_CASE("trajectory nodes consistent with one RK step") {
  const CurvatureState init{1.7, -0.3, 0.9};
  const Trajectory tr = integrate(init, 4.0, {0.0, 0.2}, 1e-10);
  REQUIRE(tr.size() > 3);
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    const double h = tr.t[k + 1] - tr.t[k];
    // one fixed step over the same interval reproduces the node to local tol
    IntegrateOptions opts;
    opts.fixed_step = h / 2;
    const Trajectory one = integrate(tr.states[k], 4.0, {tr.t[k], tr.t[k + 1]}, 1e-9, opts);
    CHECK(std::abs(one.states.back().alpha - tr.states[k + 1].alpha) < 1e-8);
    CHECK(std::abs(one.states.back().beta - tr.states[k + 1].beta) < 1e-8);
    CHECK(std::abs(one.states.back().phi - tr.states[k + 1].phi) < 1e-8);
  }
}

TEST_CASE("identity suite: finite differences match the derivative laws") {
  // d(cos phi)/dt = b c (2b^2 - a^2) / (4(alpha-beta)) - b beta   (chain rule)
  // d beta / dt  = -(3c/8) sin(2 phi)
  // d alpha / dt = (b/4a)(c(3a^2-1) + 4 alpha(alpha-beta))
  Rng rng(11);
  int done = 0;
  while (done < 10) {
    const double c = done % 2 == 0 ? 4.0 : -4.0;
    const CurvatureState init = random_state(rng);
    IntegrateOptions opts;
    opts.fixed_step = 1e-4;
    const Trajectory tr = integrate(init, c, {0.0, 0.02}, 1e-9, opts);
    if (tr.halt != HaltReason::None || tr.size() < 11) continue;
    ++done;
    for (std::size_t k = 2; k + 2 < tr.size(); k += 16) {
      const double h = 1e-4;
      const auto& sm = tr.states[k - 1];
      const auto& s0 = tr.states[k];
      const auto& sp = tr.states[k + 1];
      const double a = s0.a(), b = s0.b();
      const double gap = s0.alpha - s0.beta;

      const double da_fd = (sp.a() - sm.a()) / (2 * h);
      const double da_law = b * c * (2 * b * b - a * a) / (4 * gap) - b * s0.beta;
      CHECK(std::abs(da_fd - da_law) < 1e-8);

      const double db_fd = (sp.beta - sm.beta) / (2 * h);
      const double db_law = -(3 * c / 8) * std::sin(2 * s0.phi);
      CHECK(std::abs(db_fd - db_law) < 1e-8);

      const double dal_fd = (sp.alpha - sm.alpha) / (2 * h);
      const double dal_law =
          (b / (4 * a)) * (c * (3 * a * a - 1) + 4 * s0.alpha * gap);
      CHECK(std::abs(dal_fd - dal_law) < 1e-8);
    }
  }
}

TEST_CASE("initial conditions: minimal Clifford torus") {
  const double R = kCP2.radius();
  const SectionPoint clifford{V3(R, R, R) / std::sqrt(3.0)};
  const auto basis = section_tangent_basis(kCP2, clifford);
  for (const double ang : {0.0, 0.4, 1.1, 2.0}) {
    const V3 w = std::cos(ang) * basis[0] + std::sin(ang) * basis[1];
    const auto init = initial_conditions_from_orbit(kCP2, clifford, w, Branch::BetaDouble);
    const double k = std::sqrt(0.5);
    CHECK(std::abs(std::abs(init.state.alpha) - k) < 1e-6);
    CHECK(std::abs(std::abs(init.state.beta) - k) < 1e-6);
    CHECK(init.state.alpha * init.state.beta < 0.0);
    // derived fields satisfy a^2 + b^2 = 1 by construction
    const double a = init.state.a(), b = init.state.b();
    CHECK(a * a + b * b == doctest::Approx(1.0).epsilon(1e-15));
    // orientation convention
    const C3 Jw = std::complex<double>(0, 1) * w.cast<std::complex<double>>();
    CHECK(std::abs(section_metric(kCP2, init.xi, init.xi) - 1.0) < 1e-9);
    (void)Jw;
  }
}

TEST_CASE("initial conditions: branch swap interchanges the roles") {
  Rng rng(13);
  for (const auto& p : {kCP2, kCH2}) {
    for (int i = 0; i < 5; ++i) {
      const SectionPoint pt = testutil::random_regular_section_point(p, rng);
      const auto basis = section_tangent_basis(p, pt);
      const double ang = testutil::uniform(rng, 0.0, 2 * kPi);
      const V3 w = std::cos(ang) * basis[0] + std::sin(ang) * basis[1];
      const auto ib = initial_conditions_from_orbit(p, pt, w, Branch::BetaDouble);
      const auto ia = initial_conditions_from_orbit(p, pt, w, Branch::AlphaDouble);
      // the two branches see the same pair of curvatures with roles swapped
      // (xi orientation may flip, negating both values)
      const double sb = ib.xi.dot(ia.xi) > 0 ? 1.0 : -1.0;
      CHECK(std::abs(ib.state.alpha - sb * ia.state.beta) < 1e-9);
      CHECK(std::abs(ib.state.beta - sb * ia.state.alpha) < 1e-9);
      // angles are complementary
      CHECK(std::abs(ib.state.phi + ia.state.phi - kPi / 2) < 1e-9);
    }
  }
}

TEST_CASE("initial conditions: rejects non-regular and non-unit input") {
  const SectionPoint bad{V3(0.0, 1.0, 0.0)};
  CHECK_THROWS(initial_conditions_from_orbit(kCP2, bad, V3(0, 0, 1), Branch::BetaDouble));
  const SectionPoint ok = section_point(kCP2, V3(1.0, 1.0, 1.0) / std::sqrt(3.0), 1.0);
  CHECK_THROWS(initial_conditions_from_orbit(kCP2, ok, V3(0, 0, 2), Branch::BetaDouble));
}
