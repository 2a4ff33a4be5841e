#include <benchmark/benchmark.h>

#include "hyperforge/curvatureflow.hpp"
#include "hyperforge/curvebuilder.hpp"
#include "hyperforge/hypersurface.hpp"
#include "hyperforge/orbits.hpp"
#include "hyperforge/spaceform.hpp"

#include <numbers>

using namespace hyperforge;
using spaceform::SectionPoint;
using spaceform::SpaceFormParams;
using spaceform::V3;

namespace {

const SpaceFormParams kCP2 = spaceform::projective(4.0);
const SectionPoint kBase{V3(1.0, 1.2, 0.8).normalized()};

static void BM_OdeRhs(benchmark::State& state) {
  const curvatureflow::CurvatureState st{2.0, 0.0, std::numbers::pi / 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvatureflow::ode_rhs(st, 4.0));
  }
}
BENCHMARK(BM_OdeRhs);

static void BM_Integrate(benchmark::State& state) {
  const curvatureflow::CurvatureState init{2.0, 0.0, std::numbers::pi / 4};
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvatureflow::integrate(init, 4.0, {0.0, 0.2}, 1e-10));
  }
}
BENCHMARK(BM_Integrate);

static void BM_OrbitGeometry(benchmark::State& state) {
  const orbits::OrbitPoint q{kBase, 0.7, 1.9};
  for (auto _ : state) {
    benchmark::DoNotOptimize(orbits::numeric_orbit_geometry(kCP2, q, 1e-4));
  }
}
BENCHMARK(BM_OrbitGeometry);

struct PipelineFixture {
  curvebuilder::CurveEvaluator eval;

  static PipelineFixture make() {
    const auto basis = spaceform::section_tangent_basis(kCP2, kBase);
    const V3 w = std::cos(0.3) * basis[0] + std::sin(0.3) * basis[1];
    const auto init = curvatureflow::initial_conditions_from_orbit(
        kCP2, kBase, w, curvatureflow::Branch::BetaDouble);
    const auto traj = curvatureflow::integrate(init.state, 4.0, {0.0, 0.2}, 1e-11);
    auto curve = curvebuilder::reconstruct_curve(kCP2, traj, kBase, init.w, init.xi);
    return {curvebuilder::CurveEvaluator(kCP2, std::move(curve))};
  }
};

static void BM_ShapeOperator(benchmark::State& state) {
  static const PipelineFixture fx = PipelineFixture::make();
  for (auto _ : state) {
    auto s = hypersurface::sample_at(kCP2, fx.eval, 0.1, 0.9, 2.1);
    benchmark::DoNotOptimize(hypersurface::numeric_shape_operator(kCP2, fx.eval, s, 1e-4));
  }
}
BENCHMARK(BM_ShapeOperator);

static void BM_CurveEval(benchmark::State& state) {
  static const PipelineFixture fx = PipelineFixture::make();
  double t = 0.0;
  for (auto _ : state) {
    t = t > 0.19 ? 0.0 : t + 1.7e-4;
    benchmark::DoNotOptimize(fx.eval.at(t));
  }
}
BENCHMARK(BM_CurveEval);

}  // namespace

BENCHMARK_MAIN();
