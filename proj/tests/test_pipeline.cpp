#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperforge/io.hpp"
#include "hyperforge/pipeline.hpp"

#include <cstdio>
#include <filesystem>

using namespace hyperforge;
using namespace hyperforge::pipeline;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.t_max = 0.1;
  cfg.grid_t = 4;
  cfg.grid_theta = 4;
  return cfg;
}

}  // namespace

TEST_CASE("config: json round trip and defaults") {
  const RunConfig cfg = small_config();
  const RunConfig back = RunConfig::from_json(cfg.to_json());
  CHECK(back.space == cfg.space);
  CHECK(back.c == cfg.c);
  CHECK((back.p - cfg.p).norm() == 0.0);
  CHECK(back.grid_t == cfg.grid_t);
  CHECK(back.geodesic == cfg.geodesic);

  // partial config keeps defaults
  const RunConfig partial = RunConfig::from_json(R"({"space":"ch2","c":-4.0,"p":[1.2,0.5,0.35]})");
  CHECK(partial.space == "ch2");
  CHECK(partial.t_max == doctest::Approx(0.2));
}

TEST_CASE("config: validation failures") {
  RunConfig cfg = small_config();
  cfg.space = "ch2";  // c is still +4
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.p = spaceform::V3(0.0, 1.0, 0.0);  // not regular
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.ode_step = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.space = "cp3";
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = small_config();
  cfg.p = spaceform::V3(0.1, 1.0, 1.0);  // spacelike for ch2
  cfg.space = "ch2";
  cfg.c = -4.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("construct + verify: pass on defaults, deterministic outputs") {
  const RunConfig cfg = small_config();
  const auto c1 = run_construct(cfg);
  CHECK_FALSE(c1.halted);
  CHECK(c1.trajectory.size() > 10);
  CHECK(c1.curve.size() == c1.trajectory.size());

  const auto v1 = run_verify(cfg, c1.trajectory, c1.curve);
  CHECK(v1.report.pass);

  // byte-identical serialization across repeated runs
  const auto c2 = run_construct(cfg);
  CHECK(io::trajectory_to_json(c1.trajectory) == io::trajectory_to_json(c2.trajectory));
  CHECK(io::curve_to_csv(c1.curve) == io::curve_to_csv(c2.curve));
  const auto v2 = run_verify(cfg, c2.trajectory, c2.curve);
  CHECK(io::report_to_json(v1.report) == io::report_to_json(v2.report));
  CHECK(io::samples_to_csv(v1.samples) == io::samples_to_csv(v2.samples));
}

TEST_CASE("construct: symmetric span merges the two half-integrations") {
  RunConfig cfg = small_config();
  cfg.t_min = -0.08;
  const auto res = run_construct(cfg);
  CHECK_FALSE(res.halted);
  CHECK(res.trajectory.t.front() == doctest::Approx(-0.08));
  CHECK(res.trajectory.t.back() == doctest::Approx(0.1));
  CHECK(std::is_sorted(res.trajectory.t.begin(), res.trajectory.t.end()));
  const auto v = run_verify(cfg, res.trajectory, res.curve);
  CHECK(v.report.pass);
}

TEST_CASE("branches produce distinct curve files") {
  RunConfig cfg = small_config();
  const auto beta = run_construct(cfg);
  cfg.branch = curvatureflow::Branch::AlphaDouble;
  const auto alpha = run_construct(cfg);
  double sep = 0.0;
  const auto sp = cfg.params();
  const curvebuilder::CurveEvaluator eb(sp, beta.curve), ea(sp, alpha.curve);
  for (double t = 0.0; t <= 0.1; t += 0.01)
    sep = std::max(sep, spaceform::section_distance(sp, eb.at(t).pos, ea.at(t).pos));
  CHECK(sep > 1e-4);
}

TEST_CASE("geodesic mode fails verification with three-eigenvalue diagnostic") {
  RunConfig cfg = small_config();
  cfg.geodesic = true;
  const auto res = run_construct(cfg);
  const auto v = run_verify(cfg, res.trajectory, res.curve);
  CHECK_FALSE(v.report.pass);
  const std::string rep = io::report_to_json(v.report);
  CHECK(rep.find("three distinct values") != std::string::npos);
}

TEST_CASE("io: trajectory json round trip") {
  const RunConfig cfg = small_config();
  const auto res = run_construct(cfg);
  const std::string text = io::trajectory_to_json(res.trajectory);
  const auto back = io::trajectory_from_json(text);
  CHECK(io::trajectory_to_json(back) == text);
  CHECK(back.size() == res.trajectory.size());
  CHECK(back.branch == res.trajectory.branch);
}

TEST_CASE("io: curve csv round trip") {
  const RunConfig cfg = small_config();
  const auto res = run_construct(cfg);
  const std::string text = io::curve_to_csv(res.curve);
  const auto back = io::curve_from_csv(text);
  CHECK(io::curve_to_csv(back) == text);
  REQUIRE(back.size() == res.curve.size());
  CHECK((back[3].pos.x - res.curve[3].pos.x).norm() == 0.0);
}

TEST_CASE("io: samples csv and mesh export") {
  const RunConfig cfg = small_config();
  const auto c = run_construct(cfg);
  const auto v = run_verify(cfg, c.trajectory, c.curve);
  const std::string csv = io::samples_to_csv(v.samples);

  const auto rows = io::sample_rows_from_csv(csv);
  CHECK(rows.size() == v.samples.size());
  CHECK(io::sample_rows_to_csv(rows) == csv);  // round trip, byte stable

  const std::string mesh = io::sample_rows_to_mesh_json(rows);
  CHECK(mesh.find("\"dims\"") != std::string::npos);
  CHECK(mesh.find("\"vertices\"") != std::string::npos);
  CHECK(mesh.find("\"scalars\"") != std::string::npos);

  CHECK_THROWS(io::sample_rows_from_csv("t,theta1\n"));
  CHECK_THROWS(io::sample_rows_from_csv(""));
  auto partial = rows;
  partial.pop_back();
  CHECK_THROWS(io::sample_rows_to_mesh_json(partial));  // not a full grid
}

TEST_CASE("sweep: row contract and determinism") {
  RunConfig cfg = small_config();
  cfg.grid_t = 3;
  cfg.grid_theta = 3;
  cfg.t_max = 0.05;
  const auto s1 = run_sweep(cfg, 4);
  CHECK(s1.rows.size() == 4);
  for (std::size_t i = 0; i < s1.rows.size(); ++i)
    CHECK(s1.rows[i].w_angle == doctest::Approx(2 * 3.14159265358979 * i / 4).epsilon(1e-6));
  const auto s2 = run_sweep(cfg, 4);
  CHECK(sweep_to_json(s1) == sweep_to_json(s2));
  CHECK_THROWS_AS(run_sweep(cfg, 3), ConfigError);
}

TEST_CASE("verify rejects mismatched inputs") {
  const RunConfig cfg = small_config();
  const auto res = run_construct(cfg);
  RunConfig other = cfg;
  other.c = 1.0;
  CHECK_THROWS_AS(run_verify(other, res.trajectory, res.curve), ConfigError);
}
