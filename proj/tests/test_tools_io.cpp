#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <sstream>

#include "attkit_tools/scenario_json.hpp"
#include "attkit_tools/svg_plot.hpp"
#include "attkit_tools/trace_io.hpp"

using namespace attkit;
using namespace attkit::tools;

TEST_CASE("scenario json round trip") {
  const ScenarioConfig original = default_example(2);
  const nlohmann::json j = scenario_to_json(original);
  const ScenarioConfig back = scenario_from_json(j);

  CHECK(back.name == original.name);
  CHECK(back.k == original.k);
  CHECK(back.delta_fraction == original.delta_fraction);
  CHECK(back.dt == original.dt);
  CHECK(back.t_end == original.t_end);
  CHECK(back.modes == original.modes);
  CHECK(back.gains.gamma_p == original.gains.gamma_p);
  CHECK(back.gains.bias_bound.value() == original.gains.bias_bound.value());
  for (std::size_t i = 0; i < 3; ++i)
    CHECK((back.inertial[i] - original.inertial[i]).norm() == 0.0);
  CHECK((back.r0_hat - original.r0_hat).frobenius_norm() == 0.0);
  CHECK(back.omega_profile.type == original.omega_profile.type);
  CHECK((back.omega_profile.value(1.7) - original.omega_profile.value(1.7)).norm() == 0.0);
  CHECK((back.bias_profile.value(3.3) - original.bias_profile.value(3.3)).norm() == 0.0);
}

TEST_CASE("scenario json covers all profile types") {
  ScenarioConfig c = default_example(1);
  c.omega_profile = VectorProfile::constant({0.1, 0.0, -0.2});
  c.bias_profile = VectorProfile::zero();
  const ScenarioConfig back = scenario_from_json(scenario_to_json(c));
  CHECK(back.omega_profile.type == VectorProfile::Type::Constant);
  CHECK((back.omega_profile.value(5.0) - Vec3{0.1, 0.0, -0.2}).norm() == 0.0);
  CHECK(back.bias_profile.type == VectorProfile::Type::Zero);
}

TEST_CASE("scenario json rejects malformed input") {
  nlohmann::json j = scenario_to_json(default_example(1));
  j["modes"] = nlohmann::json::array({"warp-drive"});
  CHECK_THROWS_AS(scenario_from_json(j), std::invalid_argument);

  nlohmann::json j2 = scenario_to_json(default_example(1));
  j2.erase("omega_profile");
  CHECK_THROWS_AS(scenario_from_json(j2), std::invalid_argument);

  nlohmann::json j3 = scenario_to_json(default_example(1));
  j3["r0_hat"] = nlohmann::json::array({1, 2, 3});
  CHECK_THROWS_AS(scenario_from_json(j3), std::invalid_argument);
}

TEST_CASE("trace csv schema and exact round trip") {
  ScenarioConfig cfg = default_example(1);
  cfg.t_end = 0.2;
  cfg.record_stride = 50;
  const RunResult result = run(cfg);

  std::ostringstream out;
  write_trace_csv(out, result);
  const std::string text = out.str();
  CHECK(text.rfind("t,j,mode,attitude_err,bias_err,phi,q,l0,jump\n", 0) == 0);

  std::istringstream in(text);
  const std::vector<TraceRow> rows = read_trace_csv(in);
  REQUIRE(rows.size() == result.trace.size() * cfg.modes.size());

  // 17 significant digits make the parse reproduce the exact doubles.
  std::size_t r = 0;
  for (const TraceRecord& rec : result.trace) {
    for (std::size_t im = 0; im < cfg.modes.size(); ++im, ++r) {
      CHECK(rows[r].t == rec.t);
      CHECK(rows[r].mode == to_string(cfg.modes[im]));
      CHECK(rows[r].attitude_err == rec.modes[im].attitude_err);
      CHECK(rows[r].bias_err == rec.modes[im].bias_err);
      CHECK(rows[r].phi == rec.modes[im].phi);
      CHECK(rows[r].l0 == rec.modes[im].l0);
      CHECK(rows[r].q == rec.modes[im].q);
    }
  }
}

TEST_CASE("trace csv rejects foreign headers") {
  std::istringstream in("time,mode\n1,hybrid1\n");
  CHECK_THROWS_AS(read_trace_csv(in), std::invalid_argument);
}

TEST_CASE("summary json carries the per-mode monitors") {
  ScenarioConfig cfg = default_example(2);
  cfg.t_end = 0.5;
  const RunResult result = run(cfg);
  const nlohmann::json j = summary_to_json(result);
  CHECK(j.at("scenario") == "example2");
  REQUIRE(j.at("modes").size() == 3);
  for (const auto& m : j.at("modes")) {
    CHECK(m.contains("settling_time"));
    CHECK(m.contains("jump_count"));
    CHECK(m.contains("max_l0_flow_increase"));
    CHECK(m.contains("min_jump_drop"));
    CHECK(m.contains("max_orth_drift"));
  }
  CHECK(j.at("config").at("modes").size() == 3);
}

TEST_CASE("svg plot renders one polyline per mode and panel") {
  ScenarioConfig cfg = default_example(1);
  cfg.t_end = 0.5;
  cfg.record_stride = 20;
  const RunResult result = run(cfg);
  std::ostringstream out;
  write_trace_csv(out, result);
  std::istringstream in(out.str());
  const std::vector<TraceRow> rows = read_trace_csv(in);

  const std::string svg = render_error_plot(rows, "study");
  CHECK(svg.rfind("<svg", 0) == 0);
  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
       pos = svg.find("<polyline", pos + 1))
    ++polylines;
  CHECK(polylines == 6);  // three modes, two panels
  CHECK(svg.find("hybrid1") != std::string::npos);
  CHECK(svg.find("smooth1") != std::string::npos);

  CHECK_THROWS_AS(render_error_plot({}, "empty"), std::invalid_argument);
}
