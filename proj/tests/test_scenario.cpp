#include <filesystem>
#include <fstream>

#include <catch_amalgamated.hpp>

#include <nlohmann/json.hpp>

#include "chemdecarb/scenario.hpp"

using namespace chemdecarb;
using nlohmann::json;

TEST_CASE("presets carry the published deadlines, caps and circular targets") {
  for (const auto& name : preset_names()) {
    const ScenarioParams s = preset(name);
    CHECK(s.id == name);
    CHECK(s.deadline_for(Region::NorthAmerica) == 2050);
    CHECK(s.deadline_for(Region::Europe) == 2050);
    CHECK(s.deadline_for(Region::MiddleEast) == 2060);
    CHECK(s.deadline_for(Region::China) == 2060);
    CHECK_NOTHROW(s.validate());
  }
  CHECK(preset("SU").mode_for(Region::NorthAmerica) == PlanMode::deadline);
  CHECK(preset("GA").mode_for(Region::NorthAmerica) == PlanMode::capital_cap);
  CHECK(preset("GA").cap_for(Region::NorthAmerica, Group::steam_crackers) == 2.3e9);
  CHECK(preset("GG").cap_for(Region::NorthAmerica, Group::steam_crackers) == 1.9e9);
  CHECK(preset("GG").circular_target(Region::NorthAmerica) == Catch::Approx(0.10));
  CHECK(preset("SU").circular_target(Region::NorthAmerica) == Catch::Approx(0.20));
  CHECK(preset("GA").circular_target(Region::NorthAmerica) == Catch::Approx(0.15));
  CHECK_THROWS_AS(preset("XX"), InputError);
}

TEST_CASE("presets are ordered by ambition") {
  const ScenarioParams su = preset("SU"), ga = preset("GA"), gg = preset("GG");
  for (Region r : kRegions) {
    for (int y : {2030, 2040, 2050, 2060}) {
      CHECK(su.grid_factor(r, y) <= ga.grid_factor(r, y));
      CHECK(ga.grid_factor(r, y) <= gg.grid_factor(r, y));
      CHECK(su.upstream_factor(r, y) <= gg.upstream_factor(r, y));
    }
    CHECK(su.grid_factor(r, 2023) == 1.0);
  }
  CHECK(su.learning_for(TechId::ccs_postcombustion).pooling == Pooling::global);
}

TEST_CASE("trajectories interpolate linearly and hold flat outside") {
  const Trajectory t{{{2030, 1.0}, {2040, 0.5}}};
  CHECK(t.at(2020) == 1.0);
  CHECK(t.at(2035) == Catch::Approx(0.75));
  CHECK(t.at(2070) == 0.5);
  CHECK_THROWS_AS((Trajectory{{{2040, 1.0}, {2030, 0.5}}}.validate("t")), InputError);
}

TEST_CASE("feedstock ramp") {
  const FeedstockRamp r{0.2, 2050, 2025};
  CHECK(r.share_at(2024) == 0.0);
  CHECK(r.share_at(2025) == 0.0);
  CHECK(r.share_at(2040) == Catch::Approx(0.12));
  CHECK(r.share_at(2060) == Catch::Approx(0.2));
}

TEST_CASE("a bare preset document equals the preset") {
  CHECK(scenario_from_document(json{{"preset", "SU"}}) == preset("SU"));
}

TEST_CASE("overrides merge onto the preset") {
  const ScenarioParams s =
      scenario_from_document(json{{"preset", "GA"}, {"deadlines", {{"na_eu", 2045}}}});
  CHECK(s.deadline_na_eu == 2045);
  ScenarioParams expect = preset("GA");
  expect.deadline_na_eu = 2045;
  CHECK(s == expect);

  const ScenarioParams nested = scenario_from_document(
      json{{"preset", "SU"}, {"learning", {{"default", {{"lr_mature", 0.1}}}}}});
  CHECK(nested.learning.lr_mature == 0.1);
  CHECK(nested.learning.lr_early == preset("SU").learning.lr_early);
}

TEST_CASE("unknown keys are rejected by name") {
  try {
    scenario_from_document(json{{"preset", "SU"}, {"learnig", {{"default", {{"lr_early", 0.1}}}}}});
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("learnig") != std::string::npos);
  }
  CHECK_NOTHROW(scenario_from_document(json{{"preset", "SU"}, {"_note", "ok"}}));
}

TEST_CASE("invalid values are rejected") {
  CHECK_THROWS_AS(scenario_from_document(
                      json{{"preset", "SU"}, {"learning", {{"default", {{"lr_early", 1.5}}}}}}),
                  InputError);
  CHECK_THROWS_AS(scenario_from_document(json{{"preset", "SU"}, {"deadlines", {{"na_eu", 2020}}}}),
                  InputError);
}

TEST_CASE("serialization round trips every preset") {
  for (const auto& name : preset_names()) {
    const ScenarioParams s = preset(name);
    CHECK(scenario_from_json(to_json(s)) == s);
    CHECK(preset(name) == s);
  }
}

TEST_CASE("load_scenario reads a file or names the missing one") {
  const auto dir = std::filesystem::temp_directory_path() / "chemdecarb_scenario_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "s.json";
  std::ofstream(path) << R"({"preset": "GG", "initial_wave": 2})";
  const ScenarioParams s = load_scenario(path);
  CHECK(s.initial_wave == 2);
  CHECK(s.caps == preset("GG").caps);
  CHECK_THROWS_AS(load_scenario(dir / "absent.json"), InputError);
  std::filesystem::remove_all(dir);
}
