#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/types.hpp"

namespace chemdecarb {

enum class PlanMode { deadline, capital_cap };
enum class Pooling { global, per_region };

struct LearningParams {
  double lr_early = 0.05;   // fractional cost reduction per doubling
  double lr_mature = 0.15;
  int early_phase_count = 5;
  Pooling pooling = Pooling::global;

  void validate() const;
  friend bool operator==(const LearningParams&, const LearningParams&) = default;
};

// Piecewise-linear path through (year, value) points, flat outside.
struct Trajectory {
  std::vector<std::pair<int, double>> points;

  double at(int year) const;
  void validate(const std::string& what) const;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Linear ramp of a substitute-feedstock share from 0 at start_year to
// target_share at target_year, flat afterwards.
struct FeedstockRamp {
  double target_share = 0.0;
  int target_year = 2050;
  int start_year = 2025;

  double share_at(int year) const;
  friend bool operator==(const FeedstockRamp&, const FeedstockRamp&) = default;
};

struct ScenarioParams {
  std::string id = "custom";
  int deadline_na_eu = 2050;
  int deadline_me_china = 2060;
  std::map<Region, PlanMode> mode;
  std::map<std::pair<Region, Group>, double> caps;  // $ / y
  LearningParams learning;
  std::map<TechId, LearningParams> learning_by_tech;
  std::map<Region, Trajectory> grid_multiplier;      // x anchor grid CI
  std::map<Region, Trajectory> upstream_multiplier;  // x anchor upstream
  std::map<Region, FeedstockRamp> circular_feedstock;
  int first_online_year = 2030;
  int initial_wave = 3;
  int followon_offset = 5;  // deadline mode: first follow-on online year
                            // is first_online_year + followon_offset
  int ecracker_year = 2040;
  int earliest_start_year = 2024;

  int deadline_for(Region r) const;
  PlanMode mode_for(Region r) const;
  double cap_for(Region r, Group g) const;  // throws if absent
  const LearningParams& learning_for(TechId t) const;
  double grid_factor(Region r, int year) const;
  double upstream_factor(Region r, int year) const;
  double circular_share(Region r, int year) const;
  double circular_target(Region r) const;

  void validate() const;
  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

// Strict parse: unknown keys (other than '_'-prefixed notes) are errors.
ScenarioParams scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioParams& s);

ScenarioParams preset(const std::string& name);  // SU, GA, GG
std::vector<std::string> preset_names();

// `{ "preset": "SU", ...overrides }`; the override tree is merged onto the
// preset's serialized form and then parsed strictly.
ScenarioParams scenario_from_document(const nlohmann::json& doc);
ScenarioParams load_scenario(const std::filesystem::path& path);

std::string_view to_string(PlanMode m);
std::string_view to_string(Pooling p);

}  // namespace chemdecarb
