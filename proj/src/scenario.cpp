#include "chemdecarb/scenario.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "chemdecarb/defaults.hpp"
#include "chemdecarb/json_util.hpp"

namespace chemdecarb {

using nlohmann::json;

std::string_view to_string(PlanMode m) {
  return m == PlanMode::deadline ? "deadline" : "capital_cap";
}
std::string_view to_string(Pooling p) {
  return p == Pooling::global ? "global" : "per_region";
}

void LearningParams::validate() const {
  if (!(lr_early >= 0.0 && lr_early <= lr_mature && lr_mature < 1.0))
    throw ConfigError("learning rates must satisfy 0 <= lr_early <= lr_mature < 1");
  if (early_phase_count < 1) throw ConfigError("early_phase_count must be >= 1");
}

double Trajectory::at(int year) const {
  if (points.empty()) return 1.0;
  if (year <= points.front().first) return points.front().second;
  if (year >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& [y1, v1] = points[i];
    if (year <= y1) {
      const auto& [y0, v0] = points[i - 1];
      const double t = static_cast<double>(year - y0) / static_cast<double>(y1 - y0);
      return v0 + t * (v1 - v0);
    }
  }
  return points.back().second;
}

void Trajectory::validate(const std::string& what) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].second >= 0.0))
      throw ConfigError(what + ": trajectory values must be >= 0");
    if (i && points[i].first <= points[i - 1].first)
      throw ConfigError(what + ": trajectory years must be strictly increasing");
  }
}

double FeedstockRamp::share_at(int year) const {
  if (year <= start_year) return 0.0;
  if (year >= target_year) return target_share;
  return target_share * static_cast<double>(year - start_year) /
         static_cast<double>(target_year - start_year);
}

int ScenarioParams::deadline_for(Region r) const {
  return (r == Region::NorthAmerica || r == Region::Europe) ? deadline_na_eu
                                                            : deadline_me_china;
}

PlanMode ScenarioParams::mode_for(Region r) const {
  auto it = mode.find(r);
  return it == mode.end() ? PlanMode::deadline : it->second;
}

double ScenarioParams::cap_for(Region r, Group g) const {
  auto it = caps.find({r, g});
  if (it == caps.end())
    throw ConfigError("scenario " + id + " has no capital cap for " +
                      std::string(to_string(r)) + "/" + std::string(to_string(g)));
  return it->second;
}

const LearningParams& ScenarioParams::learning_for(TechId t) const {
  auto it = learning_by_tech.find(t);
  return it == learning_by_tech.end() ? learning : it->second;
}

double ScenarioParams::grid_factor(Region r, int year) const {
  auto it = grid_multiplier.find(r);
  return it == grid_multiplier.end() ? 1.0 : it->second.at(year);
}

double ScenarioParams::upstream_factor(Region r, int year) const {
  auto it = upstream_multiplier.find(r);
  return it == upstream_multiplier.end() ? 1.0 : it->second.at(year);
}

double ScenarioParams::circular_share(Region r, int year) const {
  auto it = circular_feedstock.find(r);
  return it == circular_feedstock.end() ? 0.0 : it->second.share_at(year);
}

double ScenarioParams::circular_target(Region r) const {
  auto it = circular_feedstock.find(r);
  return it == circular_feedstock.end() ? 0.0 : it->second.target_share;
}

void ScenarioParams::validate() const {
  const std::string who = "scenario " + id + ": ";
  if (deadline_na_eu < first_online_year || deadline_me_china < first_online_year)
    throw ConfigError(who + "deadlines must be >= first_online_year");
  for (const auto& [k, v] : caps)
    if (!(v > 0.0)) throw ConfigError(who + "capital caps must be > 0");
  learning.validate();
  for (const auto& [_, lp] : learning_by_tech) lp.validate();
  for (const auto& [r, t] : grid_multiplier) t.validate(who + "grid_multiplier");
  for (const auto& [r, t] : upstream_multiplier) t.validate(who + "upstream_multiplier");
  for (const auto& [r, ramp] : circular_feedstock) {
    if (!(ramp.target_share >= 0.0 && ramp.target_share <= 1.0))
      throw ConfigError(who + "feedstock shares must lie in [0, 1]");
    if (ramp.target_year <= ramp.start_year)
      throw ConfigError(who + "feedstock ramp target_year must follow start_year");
  }
  if (initial_wave < 0 || followon_offset < 0)
    throw ConfigError(who + "initial_wave and followon_offset must be >= 0");
  if (earliest_start_year > first_online_year)
    throw ConfigError(who + "earliest_start_year after first_online_year");
  for (const auto& [r, m] : mode)
    if (m == PlanMode::capital_cap)
      for (Group g : kGroups)
        if (g != Group::chlor_alkali && !caps.contains({r, g}))
          throw ConfigError(who + "capital-cap region " + std::string(to_string(r)) +
                            " lacks a cap for " + std::string(to_string(g)));
}

namespace {

LearningParams learning_from(const json& j, const std::string& ctx) {
  json_util::check_keys(j, {"lr_early", "lr_mature", "early_phase_count", "pooling"}, ctx);
  LearningParams lp;
  lp.lr_early = j.at("lr_early").get<double>();
  lp.lr_mature = j.at("lr_mature").get<double>();
  lp.early_phase_count = j.at("early_phase_count").get<int>();
  const auto pool = j.at("pooling").get<std::string>();
  if (pool == "global") lp.pooling = Pooling::global;
  else if (pool == "per_region") lp.pooling = Pooling::per_region;
  else throw ConfigError(ctx + ": unknown pooling '" + pool + "'");
  return lp;
}

json learning_to(const LearningParams& lp) {
  return {{"lr_early", lp.lr_early},
          {"lr_mature", lp.lr_mature},
          {"early_phase_count", lp.early_phase_count},
          {"pooling", to_string(lp.pooling)}};
}

Trajectory trajectory_from(const json& j) {
  Trajectory t;
  for (const auto& p : j) t.points.emplace_back(p.at(0).get<int>(), p.at(1).get<double>());
  return t;
}

json trajectory_to(const Trajectory& t) {
  json a = json::array();
  for (const auto& [y, v] : t.points) a.push_back({y, v});
  return a;
}

template <typename F>
void for_regions(const json& j, F&& f) {
  for (const auto& [k, v] : j.items()) {
    if (!k.empty() && k.front() == '_') continue;
    f(region_from(k), v);
  }
}

}  // namespace

ScenarioParams scenario_from_json(const json& j) {
  ScenarioParams s;
  try {
    json_util::check_keys(
        j,
        {"id", "deadlines", "mode", "caps_usd_per_year", "learning",
         "grid_multiplier", "upstream_multiplier", "circular_feedstock",
         "first_online_year", "initial_wave", "followon_offset",
         "ecracker_year", "earliest_start_year"},
        "scenario");
    s.id = j.value("id", std::string("custom"));
    if (j.contains("deadlines")) {
      const auto& d = j["deadlines"];
      json_util::check_keys(d, {"na_eu", "me_china"}, "scenario.deadlines");
      s.deadline_na_eu = d.value("na_eu", s.deadline_na_eu);
      s.deadline_me_china = d.value("me_china", s.deadline_me_china);
    }
    if (j.contains("mode"))
      for_regions(j["mode"], [&](Region r, const json& v) {
        const auto m = v.get<std::string>();
        if (m == "deadline") s.mode[r] = PlanMode::deadline;
        else if (m == "capital_cap") s.mode[r] = PlanMode::capital_cap;
        else throw ConfigError("scenario.mode: unknown mode '" + m + "'");
      });
    if (j.contains("caps_usd_per_year"))
      for_regions(j["caps_usd_per_year"], [&](Region r, const json& groups) {
        for (const auto& [g, v] : groups.items()) {
          if (g.front() == '_') continue;
          s.caps[{r, group_from(g, "scenario.caps group")}] = v.get<double>();
        }
      });
    if (j.contains("learning")) {
      const auto& l = j["learning"];
      json_util::check_keys(l, {"default", "by_tech"}, "scenario.learning");
      if (l.contains("default")) s.learning = learning_from(l["default"], "scenario.learning.default");
      if (l.contains("by_tech"))
        for (const auto& [t, v] : l["by_tech"].items()) {
          if (t.front() == '_') continue;
          s.learning_by_tech[tech_from(t)] = learning_from(v, "scenario.learning.by_tech." + t);
        }
    }
    if (j.contains("grid_multiplier"))
      for_regions(j["grid_multiplier"], [&](Region r, const json& v) {
        s.grid_multiplier[r] = trajectory_from(v);
      });
    if (j.contains("upstream_multiplier"))
      for_regions(j["upstream_multiplier"], [&](Region r, const json& v) {
        s.upstream_multiplier[r] = trajectory_from(v);
      });
    if (j.contains("circular_feedstock"))
      for_regions(j["circular_feedstock"], [&](Region r, const json& v) {
        json_util::check_keys(v, {"target_share", "target_year", "start_year"},
                              "scenario.circular_feedstock");
        FeedstockRamp ramp;
        ramp.target_share = v.at("target_share").get<double>();
        ramp.target_year = v.at("target_year").get<int>();
        ramp.start_year = v.value("start_year", 2025);
        s.circular_feedstock[r] = ramp;
      });
    s.first_online_year = j.value("first_online_year", s.first_online_year);
    s.initial_wave = j.value("initial_wave", s.initial_wave);
    s.followon_offset = j.value("followon_offset", s.followon_offset);
    s.ecracker_year = j.value("ecracker_year", s.ecracker_year);
    s.earliest_start_year = j.value("earliest_start_year", s.earliest_start_year);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

json to_json(const ScenarioParams& s) {
  json j;
  j["id"] = s.id;
  j["deadlines"] = {{"na_eu", s.deadline_na_eu}, {"me_china", s.deadline_me_china}};
  j["mode"] = json::object();
  for (const auto& [r, m] : s.mode) j["mode"][std::string(to_string(r))] = to_string(m);
  j["caps_usd_per_year"] = json::object();
  for (const auto& [k, v] : s.caps)
    j["caps_usd_per_year"][std::string(to_string(k.first))][std::string(to_string(k.second))] = v;
  j["learning"]["default"] = learning_to(s.learning);
  j["learning"]["by_tech"] = json::object();
  for (const auto& [t, lp] : s.learning_by_tech)
    j["learning"]["by_tech"][std::string(to_string(t))] = learning_to(lp);
  j["grid_multiplier"] = json::object();
  for (const auto& [r, t] : s.grid_multiplier)
    j["grid_multiplier"][std::string(to_string(r))] = trajectory_to(t);
  j["upstream_multiplier"] = json::object();
  for (const auto& [r, t] : s.upstream_multiplier)
    j["upstream_multiplier"][std::string(to_string(r))] = trajectory_to(t);
  j["circular_feedstock"] = json::object();
  for (const auto& [r, ramp] : s.circular_feedstock)
    j["circular_feedstock"][std::string(to_string(r))] = {
        {"target_share", ramp.target_share},
        {"target_year", ramp.target_year},
        {"start_year", ramp.start_year}};
  j["first_online_year"] = s.first_online_year;
  j["initial_wave"] = s.initial_wave;
  j["followon_offset"] = s.followon_offset;
  j["ecracker_year"] = s.ecracker_year;
  j["earliest_start_year"] = s.earliest_start_year;
  return j;
}

namespace {

const json& preset_table() {
  static const json table = json_util::strip_docs(
      json_util::parse(defaults::text("scenarios"), "scenario presets"));
  return table;
}

}  // namespace

std::vector<std::string> preset_names() { return {"SU", "GA", "GG"}; }

ScenarioParams preset(const std::string& name) {
  const auto& t = preset_table();
  if (!t.contains(name)) throw ConfigError("unknown scenario preset '" + name + "'");
  return scenario_from_json(t[name]);
}

ScenarioParams scenario_from_document(const json& doc) {
  if (!doc.is_object()) throw ConfigError("scenario document must be an object");
  json base;
  json patch = doc;
  if (doc.contains("preset")) {
    const auto name = doc["preset"].get<std::string>();
    base = to_json(preset(name));
    patch.erase("preset");
  } else {
    base = to_json(ScenarioParams{});
  }
  base.merge_patch(patch);
  return scenario_from_json(base);
}

ScenarioParams load_scenario(const std::filesystem::path& path) {
  return scenario_from_document(json_util::read_file(path));
}

}  // namespace chemdecarb
