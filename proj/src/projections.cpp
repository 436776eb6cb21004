#include "chemdecarb/projections.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "chemdecarb/defaults.hpp"
#include "chemdecarb/json_util.hpp"

namespace chemdecarb {

using nlohmann::json;

void GrowthSchedule::validate() const {
  auto ok = [](double r) { return r >= -0.10 && r <= 0.10; };
  if (!(anchor >= 0.0)) throw InputError("growth anchor must be >= 0");
  if (!ok(rate_to_2050) || !ok(rate_after_2050))
    throw InputError("growth rates must lie in [-0.10, 0.10]");
}

double ProductionSeries::at(int year) const {
  if (year < first_year || year > last_year())
    throw InputError("year " + std::to_string(year) +
                     " outside production series range");
  return values[static_cast<std::size_t>(year - first_year)];
}

ProductionSeries production_series(const GrowthSchedule& g, Region region,
                                   Chemical chemical) {
  g.validate();
  ProductionSeries s{region, chemical, kBaseYear, {}};
  s.values.reserve(kHorizonYear - kBaseYear + 1);
  double v = g.anchor;
  s.values.push_back(v);
  for (int y = kBaseYear; y < kHorizonYear; ++y) {
    v *= 1.0 + (y < kGrowthBreakYear ? g.rate_to_2050 : g.rate_after_2050);
    s.values.push_back(v);
  }
  return s;
}

std::vector<CapacityBuild> newbuild_requirements(const ProductionSeries& p,
                                                 double existing_capacity,
                                                 double utilization,
                                                 double world_scale) {
  if (!(world_scale > 0.0)) throw InputError("world_scale must be > 0");
  if (!(utilization > 0.0 && utilization <= 1.0))
    throw InputError("utilization must lie in (0, 1]");
  std::vector<CapacityBuild> builds;
  long long units = 0;
  for (int y = p.first_year; y <= p.last_year(); ++y) {
    const double demand = p.at(y);
    auto covered = [&](long long n) {
      const double eff =
          (existing_capacity + static_cast<double>(n) * world_scale) * utilization;
      return eff >= demand * (1.0 - 1e-12);
    };
    if (covered(units)) continue;
    long long need = static_cast<long long>(
        std::ceil((demand / utilization - existing_capacity) / world_scale));
    while (need > units && covered(need - 1)) --need;
    while (!covered(need)) ++need;
    for (; units < need; ++units) builds.push_back({y, world_scale});
  }
  return builds;
}

ProductionSeries world_production(std::span<const ProductionSeries> series) {
  if (series.empty()) throw InputError("world_production: no series");
  ProductionSeries out{std::nullopt, series.front().chemical,
                       series.front().first_year, series.front().values};
  for (std::size_t i = 1; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.first_year != out.first_year || s.values.size() != out.values.size())
      throw InputError("world_production: mismatched year ranges");
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] += s.values[k];
  }
  if (series.size() == 1) out.region = series.front().region;
  return out;
}

double GrowthConfig::world_scale_for(Chemical c) const {
  auto it = world_scale.find(c);
  if (it == world_scale.end())
    throw ConfigError("no world-scale capacity for " + std::string(to_string(c)));
  return it->second;
}

Process GrowthConfig::newbuild_process_for(Region r, Chemical c) const {
  auto it = newbuild_process.find({r, c});
  if (it == newbuild_process.end())
    throw ConfigError("no new-build process for " + std::string(to_string(r)) +
                      "/" + std::string(to_string(c)));
  return it->second;
}

GrowthConfig growth_config_from_json(const json& j) {
  json_util::check_keys(j, {"world_scale", "rates", "newbuild_process"},
                        "growth config");
  GrowthConfig g;
  try {
    for (const auto& [chem, v] : j.at("world_scale").items()) {
      if (chem.front() == '_') continue;
      const double ws = v.get<double>();
      if (!(ws > 0.0)) throw ConfigError("world_scale must be > 0 for " + chem);
      g.world_scale[chemical_from(chem)] = ws;
    }
    for (const auto& [reg, chems] : j.at("rates").items()) {
      if (reg.front() == '_') continue;
      const Region r = region_from(reg);
      for (const auto& [chem, jr] : chems.items()) {
        if (chem.front() == '_') continue;
        json_util::check_keys(jr, {"rate_to_2050", "rate_after_2050", "anchor"},
                              "growth rates " + reg + "/" + chem);
        GrowthRates gr;
        gr.rate_to_2050 = jr.at("rate_to_2050").get<double>();
        if (jr.contains("rate_after_2050"))
          gr.rate_after_2050 = jr["rate_after_2050"].get<double>();
        if (jr.contains("anchor")) gr.anchor = jr["anchor"].get<double>();
        g.rates[{r, chemical_from(chem)}] = gr;
      }
    }
    for (const auto& [reg, chems] : j.at("newbuild_process").items()) {
      if (reg.front() == '_') continue;
      const Region r = region_from(reg);
      for (const auto& [chem, p] : chems.items()) {
        if (chem.front() == '_') continue;
        if (p.is_null())
          g.coproduct_only.insert({r, chemical_from(chem)});
        else
          g.newbuild_process[{r, chemical_from(chem)}] = process_from(p.get<std::string>());
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("growth config: ") + e.what());
  }
  return g;
}

json to_json(const GrowthConfig& g) {
  json j;
  j["world_scale"] = json::object();
  for (const auto& [c, v] : g.world_scale) j["world_scale"][std::string(to_string(c))] = v;
  j["rates"] = json::object();
  for (const auto& [k, v] : g.rates) {
    json jr{{"rate_to_2050", v.rate_to_2050}};
    if (v.rate_after_2050) jr["rate_after_2050"] = *v.rate_after_2050;
    if (v.anchor) jr["anchor"] = *v.anchor;
    j["rates"][std::string(to_string(k.first))][std::string(to_string(k.second))] = jr;
  }
  j["newbuild_process"] = json::object();
  for (const auto& [k, p] : g.newbuild_process)
    j["newbuild_process"][std::string(to_string(k.first))]
     [std::string(to_string(k.second))] = to_string(p);
  for (const auto& [r, c] : g.coproduct_only)
    j["newbuild_process"][std::string(to_string(r))][std::string(to_string(c))] = nullptr;
  return j;
}

GrowthConfig default_growth_config() {
  return growth_config_from_json(
      json_util::parse(defaults::text("growth"), "default growth config"));
}

std::vector<RegionalOutlook> build_outlook(const AssetTable& assets,
                                           const GrowthConfig& cfg) {
  std::map<std::pair<Region, Chemical>, std::pair<double, double>> base;
  for (const auto& a : assets.rows) {
    auto& [cap, prod] = base[{a.region, a.chemical}];
    cap += a.capacity;
    prod += a.production();
  }
  std::vector<RegionalOutlook> out;
  for (const auto& [key, cp] : base) {
    RegionalOutlook o{key.first, key.second, cp.first, cp.second, {}, {}, {}};
    double rate = 0.0;
    std::optional<double> after, anchor;
    if (auto it = cfg.rates.find(key); it != cfg.rates.end()) {
      rate = it->second.rate_to_2050;
      after = it->second.rate_after_2050;
      anchor = it->second.anchor;
    }
    o.growth = {anchor.value_or(cp.second), rate, after.value_or(rate / 2.0)};
    o.production = production_series(o.growth, key.first, key.second);
    const double util = cp.first > 0.0 ? cp.second / cp.first : 1.0;
    if (!cfg.coproduct_only.contains(key))
      o.builds = newbuild_requirements(o.production, cp.first, util,
                                       cfg.world_scale_for(key.second));
    out.push_back(std::move(o));
  }
  return out;
}

}  // namespace chemdecarb
