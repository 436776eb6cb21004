#include "chemdecarb/emissions.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "chemdecarb/defaults.hpp"
#include "chemdecarb/json_util.hpp"

namespace chemdecarb {

using nlohmann::json;

std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::scope1_combustion: return "scope1_combustion";
    case Scope::scope1_process: return "scope1_process";
    case Scope::scope2: return "scope2";
    case Scope::scope3_upstream: return "scope3_upstream";
  }
  return "?";
}

std::optional<Scope> parse_scope(std::string_view s) {
  for (Scope k : kScopes)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

double EmissionsBreakdown::get(Scope s) const {
  switch (s) {
    case Scope::scope1_combustion: return scope1_combustion;
    case Scope::scope1_process: return scope1_process;
    case Scope::scope2: return scope2;
    case Scope::scope3_upstream: return scope3_upstream;
  }
  return 0.0;
}

EmissionsBreakdown& EmissionsBreakdown::operator+=(const EmissionsBreakdown& o) {
  scope1_combustion += o.scope1_combustion;
  scope1_process += o.scope1_process;
  scope2 += o.scope2;
  scope3_upstream += o.scope3_upstream;
  co2_stored += o.co2_stored;
  return *this;
}

double EmissionFactors::grid_anchor(Region r) const {
  auto it = grid_ci.find(r);
  if (it == grid_ci.end())
    throw ConfigError("no grid carbon intensity for " + std::string(to_string(r)));
  return it->second;
}

double EmissionFactors::upstream_factor(Feedstock f) const {
  auto it = upstream.find(f);
  return it == upstream.end() ? 0.0 : it->second;
}

EmissionFactors emission_factors_from_json(const json& j) {
  EmissionFactors f;
  try {
    json_util::check_keys(j, {"grid_ci", "upstream"}, "trajectories");
    for (const auto& [k, v] : j.at("grid_ci").items()) {
      if (k.front() == '_') continue;
      const double x = v.get<double>();
      if (x < 0.0) throw ConfigError("trajectories.grid_ci." + k + " must be >= 0");
      f.grid_ci[region_from(k)] = x;
    }
    for (const auto& [k, v] : j.at("upstream").items()) {
      if (k.front() == '_') continue;
      const double x = v.get<double>();
      if (x < 0.0) throw ConfigError("trajectories.upstream." + k + " must be >= 0");
      f.upstream[feedstock_from(k)] = x;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("trajectories: ") + e.what());
  }
  return f;
}

json to_json(const EmissionFactors& f) {
  json g = json::object(), u = json::object();
  for (const auto& [r, v] : f.grid_ci) g[std::string(to_string(r))] = v;
  for (const auto& [k, v] : f.upstream) u[std::string(to_string(k))] = v;
  return {{"grid_ci", g}, {"upstream", u}};
}

EmissionFactors default_emission_factors() {
  return emission_factors_from_json(
      json_util::parse(defaults::text("trajectories"), "default trajectories"));
}

IntensityTrajectory intensity_trajectory(Region r, const ScenarioParams& s,
                                         const EmissionFactors& f) {
  IntensityTrajectory t;
  t.region = r;
  t.scenario = s.id;
  const double anchor = f.grid_anchor(r);
  for (int y = kBaseYear; y <= kHorizonYear; ++y) {
    t.grid_ci.push_back(anchor * s.grid_factor(r, y));
    t.upstream_multiplier.push_back(s.upstream_factor(r, y));
  }
  return t;
}

namespace {

bool overlay_applies(const AssetRecord& a) { return a.process == Process::steam_cracker; }

Feedstock plant_fuel(Process p) { return is_coal_fired(p) ? Feedstock::coal : Feedstock::natural_gas; }

}  // namespace

EmissionsBreakdown asset_intensity(const AssetRecord& asset, int year,
                                   const ScenarioParams* scenario,
                                   const EmissionFactors& factors,
                                   const AbatementState& state) {
  if (year < kBaseYear || year > kHorizonYear)
    throw InputError("emissions year " + std::to_string(year) + " outside " +
                     std::to_string(kBaseYear) + "-" + std::to_string(kHorizonYear));
  const double share =
      scenario && overlay_applies(asset) ? scenario->circular_share(asset.region, year) : 0.0;
  AssetRecord a = asset;
  a.process_co2_intensity *= 1.0 - share;
  a.feedstock_intensity *= 1.0 - share;

  const double grid = factors.grid_anchor(a.region) *
                      (scenario ? scenario->grid_factor(a.region, year) : 1.0);
  const double up = scenario ? scenario->upstream_factor(a.region, year) : 1.0;
  const double fuel_gj = a.fuel_intensity + a.steam_intensity;
  const Feedstock pf = plant_fuel(a.process);

  EmissionsBreakdown e;
  if (state.active(year)) {
    const PerformanceBundle b = option_performance(*state.option, a);
    e.scope1_combustion = b.pre_scope1_combustion - b.abated_combustion + b.added_scope1;
    e.scope1_process = b.pre_scope1_process - b.abated_process;
    e.co2_stored = b.co2_to_storage;
    e.scope2 = state.option->requires_ppa
                   ? 0.0
                   : (a.electricity_intensity + b.delta_electricity) * grid;
    const double feed = a.feedstock_intensity - b.feedstock_displaced;
    e.scope3_upstream = (feed * factors.upstream_factor(a.feedstock_type) +
                         (fuel_gj + b.delta_plant_fuel) * factors.upstream_factor(pf) +
                         b.delta_fuel_gas * factors.upstream_factor(Feedstock::natural_gas)) *
                        up;
  } else {
    e.scope1_combustion = fuel_gj * fuel_emission_factor(a.process);
    e.scope1_process = a.process_co2_intensity;
    e.scope2 = a.electricity_intensity * grid;
    e.scope3_upstream = (a.feedstock_intensity * factors.upstream_factor(a.feedstock_type) +
                         fuel_gj * factors.upstream_factor(pf)) *
                        up;
  }
  // Guard against rounding below zero on fully removed streams.
  e.scope1_combustion = std::max(0.0, e.scope1_combustion);
  e.scope1_process = std::max(0.0, e.scope1_process);
  e.scope2 = std::max(0.0, e.scope2);
  e.scope3_upstream = std::max(0.0, e.scope3_upstream);
  return e;
}

EmissionsBreakdown asset_emissions(const AssetRecord& asset, int year, double production,
                                   const ScenarioParams* scenario,
                                   const EmissionFactors& factors,
                                   const AbatementState& state) {
  if (production < 0.0) throw InputError("production must be >= 0");
  EmissionsBreakdown e = asset_intensity(asset, year, scenario, factors, state);
  e.scope1_combustion *= production;
  e.scope1_process *= production;
  e.scope2 *= production;
  e.scope3_upstream *= production;
  e.co2_stored *= production;
  return e;
}

SeriesTable aggregate(const SeriesTable& table, const GroupBy& by) {
  SeriesTable out;
  for (const auto& [k, s] : table) {
    SeriesKey g;
    if (by.scenario) g.scenario = k.scenario;
    if (by.region) g.region = k.region;
    if (by.chemical) g.chemical = k.chemical;
    if (by.scope) g.scope = k.scope;
    Series& dst = out[g];
    if (dst.empty()) dst.assign(s.size(), 0.0);
    if (dst.size() != s.size()) throw InputError("aggregate: inconsistent year ranges");
    for (std::size_t i = 0; i < s.size(); ++i) dst[i] += s[i];
  }
  return out;
}

double at_year(const Series& s, int year, int first_year) {
  const int i = year - first_year;
  if (i < 0 || i >= static_cast<int>(s.size()))
    throw InputError("year " + std::to_string(year) + " outside series");
  return s[static_cast<std::size_t>(i)];
}

double cumulative(const Series& s, int from, int to, int first_year) {
  if (from > to) throw InputError("cumulative: inverted year range");
  double sum = 0.0;
  for (int y = from; y <= to; ++y) sum += at_year(s, y, first_year);
  return sum;
}

ProductionPlan production_plan(const std::vector<FleetMember>& members,
                               const std::vector<RegionalTarget>& targets) {
  ProductionPlan plan;
  plan.members = members;
  plan.production.assign(members.size(), Series(kSeriesYears, 0.0));
  std::map<std::pair<Region, Chemical>, std::vector<std::size_t>> by_cell;
  for (std::size_t i = 0; i < members.size(); ++i)
    by_cell[{members[i].asset->region, members[i].asset->chemical}].push_back(i);

  std::map<std::pair<Region, Chemical>, const Series*> target_of;
  for (const RegionalTarget& t : targets) {
    if (t.production.size() != static_cast<std::size_t>(kSeriesYears))
      throw InputError("production target must cover the base year to the horizon");
    target_of[{t.region, t.chemical}] = &t.production;
  }

  for (const auto& [cell, idx] : by_cell) {
    auto tg = target_of.find(cell);
    for (int k = 0; k < kSeriesYears; ++k) {
      const int year = kSeriesFirstYear + k;
      double existing = 0.0, fresh = 0.0;
      for (std::size_t i : idx) {
        const FleetMember& m = members[i];
        if (year < m.from_year) continue;
        (m.newbuild ? fresh : existing) += m.asset->production();
      }
      const double want = tg == target_of.end() ? existing + fresh : (*tg->second)[k];
      const double scale_existing = existing > 0.0 ? std::min(1.0, want / existing) : 0.0;
      const double rest = std::max(0.0, want - existing);
      const double scale_new = fresh > 0.0 ? std::min(1.0, rest / fresh) : 0.0;
      for (std::size_t i : idx) {
        const FleetMember& m = members[i];
        if (year < m.from_year) continue;
        plan.production[i][k] =
            m.asset->production() * (m.newbuild ? scale_new : scale_existing);
      }
    }
  }
  return plan;
}

namespace {

void add_to(SeriesTable& t, const SeriesKey& k, int idx, double v) {
  Series& s = t[k];
  if (s.empty()) s.assign(kSeriesYears, 0.0);
  s[static_cast<std::size_t>(idx)] += v;
}

}  // namespace

FleetEmissions fleet_emissions(const ProductionPlan& plan, const ScenarioParams& scenario,
                               const EmissionFactors& factors,
                               const std::map<std::string, AbatementState>& states) {
  FleetEmissions out;
  for (std::size_t i = 0; i < plan.members.size(); ++i) {
    const AssetRecord& a = *plan.members[i].asset;
    auto st = states.find(a.asset_id);
    const AbatementState state = st == states.end() ? AbatementState{} : st->second;
    for (int k = 0; k < kSeriesYears; ++k) {
      const double prod = plan.production[i][k];
      SeriesKey key{scenario.id, a.region, a.chemical, std::nullopt};
      if (prod <= 0.0) {
        // Keep every cell present so downstream tables have full rows.
        for (Scope s : kScopes) {
          key.scope = s;
          add_to(out.emissions, key, k, 0.0);
        }
        key.scope.reset();
        add_to(out.stored, key, k, 0.0);
        continue;
      }
      const EmissionsBreakdown e =
          asset_emissions(a, kSeriesFirstYear + k, prod, &scenario, factors, state);
      for (Scope s : kScopes) {
        key.scope = s;
        add_to(out.emissions, key, k, e.get(s));
      }
      key.scope.reset();
      add_to(out.stored, key, k, e.co2_stored);
    }
  }
  return out;
}

SeriesTable frozen_reference(const AssetTable& assets,
                             const std::vector<RegionalTarget>& targets,
                             const EmissionFactors& factors,
                             const std::string& scenario_label) {
  std::map<std::pair<Region, Chemical>, EmissionsBreakdown> base;
  std::map<std::pair<Region, Chemical>, double> output;
  for (const AssetRecord& a : assets.rows) {
    base[{a.region, a.chemical}] +=
        asset_emissions(a, kBaseYear, a.production(), nullptr, factors);
    output[{a.region, a.chemical}] += a.production();
  }
  SeriesTable out;
  for (const RegionalTarget& t : targets) {
    auto b = base.find({t.region, t.chemical});
    if (b == base.end()) continue;
    const double denom = output[{t.region, t.chemical}];
    for (Scope s : kScopes) {
      const double intensity = denom > 0.0 ? b->second.get(s) / denom : 0.0;
      Series& dst = out[{scenario_label, t.region, t.chemical, s}];
      dst.assign(kSeriesYears, 0.0);
      for (int k = 0; k < kSeriesYears; ++k)
        dst[static_cast<std::size_t>(k)] = intensity * t.production[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace chemdecarb
