#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/catalog.hpp"
#include "chemdecarb/dataset.hpp"
#include "chemdecarb/scenario.hpp"
#include "chemdecarb/types.hpp"

namespace chemdecarb {

enum class Scope { scope1_combustion, scope1_process, scope2, scope3_upstream };
inline constexpr std::array kScopes{Scope::scope1_combustion, Scope::scope1_process,
                                    Scope::scope2, Scope::scope3_upstream};
std::string_view to_string(Scope s);
std::optional<Scope> parse_scope(std::string_view s);

struct EmissionsBreakdown {
  double scope1_combustion = 0.0;  // tCO2 / y
  double scope1_process = 0.0;
  double scope2 = 0.0;
  double scope3_upstream = 0.0;
  double co2_stored = 0.0;

  double scope1() const { return scope1_combustion + scope1_process; }
  double total() const { return scope1() + scope2 + scope3_upstream; }
  double get(Scope s) const;
  EmissionsBreakdown& operator+=(const EmissionsBreakdown& o);
};

// Base-year anchors that the scenario multipliers scale.
struct EmissionFactors {
  std::map<Region, double> grid_ci;           // tCO2 / MWh
  std::map<Feedstock, double> upstream;      // tCO2 / GJ of feedstock or fuel

  double grid_anchor(Region r) const;         // throws ConfigError if absent
  double upstream_factor(Feedstock f) const;  // 0 when absent
};

EmissionFactors emission_factors_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EmissionFactors& f);
EmissionFactors default_emission_factors();

// Grid CI and upstream multiplier that a scenario implies for one region.
struct IntensityTrajectory {
  Region region = Region::NorthAmerica;
  std::string scenario;
  int first_year = kBaseYear;
  std::vector<double> grid_ci;              // tCO2 / MWh
  std::vector<double> upstream_multiplier;  // fraction of anchor
};

IntensityTrajectory intensity_trajectory(Region r, const ScenarioParams& s,
                                         const EmissionFactors& f);

// An abatement option acting on an asset from online_year onward.
struct AbatementState {
  const AbatementOption* option = nullptr;
  int online_year = 0;

  bool active(int year) const { return option && year >= online_year; }
};

// Emissions of one asset in one year at the given production (t/y). A null
// scenario uses the anchors unchanged and no feedstock overlay. Throws
// InputError for a year outside the base year to horizon.
EmissionsBreakdown asset_emissions(const AssetRecord& asset, int year, double production,
                                   const ScenarioParams* scenario,
                                   const EmissionFactors& factors,
                                   const AbatementState& state = {});

// Per tonne of product.
EmissionsBreakdown asset_intensity(const AssetRecord& asset, int year,
                                   const ScenarioParams* scenario,
                                   const EmissionFactors& factors,
                                   const AbatementState& state = {});

// ---------------------------------------------------------------------------
// Series tables

inline constexpr int kSeriesFirstYear = kBaseYear;
inline constexpr int kSeriesYears = kHorizonYear - kBaseYear + 1;

using Series = std::vector<double>;  // kSeriesFirstYear .. kHorizonYear

struct SeriesKey {
  std::optional<std::string> scenario;
  std::optional<Region> region;
  std::optional<Chemical> chemical;
  std::optional<Scope> scope;
  friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
};

using SeriesTable = std::map<SeriesKey, Series>;

struct GroupBy {
  bool scenario = false;
  bool region = false;
  bool chemical = false;
  bool scope = false;
};

// Grouped elementwise sums; keys not grouped on are dropped.
SeriesTable aggregate(const SeriesTable& table, const GroupBy& by);

// Inclusive sum over [from, to]. Throws InputError for an inverted range or
// one outside the series.
double cumulative(const Series& s, int from, int to, int first_year = kSeriesFirstYear);

double at_year(const Series& s, int year, int first_year = kSeriesFirstYear);

// Per-asset production paths. Existing assets run at base-year output
// (scaled down if the regional series shrinks below it); new builds share
// the remainder of the series in proportion to their rated output once
// their demand year arrives.
struct FleetMember {
  const AssetRecord* asset = nullptr;
  int from_year = kBaseYear;  // first year of operation
  bool newbuild = false;
};

struct ProductionPlan {
  std::vector<FleetMember> members;
  std::vector<Series> production;  // per member, t / y
};

struct RegionalTarget {
  Region region;
  Chemical chemical;
  Series production;  // t / y
};

ProductionPlan production_plan(const std::vector<FleetMember>& members,
                               const std::vector<RegionalTarget>& targets);

// Emissions of a fleet under a scenario and per-asset abatement states.
// The result is keyed by (scenario, region, chemical, scope); co2 stored is
// returned separately per (scenario, region, chemical).
struct FleetEmissions {
  SeriesTable emissions;
  SeriesTable stored;
};

FleetEmissions fleet_emissions(const ProductionPlan& plan, const ScenarioParams& scenario,
                               const EmissionFactors& factors,
                               const std::map<std::string, AbatementState>& states);

// 2023 intensity x production path per (region, chemical), by scope.
// `scenario_label` fills the scenario key.
SeriesTable frozen_reference(const AssetTable& assets,
                             const std::vector<RegionalTarget>& targets,
                             const EmissionFactors& factors,
                             const std::string& scenario_label = "REF");

}  // namespace chemdecarb
