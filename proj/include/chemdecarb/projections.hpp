#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/dataset.hpp"
#include "chemdecarb/types.hpp"

namespace chemdecarb {

inline constexpr int kGrowthBreakYear = 2050;

struct GrowthSchedule {
  double anchor = 0.0;           // t / y in the base year
  double rate_to_2050 = 0.0;     // applied to transitions y -> y+1, y < 2050
  double rate_after_2050 = 0.0;  // applied from 2050 -> 2051 onward
  void validate() const;
};

// Annual production from the base year through the horizon, inclusive.
struct ProductionSeries {
  std::optional<Region> region;  // empty for a cross-region total
  Chemical chemical = Chemical::ethylene;
  int first_year = kBaseYear;
  std::vector<double> values;

  int last_year() const { return first_year + static_cast<int>(values.size()) - 1; }
  double at(int year) const;
};

ProductionSeries production_series(const GrowthSchedule& g, Region region,
                                   Chemical chemical);

struct CapacityBuild {
  int year = 0;
  double capacity = 0.0;  // t / y, always one world-scale unit
  friend bool operator==(const CapacityBuild&, const CapacityBuild&) = default;
};

// Minimal world-scale additions so that (existing + builds) * utilization
// covers production in every year; units are added in the first year of
// each shortfall.
std::vector<CapacityBuild> newbuild_requirements(const ProductionSeries& p,
                                                 double existing_capacity,
                                                 double utilization,
                                                 double world_scale);

// Elementwise sum. Throws InputError on mismatched year ranges.
ProductionSeries world_production(std::span<const ProductionSeries> series);

struct GrowthRates {
  double rate_to_2050 = 0.0;
  std::optional<double> rate_after_2050;  // default: half of rate_to_2050
  std::optional<double> anchor;           // default: base-year production
};

struct GrowthConfig {
  std::map<std::pair<Region, Chemical>, GrowthRates> rates;
  std::map<Chemical, double> world_scale;  // t / y
  std::map<std::pair<Region, Chemical>, Process> newbuild_process;
  // Grown only as a co-product of other units (null process): no builds.
  std::set<std::pair<Region, Chemical>> coproduct_only;

  double world_scale_for(Chemical c) const;
  Process newbuild_process_for(Region r, Chemical c) const;
};

GrowthConfig growth_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GrowthConfig& g);
GrowthConfig default_growth_config();

// Production anchors and growth schedules for every (region, chemical)
// present in the table.
struct RegionalOutlook {
  Region region;
  Chemical chemical;
  double existing_capacity = 0.0;
  double existing_production = 0.0;
  GrowthSchedule growth;
  ProductionSeries production;
  std::vector<CapacityBuild> builds;
};

std::vector<RegionalOutlook> build_outlook(const AssetTable& assets,
                                           const GrowthConfig& cfg);

}  // namespace chemdecarb
