#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/catalog.hpp"
#include "chemdecarb/dataset.hpp"
#include "chemdecarb/scenario.hpp"
#include "chemdecarb/types.hpp"

namespace chemdecarb {

struct FinanceParams {
  double discount_rate = 0.08;  // real, per year
  int asset_life = 20;          // years
  int dollar_year = 2024;
  double logistic_steepness = 6.0;

  void validate() const;
};

struct RegionPrices {
  double gas = 0.0;                // $ / GJ
  double coal = 0.0;               // $ / GJ
  double grid_electricity = 0.0;   // $ / MWh
  double ppa_om = 0.0;             // $ / MWh of PPA generation
  double ppa_capex_per_kw = 0.0;   // $ / kW of contracted generator
  double ppa_capacity_factor = 0.3;
  double location_factor = 1.0;    // capex multiplier relative to NorthAmerica
  std::map<Feedstock, double> feedstock;  // $ / GJ

  double fuel_price(Process p) const { return is_coal_fired(p) ? coal : gas; }
  double feedstock_price(Feedstock f) const;
};

struct PriceTable {
  std::map<Region, RegionPrices> regions;
  const RegionPrices& at(Region r) const;  // throws InputError if missing
};

FinanceParams finance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FinanceParams& f);
FinanceParams default_finance();

// Throws ConfigError for a negative location factor or NorthAmerica != 1.
PriceTable prices_from_json(const nlohmann::json& j);
PriceTable default_prices();

// Capital recovery factor; 1/n when r == 0.
double crf(double rate, int years);

double scale_capex(double ref_capex, double ref_capacity, double capacity,
                   double exponent);

double locate_capex(double capex, Region region, const PriceTable& prices);

// Continuous piecewise power law in (n_prior + 1): early-mover exponent up to
// early_phase_count units, mature exponent beyond. Exactly 1 for n_prior 0.
double learning_multiplier(int n_prior, const LearningParams& lp);

// Annual outlays over dev_years following a normalized logistic cumulative
// shape. The final element absorbs rounding so the sum equals total.
std::vector<double> outlay_profile(double total, int dev_years, double steepness);

// Committed injection per site id (tCO2/y); absent = untouched.
using StorageUsage = std::map<std::string, double>;

struct TsQuote {
  double unit_cost = 0.0;  // $ / tCO2
  const StorageSite* site = nullptr;
  double distance_km = 0.0;
};

double volume_factor(double annual_co2, const TransportParams& tp);

// Cheapest reachable site for `annual_co2` tCO2/y shipped from `from`.
// `fixed_distance_km`, when >= 0, replaces the great-circle distance (used
// for new builds placed next to the chosen site). Throws StorageExhausted
// if no site has headroom.
TsQuote ts_unit_cost(const GeoPoint& from,
                     std::span<const StorageSite* const> sites,
                     double annual_co2, const TransportParams& tp,
                     const StorageUsage* used = nullptr,
                     double fixed_distance_km = -1.0);

struct CostQuote {
  double total_capex = 0.0;       // $, technology + PPA generator
  double ppa_capex = 0.0;         // $
  double learning_multiplier = 1.0;
  double annual_fixed_om = 0.0;   // $ / y
  double annual_energy_delta_cost = 0.0;  // $ / y
  double annual_ts_cost = 0.0;    // $ / y
  double abated_scope1 = 0.0;     // tCO2 / y, net of added-gas residuals
  double co2_to_storage = 0.0;    // tCO2 / y
  double ts_unit_cost = 0.0;      // $ / tCO2
  std::string storage_site;
  GeoPoint storage_location;
  double crf = 0.0;
  double lcoa = 0.0;              // $ / tCO2 abated
};

double lcoa_from_components(double capex, double crf_value, double fixed_om,
                            double energy_delta, double ts_cost,
                            double abated_scope1);

// One abatement project on the assets of one facility (members share the
// process family). `location` is where CO2 leaves the site.
struct QuoteRequest {
  const AbatementOption* option = nullptr;
  std::vector<const AssetRecord*> assets;
  Region region = Region::NorthAmerica;
  GeoPoint location;
  BuildType build = BuildType::retrofit;
  int n_prior = 0;
  const LearningParams* learning = nullptr;
  const FinanceParams* finance = nullptr;
  const PriceTable* prices = nullptr;
  const StorageNetwork* storage = nullptr;
  const StorageUsage* storage_used = nullptr;
};

// Throws InputError for zero abatement or missing regional prices, and
// StorageExhausted when capture has nowhere to go.
CostQuote quote(const QuoteRequest& req);

}  // namespace chemdecarb
