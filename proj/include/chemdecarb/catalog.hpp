#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/dataset.hpp"
#include "chemdecarb/types.hpp"

namespace chemdecarb {

struct ScenarioParams;

// How an option changes a plant's carbon and energy balance.
enum class Mechanism {
  ccs,                // capture on combustion (+ optionally process) streams
  h2_fuel_switch,     // furnace fuel replaced by H2 from reforming with CCS
  electrification,    // PPA-backed electricity replaces fuel (e-cracker,
                      // green H2)
  syngas_substitution,
  ccu,
  feedstock_overlay   // scenario-ramped share; never a least-cost project
};

struct AbatementOption {
  TechId tech_id = TechId::ccs_postcombustion;
  Mechanism mechanism = Mechanism::ccs;
  std::set<Chemical> applicable_chemicals;
  std::set<Process> applicable_processes;
  bool retrofit_allowed = true;
  bool newbuild_allowed = true;
  std::set<Chemical> newbuild_only_chemicals;  // retrofits excluded for these
  int earliest_operation_year = 2030;

  // Performance. Fractions are of the pre-abatement stream they act on.
  double scope1_abatement_fraction = 0.0;  // combustion stream, non-CCS
  double capture_fraction = 0.0;           // low-purity streams (CCS family)
  double process_capture_fraction = 0.0;   // process CO2 stream
  bool process_stream_high_purity = false; // process capture needs no solvent
  double regen_duty_gj_per_tco2 = 0.0;     // cogeneration gas per t captured
  double fuel_gas_multiplier = 1.0;        // reformer gas per GJ fuel replaced
  double electricity_per_gj_displaced = 0.0;  // MWh / GJ
  double electricity_per_tco2_stored = 0.0;   // MWh / t
  double delta_electricity = 0.0;             // MWh / t product, fixed part
  double feedstock_displacement = 0.0;        // fraction of feedstock replaced
  // Process-stream replacement (green H2 in place of reforming): feedstock
  // share displaced and electricity per t process CO2 avoided. Both act only
  // on assets that emit process CO2.
  double process_feedstock_displacement = 0.0;
  double electricity_per_tco2_process_abated = 0.0;  // MWh / t
  double delta_feedstock_cost = 0.0;          // $ / t product
  bool requires_ppa = false;

  // Cost.
  double reference_capex = 0.0;     // $ at reference_capacity
  double reference_capacity = 0.0;  // t product / y
  double scale_exponent = 0.65;
  int development_time = 5;         // years
  double fixed_om_fraction = 0.03;  // of capex per year

  bool overlay() const { return mechanism == Mechanism::feedstock_overlay; }
  void validate() const;
};

struct StorageSite {
  std::string site_id;
  Region region = Region::NorthAmerica;
  GeoPoint location;
  double unit_storage_cost = 0.0;  // $ / tCO2
  double injection_capacity = 0.0; // MtCO2 / y
};

struct TransportParams {
  double tariff_per_t_km = 0.02;    // $ / (tCO2 km)
  double reference_volume = 1.0e6;  // tCO2 / y
  double newbuild_pipeline_km = 50.0;
};

struct StorageNetwork {
  TransportParams transport;
  std::vector<StorageSite> sites;

  std::vector<const StorageSite*> in_region(Region r) const;
};

class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<AbatementOption> options);

  const std::vector<AbatementOption>& options() const { return options_; }
  const AbatementOption& get(TechId id) const;
  bool contains(TechId id) const;

 private:
  std::vector<AbatementOption> options_;
};

Catalog catalog_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Catalog& c);
Catalog default_catalog();

StorageNetwork storage_from_json(const nlohmann::json& j);
StorageNetwork default_storage();

// Combustion emission factor of a plant's incumbent fuel (tCO2/GJ).
inline constexpr double kGasEmissionFactor = 0.0561;
inline constexpr double kCoalEmissionFactor = 0.0946;
double fuel_emission_factor(Process p);

// Options that may be deployed on `asset` as `build` in `year`. Feedstock
// overlays are excluded; electrified crackers follow the scenario's
// availability year when a scenario is supplied.
std::vector<const AbatementOption*> applicable_options(
    const Catalog& catalog, const AssetRecord& asset, BuildType build, int year,
    const ScenarioParams* scenario = nullptr);

bool option_applies(const AbatementOption& opt, const AssetRecord& asset,
                    BuildType build, int year,
                    const ScenarioParams* scenario = nullptr);

// Per-tonne-product effect of an option on one asset.
struct PerformanceBundle {
  double pre_scope1_combustion = 0.0;  // tCO2 / t
  double pre_scope1_process = 0.0;
  double abated_combustion = 0.0;      // removed from the incumbent streams
  double abated_process = 0.0;
  double added_scope1 = 0.0;           // uncaptured CO2 from added gas use
  double captured_added = 0.0;         // captured CO2 from added gas use
  double co2_to_storage = 0.0;
  double delta_electricity = 0.0;      // MWh / t
  double ppa_electricity = 0.0;        // MWh / t supplied by the PPA
  double delta_fuel_gas = 0.0;         // GJ natural gas / t (added gas)
  double delta_plant_fuel = 0.0;       // GJ incumbent fuel / t (<= 0)
  double feedstock_displaced = 0.0;    // GJ / t
  double delta_feedstock_cost = 0.0;   // $ / t

  double abated_scope1() const { return abated_combustion + abated_process; }
  double net_scope1_reduction() const { return abated_scope1() - added_scope1; }
};

// Throws InputError for an option that cannot act on the asset's process
// or chemical, or for a feedstock overlay.
PerformanceBundle option_performance(const AbatementOption& opt,
                                     const AssetRecord& asset);

}  // namespace chemdecarb
