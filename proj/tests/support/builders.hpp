#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "chemdecarb/pipeline.hpp"

namespace build {

using namespace chemdecarb;

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(CHEMDECARB_FIXTURE_DIR) / name;
}

inline AssetRecord cracker(const std::string& id, double capacity, Region r = Region::NorthAmerica,
                           GeoPoint at = {29.5, -94.5}) {
  AssetRecord a;
  a.asset_id = id + "-ethylene";
  a.facility_id = id;
  a.owner = "o";
  a.region = r;
  a.latitude = at.latitude;
  a.longitude = at.longitude;
  a.startup_year = 2000;
  a.chemical = Chemical::ethylene;
  a.process = Process::steam_cracker;
  a.capacity = capacity;
  a.utilization = 0.9;
  a.feedstock_type = Feedstock::ethane;
  a.feedstock_intensity = 56.0;
  a.electricity_intensity = 0.2;
  a.steam_intensity = 3.0;
  a.fuel_intensity = 13.5;
  a.process_co2_intensity = 0.0;
  return a;
}

inline AssetRecord ammonia(const std::string& id, double capacity, Region r = Region::NorthAmerica) {
  AssetRecord a = cracker(id, capacity, r);
  a.asset_id = id + "-ammonia";
  a.chemical = Chemical::ammonia;
  a.process = Process::smr_ammonia;
  a.feedstock_type = Feedstock::natural_gas;
  a.feedstock_intensity = 21.0;
  a.electricity_intensity = 0.1;
  a.steam_intensity = 0.0;
  a.fuel_intensity = 9.0;
  a.process_co2_intensity = 1.6;
  return a;
}

inline std::vector<PlanningUnit> units_of(const AssetTable& t) {
  return planning_units(t, group_facilities(t));
}

// Owns the configuration objects a PlanningContext points at.
struct World {
  ModelConfig cfg = default_model_config();
  ScenarioParams scenario = preset("SU");
  PlanningContext ctx() const {
    return {&cfg.catalog, &cfg.finance, &cfg.prices, &cfg.storage, &scenario};
  }
};

// One option without capture, so quotes do not depend on storage state.
inline AbatementOption plain_option(int dev, double ref_capex = 1.0e9) {
  AbatementOption o;
  o.tech_id = TechId::electrified_cracker;
  o.mechanism = Mechanism::electrification;
  o.applicable_chemicals = {Chemical::ethylene};
  o.applicable_processes = {Process::steam_cracker};
  o.earliest_operation_year = 2030;
  o.scope1_abatement_fraction = 0.9;
  o.electricity_per_gj_displaced = 0.1;
  o.reference_capex = ref_capex;
  o.reference_capacity = 1.0e6;
  o.scale_exponent = 0.65;
  o.development_time = dev;
  o.fixed_om_fraction = 0.03;
  return o;
}

inline LearningParams no_learning() {
  LearningParams lp;
  lp.lr_early = 0.0;
  lp.lr_mature = 0.0;
  return lp;
}

// Single plain option, no learning, available from the first online year.
inline World plain_world(int dev, double ref_capex = 1.0e9) {
  World w;
  w.cfg.catalog = Catalog({plain_option(dev, ref_capex)});
  w.scenario.learning = no_learning();
  w.scenario.learning_by_tech.clear();
  w.scenario.ecracker_year = w.scenario.first_online_year;
  return w;
}

inline AssetTable table_of(std::vector<AssetRecord> rows) {
  AssetTable t;
  t.rows = std::move(rows);
  return t;
}

}  // namespace build
