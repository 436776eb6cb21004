#include "chemdecarb/catalog.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "chemdecarb/defaults.hpp"
#include "chemdecarb/json_util.hpp"
#include "chemdecarb/scenario.hpp"

namespace chemdecarb {

using nlohmann::json;

namespace {

std::string_view mechanism_name(Mechanism m) {
  switch (m) {
    case Mechanism::ccs: return "ccs";
    case Mechanism::h2_fuel_switch: return "h2_fuel_switch";
    case Mechanism::electrification: return "electrification";
    case Mechanism::syngas_substitution: return "syngas_substitution";
    case Mechanism::ccu: return "ccu";
    case Mechanism::feedstock_overlay: return "feedstock_overlay";
  }
  return "?";
}

Mechanism mechanism_from(std::string_view s) {
  for (auto m : {Mechanism::ccs, Mechanism::h2_fuel_switch,
                 Mechanism::electrification, Mechanism::syngas_substitution,
                 Mechanism::ccu, Mechanism::feedstock_overlay})
    if (mechanism_name(m) == s) return m;
  throw ConfigError("unknown mechanism '" + std::string(s) + "'");
}

}  // namespace

void AbatementOption::validate() const {
  const std::string who = "option " + std::string(to_string(tech_id)) + ": ";
  auto frac = [](double f) { return f >= 0.0 && f <= 1.0; };
  if (!frac(scope1_abatement_fraction) || !frac(capture_fraction) ||
      !frac(process_capture_fraction) || !frac(feedstock_displacement) ||
      !frac(feedstock_displacement + process_feedstock_displacement))
    throw ConfigError(who + "fractions must lie in [0, 1]");
  if (development_time < 3 || development_time > 7)
    throw ConfigError(who + "development_time must lie in [3, 7]");
  if (!(reference_capex > 0.0) || !(reference_capacity > 0.0))
    throw ConfigError(who + "reference capex and capacity must be > 0");
  if (!(scale_exponent > 0.0 && scale_exponent <= 1.0))
    throw ConfigError(who + "scale_exponent must lie in (0, 1]");
  if (!retrofit_allowed && !newbuild_allowed)
    throw ConfigError(who + "must allow retrofit or new-build");
  if (!(fixed_om_fraction >= 0.0) || !(regen_duty_gj_per_tco2 >= 0.0) ||
      !(fuel_gas_multiplier >= 0.0) || !(electricity_per_tco2_process_abated >= 0.0))
    throw ConfigError(who + "negative cost/performance parameter");
}

std::vector<const StorageSite*> StorageNetwork::in_region(Region r) const {
  std::vector<const StorageSite*> out;
  for (const auto& s : sites)
    if (s.region == r) out.push_back(&s);
  return out;
}

Catalog::Catalog(std::vector<AbatementOption> options)
    : options_(std::move(options)) {
  std::set<TechId> seen;
  for (const auto& o : options_) {
    o.validate();
    if (!seen.insert(o.tech_id).second)
      throw ConfigError("duplicate catalog entry " +
                        std::string(to_string(o.tech_id)));
  }
}

const AbatementOption& Catalog::get(TechId id) const {
  for (const auto& o : options_)
    if (o.tech_id == id) return o;
  throw ConfigError("catalog has no option " + std::string(to_string(id)));
}

bool Catalog::contains(TechId id) const {
  return std::any_of(options_.begin(), options_.end(),
                     [&](const auto& o) { return o.tech_id == id; });
}

Catalog catalog_from_json(const json& j) {
  std::vector<AbatementOption> opts;
  try {
    const json& list = j.is_object() ? j.at("options") : j;
    if (j.is_object()) json_util::check_keys(j, {"options"}, "catalog");
    for (const auto& jo : list) {
      json_util::check_keys(
          jo,
          {"tech_id", "mechanism", "applicable_chemicals",
           "applicable_processes", "retrofit_allowed", "newbuild_allowed",
           "earliest_operation_year", "scope1_abatement_fraction",
           "capture_fraction", "process_capture_fraction",
           "process_stream_high_purity", "regen_duty_gj_per_tco2",
           "fuel_gas_multiplier", "electricity_per_gj_displaced",
           "electricity_per_tco2_stored", "delta_electricity",
           "feedstock_displacement", "delta_feedstock_cost", "requires_ppa",
           "newbuild_only_chemicals", "process_feedstock_displacement",
           "electricity_per_tco2_process_abated",
           "reference_capex", "reference_capacity", "scale_exponent",
           "development_time", "fixed_om_fraction"},
          "catalog option");
      AbatementOption o;
      o.tech_id = tech_from(jo.at("tech_id").get<std::string>());
      o.mechanism = mechanism_from(jo.at("mechanism").get<std::string>());
      for (const auto& c : jo.at("applicable_chemicals"))
        o.applicable_chemicals.insert(chemical_from(c.get<std::string>()));
      for (const auto& p : jo.at("applicable_processes"))
        o.applicable_processes.insert(process_from(p.get<std::string>()));
      o.retrofit_allowed = jo.value("retrofit_allowed", true);
      o.newbuild_allowed = jo.value("newbuild_allowed", true);
      if (jo.contains("newbuild_only_chemicals"))
        for (const auto& c : jo["newbuild_only_chemicals"])
          o.newbuild_only_chemicals.insert(chemical_from(c.get<std::string>()));
      o.earliest_operation_year = jo.value("earliest_operation_year", 2030);
      o.scope1_abatement_fraction = jo.value("scope1_abatement_fraction", 0.0);
      o.capture_fraction = jo.value("capture_fraction", 0.0);
      o.process_capture_fraction = jo.value("process_capture_fraction", 0.0);
      o.process_stream_high_purity = jo.value("process_stream_high_purity", false);
      o.regen_duty_gj_per_tco2 = jo.value("regen_duty_gj_per_tco2", 0.0);
      o.fuel_gas_multiplier = jo.value("fuel_gas_multiplier", 1.0);
      o.electricity_per_gj_displaced = jo.value("electricity_per_gj_displaced", 0.0);
      o.electricity_per_tco2_stored = jo.value("electricity_per_tco2_stored", 0.0);
      o.delta_electricity = jo.value("delta_electricity", 0.0);
      o.feedstock_displacement = jo.value("feedstock_displacement", 0.0);
      o.delta_feedstock_cost = jo.value("delta_feedstock_cost", 0.0);
      o.process_feedstock_displacement = jo.value("process_feedstock_displacement", 0.0);
      o.electricity_per_tco2_process_abated =
          jo.value("electricity_per_tco2_process_abated", 0.0);
      o.requires_ppa = jo.value("requires_ppa", false);
      o.reference_capex = jo.at("reference_capex").get<double>();
      o.reference_capacity = jo.at("reference_capacity").get<double>();
      o.scale_exponent = jo.value("scale_exponent", 0.65);
      o.development_time = jo.at("development_time").get<int>();
      o.fixed_om_fraction = jo.value("fixed_om_fraction", 0.03);
      opts.push_back(std::move(o));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("catalog: ") + e.what());
  }
  return Catalog(std::move(opts));
}

json to_json(const Catalog& c) {
  json list = json::array();
  for (const auto& o : c.options()) {
    json chems = json::array(), procs = json::array(), nb_only = json::array();
    for (auto ch : o.applicable_chemicals) chems.push_back(to_string(ch));
    for (auto ch : o.newbuild_only_chemicals) nb_only.push_back(to_string(ch));
    for (auto p : o.applicable_processes) procs.push_back(to_string(p));
    list.push_back({{"tech_id", to_string(o.tech_id)},
                    {"mechanism", mechanism_name(o.mechanism)},
                    {"applicable_chemicals", chems},
                    {"applicable_processes", procs},
                    {"retrofit_allowed", o.retrofit_allowed},
                    {"newbuild_allowed", o.newbuild_allowed},
                    {"newbuild_only_chemicals", nb_only},
                    {"earliest_operation_year", o.earliest_operation_year},
                    {"scope1_abatement_fraction", o.scope1_abatement_fraction},
                    {"capture_fraction", o.capture_fraction},
                    {"process_capture_fraction", o.process_capture_fraction},
                    {"process_stream_high_purity", o.process_stream_high_purity},
                    {"regen_duty_gj_per_tco2", o.regen_duty_gj_per_tco2},
                    {"fuel_gas_multiplier", o.fuel_gas_multiplier},
                    {"electricity_per_gj_displaced", o.electricity_per_gj_displaced},
                    {"electricity_per_tco2_stored", o.electricity_per_tco2_stored},
                    {"delta_electricity", o.delta_electricity},
                    {"feedstock_displacement", o.feedstock_displacement},
                    {"delta_feedstock_cost", o.delta_feedstock_cost},
                    {"process_feedstock_displacement", o.process_feedstock_displacement},
                    {"electricity_per_tco2_process_abated",
                     o.electricity_per_tco2_process_abated},
                    {"requires_ppa", o.requires_ppa},
                    {"reference_capex", o.reference_capex},
                    {"reference_capacity", o.reference_capacity},
                    {"scale_exponent", o.scale_exponent},
                    {"development_time", o.development_time},
                    {"fixed_om_fraction", o.fixed_om_fraction}});
  }
  return {{"options", list}};
}

Catalog default_catalog() {
  return catalog_from_json(
      json_util::parse(defaults::text("catalog"), "default catalog"));
}

StorageNetwork storage_from_json(const json& j) {
  StorageNetwork net;
  try {
    json_util::check_keys(j, {"transport", "sites"}, "storage config");
    if (j.contains("transport")) {
      const auto& t = j["transport"];
      json_util::check_keys(t,
                            {"tariff_per_t_km", "reference_volume",
                             "newbuild_pipeline_km"},
                            "transport");
      net.transport.tariff_per_t_km = t.value("tariff_per_t_km", 0.02);
      net.transport.reference_volume = t.value("reference_volume", 1.0e6);
      net.transport.newbuild_pipeline_km = t.value("newbuild_pipeline_km", 50.0);
      if (!(net.transport.tariff_per_t_km >= 0.0) ||
          !(net.transport.reference_volume > 0.0) ||
          !(net.transport.newbuild_pipeline_km >= 0.0))
        throw ConfigError("transport parameters out of range");
    }
    for (const auto& [reg, list] : j.at("sites").items()) {
      if (reg.front() == '_') continue;
      const Region r = region_from(reg);
      for (const auto& js : list) {
        json_util::check_keys(js,
                              {"site_id", "latitude", "longitude",
                               "unit_storage_cost", "injection_capacity"},
                              "storage site");
        StorageSite s;
        s.site_id = js.at("site_id").get<std::string>();
        s.region = r;
        s.location = {js.at("latitude").get<double>(),
                      js.at("longitude").get<double>()};
        s.unit_storage_cost = js.at("unit_storage_cost").get<double>();
        s.injection_capacity = js.at("injection_capacity").get<double>();
        if (!s.location.valid() || !(s.unit_storage_cost >= 0.0) ||
            !(s.injection_capacity > 0.0))
          throw ConfigError("storage site " + s.site_id + ": invalid values");
        net.sites.push_back(std::move(s));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("storage config: ") + e.what());
  }
  return net;
}

StorageNetwork default_storage() {
  return storage_from_json(
      json_util::parse(defaults::text("storage_sites"), "default storage"));
}

double fuel_emission_factor(Process p) {
  return is_coal_fired(p) ? kCoalEmissionFactor : kGasEmissionFactor;
}

bool option_applies(const AbatementOption& opt, const AssetRecord& asset,
                    BuildType build, int year, const ScenarioParams* scenario) {
  if (opt.overlay()) return false;
  if (!opt.applicable_chemicals.contains(asset.chemical)) return false;
  if (!opt.applicable_processes.contains(asset.process)) return false;
  if (build == BuildType::retrofit && !opt.retrofit_allowed) return false;
  if (build == BuildType::newbuild && !opt.newbuild_allowed) return false;
  if (build == BuildType::retrofit && opt.newbuild_only_chemicals.contains(asset.chemical))
    return false;
  int earliest = opt.earliest_operation_year;
  if (scenario && opt.tech_id == TechId::electrified_cracker)
    earliest = scenario->ecracker_year;
  return year >= earliest;
}

std::vector<const AbatementOption*> applicable_options(
    const Catalog& catalog, const AssetRecord& asset, BuildType build, int year,
    const ScenarioParams* scenario) {
  std::vector<const AbatementOption*> out;
  for (const auto& o : catalog.options())
    if (option_applies(o, asset, build, year, scenario)) out.push_back(&o);
  return out;
}

PerformanceBundle option_performance(const AbatementOption& opt,
                                     const AssetRecord& asset) {
  if (opt.overlay() || !opt.applicable_chemicals.contains(asset.chemical) ||
      !opt.applicable_processes.contains(asset.process))
    throw InputError("option " + std::string(to_string(opt.tech_id)) +
                     " does not apply to asset " + asset.asset_id);

  PerformanceBundle b;
  const double fuel_gj = asset.fuel_intensity + asset.steam_intensity;
  b.pre_scope1_combustion = fuel_gj * fuel_emission_factor(asset.process);
  b.pre_scope1_process = asset.process_co2_intensity;

  switch (opt.mechanism) {
    case Mechanism::ccs: {
      b.abated_combustion = opt.capture_fraction * b.pre_scope1_combustion;
      b.abated_process = opt.process_capture_fraction * b.pre_scope1_process;
      // Solvent regeneration serves the low-purity captured streams only.
      const double solvent_load =
          b.abated_combustion +
          (opt.process_stream_high_purity ? 0.0 : b.abated_process);
      b.delta_fuel_gas = opt.regen_duty_gj_per_tco2 * solvent_load;
      const double regen_co2 = b.delta_fuel_gas * kGasEmissionFactor;
      b.captured_added = opt.capture_fraction * regen_co2;
      b.added_scope1 = regen_co2 - b.captured_added;
      b.co2_to_storage = b.abated_combustion + b.abated_process + b.captured_added;
      break;
    }
    case Mechanism::h2_fuel_switch: {
      const double displaced = opt.scope1_abatement_fraction * fuel_gj;
      b.abated_combustion = opt.scope1_abatement_fraction * b.pre_scope1_combustion;
      b.abated_process = opt.process_capture_fraction * b.pre_scope1_process;
      b.delta_plant_fuel = -displaced;
      b.delta_fuel_gas = opt.fuel_gas_multiplier * displaced;
      const double reformer_co2 = b.delta_fuel_gas * kGasEmissionFactor;
      b.captured_added = opt.capture_fraction * reformer_co2;
      b.added_scope1 = reformer_co2 - b.captured_added;
      b.co2_to_storage = b.captured_added + b.abated_process;
      break;
    }
    case Mechanism::electrification:
    case Mechanism::ccu: {
      const double displaced = opt.scope1_abatement_fraction * fuel_gj;
      b.abated_combustion = opt.scope1_abatement_fraction * b.pre_scope1_combustion;
      b.abated_process = opt.process_capture_fraction * b.pre_scope1_process;
      b.delta_plant_fuel = -displaced;
      b.delta_electricity = opt.electricity_per_gj_displaced * displaced +
                            opt.electricity_per_tco2_process_abated * b.abated_process;
      break;
    }
    case Mechanism::syngas_substitution: {
      b.abated_combustion = opt.scope1_abatement_fraction * b.pre_scope1_combustion;
      b.abated_process = opt.scope1_abatement_fraction * b.pre_scope1_process;
      break;
    }
    case Mechanism::feedstock_overlay: break;
  }
  b.delta_electricity += opt.delta_electricity +
                         opt.electricity_per_tco2_stored * b.co2_to_storage;
  b.feedstock_displaced = opt.feedstock_displacement * asset.feedstock_intensity;
  if (b.pre_scope1_process > 0.0)
    b.feedstock_displaced += opt.process_feedstock_displacement * asset.feedstock_intensity;
  b.delta_feedstock_cost = opt.delta_feedstock_cost;
  if (opt.requires_ppa)
    b.ppa_electricity = asset.electricity_intensity + b.delta_electricity;
  return b;
}

}  // namespace chemdecarb
