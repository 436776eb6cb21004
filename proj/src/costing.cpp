#include "chemdecarb/costing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "chemdecarb/defaults.hpp"
#include "chemdecarb/json_util.hpp"

namespace chemdecarb {

using nlohmann::json;

void FinanceParams::validate() const {
  if (!(discount_rate > 0.0 && discount_rate < 1.0))
    throw ConfigError("discount_rate must lie in (0, 1)");
  if (asset_life < 1) throw ConfigError("asset_life must be >= 1");
  if (!(logistic_steepness > 0.0)) throw ConfigError("logistic_steepness must be > 0");
}

double RegionPrices::feedstock_price(Feedstock f) const {
  auto it = feedstock.find(f);
  return it == feedstock.end() ? 0.0 : it->second;
}

const RegionPrices& PriceTable::at(Region r) const {
  auto it = regions.find(r);
  if (it == regions.end())
    throw InputError("missing regional prices for " + std::string(to_string(r)));
  return it->second;
}

FinanceParams finance_from_json(const json& j) {
  json_util::check_keys(j, {"discount_rate", "asset_life", "dollar_year", "logistic_steepness"},
                        "finance");
  FinanceParams f;
  try {
    f.discount_rate = j.value("discount_rate", f.discount_rate);
    f.asset_life = j.value("asset_life", f.asset_life);
    f.dollar_year = j.value("dollar_year", f.dollar_year);
    f.logistic_steepness = j.value("logistic_steepness", f.logistic_steepness);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("finance: ") + e.what());
  }
  f.validate();
  return f;
}

json to_json(const FinanceParams& f) {
  return {{"discount_rate", f.discount_rate},
          {"asset_life", f.asset_life},
          {"dollar_year", f.dollar_year},
          {"logistic_steepness", f.logistic_steepness}};
}

FinanceParams default_finance() {
  return finance_from_json(json_util::parse(defaults::text("finance"), "default finance"));
}

PriceTable prices_from_json(const json& j) {
  PriceTable t;
  try {
    json_util::check_keys(j, {"regions"}, "prices");
    for (const auto& [reg, jr] : j.at("regions").items()) {
      if (reg.front() == '_') continue;
      json_util::check_keys(jr,
                            {"gas", "coal", "grid_electricity", "ppa_om",
                             "ppa_capex_per_kw", "ppa_capacity_factor",
                             "location_factor", "feedstock"},
                            "prices." + reg);
      const Region r = region_from(reg);
      RegionPrices p;
      p.gas = jr.at("gas").get<double>();
      p.coal = jr.at("coal").get<double>();
      p.grid_electricity = jr.at("grid_electricity").get<double>();
      p.ppa_om = jr.at("ppa_om").get<double>();
      p.ppa_capex_per_kw = jr.at("ppa_capex_per_kw").get<double>();
      p.ppa_capacity_factor = jr.at("ppa_capacity_factor").get<double>();
      p.location_factor = jr.at("location_factor").get<double>();
      if (jr.contains("feedstock"))
        for (const auto& [f, v] : jr["feedstock"].items()) {
          if (f.front() == '_') continue;
          p.feedstock[feedstock_from(f)] = v.get<double>();
        }
      if (p.location_factor < 0.0)
        throw ConfigError("prices." + reg + ": negative location factor");
      if (r == Region::NorthAmerica && p.location_factor != 1.0)
        throw ConfigError("prices.NorthAmerica: location factor must be exactly 1");
      if (!(p.ppa_capacity_factor > 0.0 && p.ppa_capacity_factor <= 1.0))
        throw ConfigError("prices." + reg + ": ppa_capacity_factor must lie in (0, 1]");
      t.regions[r] = std::move(p);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("prices: ") + e.what());
  }
  return t;
}

PriceTable default_prices() {
  return prices_from_json(json_util::parse(defaults::text("prices"), "default prices"));
}

double crf(double rate, int years) {
  if (years < 1) throw InputError("crf: years must be >= 1");
  if (rate < 0.0) throw InputError("crf: rate must be >= 0");
  if (rate == 0.0) return 1.0 / years;
  const double g = std::pow(1.0 + rate, years);
  return rate * g / (g - 1.0);
}

double scale_capex(double ref_capex, double ref_capacity, double capacity,
                   double exponent) {
  if (!(capacity > 0.0) || !(ref_capacity > 0.0))
    throw InputError("scale_capex: capacities must be > 0");
  if (!(ref_capex > 0.0)) throw InputError("scale_capex: reference capex must be > 0");
  if (!(exponent > 0.0 && exponent <= 1.0))
    throw InputError("scale_capex: exponent must lie in (0, 1]");
  return ref_capex * std::pow(capacity / ref_capacity, exponent);
}

double locate_capex(double capex, Region region, const PriceTable& prices) {
  return capex * prices.at(region).location_factor;
}

double learning_multiplier(int n_prior, const LearningParams& lp) {
  if (n_prior <= 0) return 1.0;
  const double b_early = -std::log2(1.0 - lp.lr_early);
  const double b_mature = -std::log2(1.0 - lp.lr_mature);
  const double units = static_cast<double>(n_prior) + 1.0;
  const double boundary = static_cast<double>(lp.early_phase_count);
  if (units <= boundary) return std::pow(units, -b_early);
  return std::pow(boundary, -b_early) * std::pow(units / boundary, -b_mature);
}

std::vector<double> outlay_profile(double total, int dev_years, double steepness) {
  if (dev_years < 1) throw InputError("outlay_profile: dev_years must be >= 1");
  if (dev_years == 1) return {total};
  const double T = dev_years;
  auto F = [&](double t) { return 1.0 / (1.0 + std::exp(-steepness * (t / T - 0.5))); };
  const double norm = F(T) - F(0.0);
  std::vector<double> out(static_cast<std::size_t>(dev_years));
  double acc = 0.0;
  for (int t = 1; t < dev_years; ++t) {
    out[t - 1] = total * (F(t) - F(t - 1)) / norm;
    acc += out[t - 1];
  }
  out.back() = total - acc;
  return out;
}

double volume_factor(double annual_co2, const TransportParams& tp) {
  if (!(annual_co2 > 0.0)) throw InputError("volume_factor: annual_co2 must be > 0");
  return std::clamp(std::pow(annual_co2 / tp.reference_volume, -0.25), 0.5, 2.0);
}

TsQuote ts_unit_cost(const GeoPoint& from,
                     std::span<const StorageSite* const> sites,
                     double annual_co2, const TransportParams& tp,
                     const StorageUsage* used, double fixed_distance_km) {
  if (sites.empty()) throw InputError("ts_unit_cost: no storage sites");
  const double vf = volume_factor(annual_co2, tp);
  TsQuote best;
  best.unit_cost = std::numeric_limits<double>::infinity();
  for (const StorageSite* s : sites) {
    if (used) {
      auto it = used->find(s->site_id);
      const double committed = it == used->end() ? 0.0 : it->second;
      if (committed + annual_co2 > s->injection_capacity * 1.0e6) continue;
    }
    const double km =
        fixed_distance_km >= 0.0 ? fixed_distance_km : great_circle_km(from, s->location);
    const double cost = s->unit_storage_cost + tp.tariff_per_t_km * km * vf;
    if (cost < best.unit_cost) best = {cost, s, km};
  }
  if (!best.site)
    throw StorageExhausted("all storage sites are at injection capacity");
  return best;
}

double lcoa_from_components(double capex, double crf_value, double fixed_om,
                            double energy_delta, double ts_cost,
                            double abated_scope1) {
  if (!(abated_scope1 > 0.0)) throw InputError("LCOA: abated scope-1 must be > 0");
  return (capex * crf_value + fixed_om + energy_delta + ts_cost) / abated_scope1;
}

CostQuote quote(const QuoteRequest& req) {
  if (!req.option || req.assets.empty() || !req.learning || !req.finance ||
      !req.prices || !req.storage)
    throw InputError("quote: incomplete request");
  const AbatementOption& opt = *req.option;
  const RegionPrices& price = req.prices->at(req.region);

  double capacity = 0.0, abated = 0.0, storage = 0.0, energy = 0.0, ppa_mwh = 0.0;
  for (const AssetRecord* a : req.assets) {
    const PerformanceBundle perf = option_performance(opt, *a);
    const double prod = a->production();
    capacity += a->capacity;
    abated += perf.net_scope1_reduction() * prod;
    storage += perf.co2_to_storage * prod;
    double per_t = perf.delta_fuel_gas * price.gas +
                   perf.delta_plant_fuel * price.fuel_price(a->process) +
                   perf.delta_feedstock_cost -
                   perf.feedstock_displaced * price.feedstock_price(a->feedstock_type);
    if (opt.requires_ppa) {
      per_t += perf.ppa_electricity * price.ppa_om -
               a->electricity_intensity * price.grid_electricity;
      ppa_mwh += perf.ppa_electricity * prod;
    } else {
      per_t += perf.delta_electricity * price.grid_electricity;
    }
    energy += per_t * prod;
  }

  CostQuote q;
  q.learning_multiplier = learning_multiplier(req.n_prior, *req.learning);
  const double tech_capex =
      locate_capex(scale_capex(opt.reference_capex, opt.reference_capacity,
                               capacity, opt.scale_exponent),
                   req.region, *req.prices) *
      q.learning_multiplier;
  if (opt.requires_ppa)
    q.ppa_capex = ppa_mwh / (8760.0 * price.ppa_capacity_factor) * 1000.0 *
                  price.ppa_capex_per_kw;
  q.total_capex = tech_capex + q.ppa_capex;
  q.annual_fixed_om = opt.fixed_om_fraction * tech_capex;
  q.annual_energy_delta_cost = energy;
  q.abated_scope1 = abated;
  q.co2_to_storage = storage;
  q.storage_location = req.location;
  if (storage > 0.0) {
    const auto sites = req.storage->in_region(req.region);
    const double fixed_km =
        req.build == BuildType::newbuild ? req.storage->transport.newbuild_pipeline_km : -1.0;
    const TsQuote ts = ts_unit_cost(req.location, sites, storage,
                                    req.storage->transport, req.storage_used, fixed_km);
    q.ts_unit_cost = ts.unit_cost;
    q.storage_site = ts.site->site_id;
    if (req.build == BuildType::newbuild) q.storage_location = ts.site->location;
    q.annual_ts_cost = ts.unit_cost * storage;
  }
  q.crf = crf(req.finance->discount_rate, req.finance->asset_life);
  if (!(abated > 0.0))
    throw InputError("quote: option " + std::string(to_string(opt.tech_id)) +
                     " abates no scope-1 emissions");
  q.lcoa = lcoa_from_components(q.total_capex, q.crf, q.annual_fixed_om,
                                q.annual_energy_delta_cost, q.annual_ts_cost, abated);
  return q;
}

}  // namespace chemdecarb
