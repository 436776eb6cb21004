#include "chemdecarb/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "chemdecarb/csv.hpp"
#include "chemdecarb/defaults.hpp"
#include "chemdecarb/json_util.hpp"

namespace chemdecarb {

namespace fs = std::filesystem;
using nlohmann::json;
using csv::format_double;

ModelConfig default_model_config() {
  return {default_catalog(), default_finance(),         default_prices(),
          default_storage(), default_growth_config(), default_emission_factors()};
}

namespace {

struct Template {
  double capacity = 0.0;
  double utilization = 0.0;
  double feedstock = 0.0, electricity = 0.0, steam = 0.0, fuel = 0.0, process = 0.0;
  std::map<Feedstock, double> feed_types;
  double lat = 0.0, lon = 0.0;

  void add(const AssetRecord& a) {
    const double w = a.capacity;
    capacity += w;
    utilization += w * a.utilization;
    feedstock += w * a.feedstock_intensity;
    electricity += w * a.electricity_intensity;
    steam += w * a.steam_intensity;
    fuel += w * a.fuel_intensity;
    process += w * a.process_co2_intensity;
    feed_types[a.feedstock_type] += w;
    lat += w * a.latitude;
    lon += w * a.longitude;
  }
};

}  // namespace

NewbuildFleet newbuild_fleet(const AssetTable& existing,
                             const std::vector<RegionalOutlook>& outlook,
                             const GrowthConfig& growth) {
  std::map<std::tuple<Region, Chemical, Process>, Template> by_region;
  std::map<std::pair<Chemical, Process>, Template> any_region;
  std::map<Region, Template> centroid;
  for (const AssetRecord& a : existing.rows) {
    by_region[{a.region, a.chemical, a.process}].add(a);
    any_region[{a.chemical, a.process}].add(a);
    centroid[a.region].add(a);
  }

  NewbuildFleet fleet;
  for (const RegionalOutlook& o : outlook) {
    if (o.builds.empty()) continue;
    const Process proc = growth.newbuild_process_for(o.region, o.chemical);
    const Template* t = nullptr;
    if (auto it = by_region.find({o.region, o.chemical, proc}); it != by_region.end())
      t = &it->second;
    else if (auto jt = any_region.find({o.chemical, proc}); jt != any_region.end())
      t = &jt->second;
    if (!t) {
      fleet.untemplated.emplace_back(o.region, o.chemical);
      continue;
    }
    const Template& c = centroid.at(o.region);
    Feedstock feed = t->feed_types.begin()->first;
    double best = -1.0;
    for (const auto& [f, w] : t->feed_types)
      if (w > best) best = w, feed = f;

    int k = 0;
    for (const CapacityBuild& b : o.builds) {
      char id[96];
      std::snprintf(id, sizeof id, "NB-%s-%s-%03d", region_code(o.region).data(),
                    std::string(to_string(o.chemical)).c_str(), ++k);
      AssetRecord a;
      a.facility_id = id;
      a.asset_id = std::string(id) + "-" + std::string(to_string(o.chemical));
      a.owner = "newbuild";
      a.region = o.region;
      a.latitude = c.lat / c.capacity;
      a.longitude = c.lon / c.capacity;
      a.startup_year = b.year;
      a.chemical = o.chemical;
      a.process = proc;
      a.capacity = b.capacity;
      a.utilization = o.existing_capacity > 0.0 ? o.existing_production / o.existing_capacity
                                                : t->utilization / t->capacity;
      a.feedstock_type = feed;
      a.feedstock_intensity = t->feedstock / t->capacity;
      a.electricity_intensity = t->electricity / t->capacity;
      a.steam_intensity = t->steam / t->capacity;
      a.fuel_intensity = t->fuel / t->capacity;
      a.process_co2_intensity = t->process / t->capacity;
      fleet.assets.rows.push_back(std::move(a));
      fleet.demand_year.push_back(b.year);
    }
  }
  return fleet;
}

std::vector<RegionalTarget> production_targets(const std::vector<RegionalOutlook>& outlook) {
  std::vector<RegionalTarget> out;
  for (const RegionalOutlook& o : outlook) {
    RegionalTarget t{o.region, o.chemical, Series(kSeriesYears, 0.0)};
    for (int y = kSeriesFirstYear; y <= kHorizonYear; ++y)
      t.production[static_cast<std::size_t>(y - kSeriesFirstYear)] = o.production.at(y);
    out.push_back(std::move(t));
  }
  return out;
}

ModelRun run_model(const AssetTable& assets, const ModelConfig& cfg,
                   const std::vector<ScenarioParams>& scenarios, const RunOptions& opts) {
  ModelRun run;
  run.existing = assets;
  const std::vector<Facility> facilities = group_facilities(run.existing);
  run.outlook = build_outlook(run.existing, cfg.growth);
  if (opts.newbuilds) run.newbuilds = newbuild_fleet(run.existing, run.outlook, cfg.growth);

  std::vector<PlanningUnit> units = planning_units(run.existing, facilities);
  std::vector<FleetMember> members;
  for (const AssetRecord& a : run.existing.rows) members.push_back({&a, kBaseYear, false});
  for (std::size_t i = 0; i < run.newbuilds.assets.rows.size(); ++i) {
    const AssetRecord& a = run.newbuilds.assets.rows[i];
    PlanningUnit u;
    u.facility_id = a.facility_id;
    u.region = a.region;
    u.group = group_of(a.process);
    u.location = a.location();
    u.assets = {&a};
    u.build = BuildType::newbuild;
    u.demand_year = run.newbuilds.demand_year[i];
    units.push_back(std::move(u));
    members.push_back({&a, run.newbuilds.demand_year[i], true});
  }
  std::map<std::pair<std::string, Group>, const PlanningUnit*> unit_of;
  for (const PlanningUnit& u : units) unit_of[{u.facility_id, u.group}] = &u;

  const std::vector<RegionalTarget> targets = production_targets(run.outlook);
  const ProductionPlan production = production_plan(members, targets);

  for (const ScenarioParams& s : scenarios) {
    ScenarioOutcome out;
    out.scenario = s;
    PlanningContext ctx{&cfg.catalog, &cfg.finance, &cfg.prices, &cfg.storage, &out.scenario};
    out.plan = plan(units, ctx, opts.plan);
    out.pathway = simulate_pathway(out.plan.schedules);
    for (const DeploymentSchedule& sch : out.plan.schedules)
      for (const AbatementProject& p : sch.projects) {
        const PlanningUnit* u = unit_of.at({p.facility_id, p.group});
        for (const AssetRecord* a : u->assets)
          out.states[a->asset_id] = {&cfg.catalog.get(p.tech_id), p.online_year};
      }
    out.emissions = fleet_emissions(production, out.scenario, cfg.factors, out.states);
    run.outcomes.push_back(std::move(out));
  }
  if (opts.frozen_reference)
    run.reference = frozen_reference(run.existing, targets, cfg.factors);
  return run;
}

SeriesTable all_emissions(const ModelRun& run) {
  SeriesTable t = run.reference;
  for (const ScenarioOutcome& o : run.outcomes)
    for (const auto& [k, v] : o.emissions.emissions) t[k] = v;
  return t;
}

SeriesTable all_storage(const ModelRun& run) {
  SeriesTable t;
  for (const ScenarioOutcome& o : run.outcomes)
    for (const auto& [k, v] : o.emissions.stored) t[k] = v;
  return t;
}

// ---------------------------------------------------------------------------

namespace {

std::string hex(const unsigned char* d, unsigned n) {
  std::ostringstream o;
  for (unsigned i = 0; i < n; ++i) o << std::hex << std::setw(2) << std::setfill('0') << int(d[i]);
  return o.str();
}

struct Digest {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  Digest() {
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("sha256 initialisation failed");
  }
  ~Digest() { EVP_MD_CTX_free(ctx); }
  void update(const void* p, std::size_t n) { EVP_DigestUpdate(ctx, p, n); }
  std::string finish() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned n = 0;
    EVP_DigestFinal_ex(ctx, md, &n);
    return hex(md, n);
  }
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw fs::filesystem_error("cannot write", p, std::make_error_code(std::errc::io_error));
  return f;
}

std::string year_or_late(const std::optional<int>& y) {
  return y ? std::to_string(*y) : std::string(">2080");
}

}  // namespace

std::string sha256_text(std::string_view text) {
  Digest d;
  d.update(text.data(), text.size());
  return d.finish();
}

std::string sha256_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw fs::filesystem_error("cannot read", p, std::make_error_code(std::errc::io_error));
  Digest d;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    d.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return d.finish();
}

void write_manifest(const fs::path& dir, const std::vector<ManifestInput>& inputs,
                    const json& extra) {
  json in = json::array();
  for (const ManifestInput& m : inputs)
    in.push_back({{"role", m.role}, {"path", m.path.string()}, {"sha256", sha256_file(m.path)}});
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  json out = json::object();
  for (const fs::path& f : files) out[f.filename().string()] = sha256_file(f);

  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);

  json m = extra;
  m["tool"] = "chemdecarb";
  m["version"] = std::string(kVersion);
  m["timestamp"] = stamp;
  m["inputs"] = std::move(in);
  m["outputs"] = std::move(out);
  open_out(dir / "manifest.json") << m.dump(2) << "\n";
}

void write_run_outputs(const fs::path& dir, const ModelRun& run) {
  fs::create_directories(dir);
  {
    auto f = open_out(dir / "schedule.csv");
    f << "# units: capex_usd $ (2024), lcoa_usd_per_t $/tCO2, abated/stored tCO2/y at rated output\n";
    f << "scenario,region,group,facility_id,tech,build_type,start,online,capex_usd,"
         "lcoa_usd_per_t,learning_index,abated_tco2_per_y,co2_to_storage_tco2_per_y,"
         "storage_site\n";
    for (const ScenarioOutcome& o : run.outcomes)
      for (const DeploymentSchedule& s : o.plan.schedules)
        for (const AbatementProject& p : s.projects)
          f << csv::join({o.scenario.id, std::string(to_string(p.region)),
                          std::string(to_string(p.group)), p.facility_id,
                          std::string(to_string(p.tech_id)),
                          std::string(to_string(p.build_type)),
                          std::to_string(p.development_start), std::to_string(p.online_year),
                          format_double(p.total_capex), format_double(p.lcoa_at_decision),
                          std::to_string(p.learning_index), format_double(p.abated_scope1),
                          format_double(p.co2_to_storage), p.storage_site});
  }
  {
    auto f = open_out(dir / "capex_annual.csv");
    f << "# units: capex_usd $/y (2024)\n";
    f << "scenario,region,group,year,capex_usd\n";
    for (const ScenarioOutcome& o : run.outcomes)
      for (const DeploymentSchedule& s : o.plan.schedules)
        for (int y = kCapexFirstYear; y <= kHorizonYear; ++y)
          f << csv::join({o.scenario.id, std::string(to_string(s.region)),
                          std::string(to_string(s.group)), std::to_string(y),
                          format_double(s.capex_in(y))});
  }
  {
    auto f = open_out(dir / "lcoa_projects.csv");
    f << "# units: lcoa_usd_per_t $/tCO2 abated (2024)\n";
    f << "scenario,region,group,facility_id,build_type,online_year,lcoa_usd_per_t\n";
    for (const ScenarioOutcome& o : run.outcomes)
      for (const DeploymentSchedule& s : o.plan.schedules)
        for (const AbatementProject& p : s.projects)
          f << csv::join({o.scenario.id, std::string(to_string(p.region)),
                          std::string(to_string(p.group)), p.facility_id,
                          std::string(to_string(p.build_type)), std::to_string(p.online_year),
                          format_double(p.lcoa_at_decision)});
  }
  {
    auto f = open_out(dir / "emissions.csv");
    f << "# units: value_tco2 tCO2/y\n";
    f << "year,region,chemical,scope,scenario,value_tco2\n";
    for (const auto& [k, v] : all_emissions(run))
      for (int y = kSeriesFirstYear; y <= kHorizonYear; ++y)
        f << csv::join({std::to_string(y), std::string(to_string(*k.region)),
                        std::string(to_string(*k.chemical)), std::string(to_string(*k.scope)),
                        *k.scenario, format_double(at_year(v, y))});
  }
  {
    auto f = open_out(dir / "storage.csv");
    f << "# units: co2_stored_tco2 tCO2/y\n";
    f << "scenario,region,chemical,year,co2_stored_tco2\n";
    for (const auto& [k, v] : all_storage(run))
      for (int y = kSeriesFirstYear; y <= kHorizonYear; ++y)
        f << csv::join({*k.scenario, std::string(to_string(*k.region)),
                        std::string(to_string(*k.chemical)), std::to_string(y),
                        format_double(at_year(v, y))});
  }
  {
    auto f = open_out(dir / "completion.csv");
    f << "# units: cap_usd_per_y $/y (2024); completion_year is when every existing unit is "
         "online\n";
    f << "scenario,region,group,mode,cap_usd_per_y,existing_units,unabated_units,"
         "blocked_units,completion_year,cap_overrun_years\n";
    for (const ScenarioOutcome& o : run.outcomes)
      for (const DeploymentSchedule& s : o.plan.schedules) {
        std::string overruns;
        for (int y : s.cap_overrun_years) overruns += (overruns.empty() ? "" : ";") + std::to_string(y);
        const bool none = s.existing_units == 0;
        f << csv::join({o.scenario.id, std::string(to_string(s.region)),
                        std::string(to_string(s.group)), std::string(to_string(s.mode)),
                        format_double(s.cap), std::to_string(s.existing_units),
                        std::to_string(s.unabated.size()), std::to_string(s.blocked.size()),
                        none ? std::string("") : year_or_late(s.completion_year), overruns});
      }
  }
  {
    auto f = open_out(dir / "decisions.jsonl");
    for (const ScenarioOutcome& o : run.outcomes)
      for (const DecisionRecord& d : o.plan.decisions) f << to_json(d).dump() << "\n";
  }
  {
    json s = json::array();
    for (const ScenarioOutcome& o : run.outcomes) s.push_back(to_json(o.scenario));
    open_out(dir / "scenario_effective.json") << s.dump(2) << "\n";
  }
}

// ---------------------------------------------------------------------------
// Report

double CapitalTable::group_total(const std::string& s, Group g) const {
  double v = 0.0;
  for (Region r : kRegions)
    if (auto it = average.find({s, r, g}); it != average.end()) v += it->second;
  return v;
}

double CapitalTable::region_total(const std::string& s, Region r) const {
  double v = 0.0;
  for (Group g : kReportGroups)
    if (auto it = average.find({s, r, g}); it != average.end()) v += it->second;
  return v;
}

double CapitalTable::total(const std::string& s) const {
  double v = 0.0;
  for (Region r : kRegions) v += region_total(s, r);
  return v;
}

namespace {

std::vector<std::vector<std::string>> read_table(const fs::path& p,
                                                 const std::vector<std::string>& header) {
  std::ifstream in(p);
  if (!in) throw InputError("missing run output " + p.string());
  std::string line;
  std::size_t no = 0;
  if (!csv::next_record(in, line, no)) throw InputError(p.string() + ": empty");
  std::vector<std::string> got;
  for (auto f : csv::split_line(line)) got.emplace_back(f);
  if (got != header) throw InputError(p.string() + ": unexpected header");
  std::vector<std::vector<std::string>> rows;
  while (csv::next_record(in, line, no)) {
    std::vector<std::string> r;
    for (auto f : csv::split_line(line)) r.emplace_back(f);
    if (r.size() != header.size())
      throw InputError(p.string() + ":" + std::to_string(no) + ": wrong field count");
    rows.push_back(std::move(r));
  }
  return rows;
}

double num(const std::string& s, const fs::path& p) {
  auto v = csv::parse_double(s);
  if (!v) throw InputError(p.string() + ": bad number '" + s + "'");
  return *v;
}

}  // namespace

CapitalTable read_capital_table(const fs::path& dir) {
  CapitalTable t;
  const fs::path comp = dir / "completion.csv";
  std::map<std::pair<std::string, Region>, bool> unfinished;
  for (const auto& r : read_table(comp, {"scenario", "region", "group", "mode", "cap_usd_per_y",
                                         "existing_units", "unabated_units", "blocked_units",
                                         "completion_year", "cap_overrun_years"})) {
    if (std::find(t.scenarios.begin(), t.scenarios.end(), r[0]) == t.scenarios.end())
      t.scenarios.push_back(r[0]);
    const Region reg = region_from(r[1]);
    const Group g = group_from(r[2]);
    auto& c = t.completion[{r[0], reg}];
    if (std::find(kReportGroups.begin(), kReportGroups.end(), g) == kReportGroups.end()) continue;
    if (r[8].empty()) continue;
    if (r[8] == ">2080") {
      unfinished[{r[0], reg}] = true;
      continue;
    }
    const int y = static_cast<int>(num(r[8], comp));
    c = std::max(c.value_or(0), y);
  }
  for (auto& [k, c] : t.completion)
    if (unfinished[k]) c.reset();

  const fs::path capex = dir / "capex_annual.csv";
  std::map<std::tuple<std::string, Region, Group>, double> cum;
  for (const auto& r : read_table(capex, {"scenario", "region", "group", "year", "capex_usd"})) {
    const Region reg = region_from(r[1]);
    const Group g = group_from(r[2]);
    const int y = static_cast<int>(num(r[3], capex));
    const double v = num(r[4], capex);
    if (std::find(kReportGroups.begin(), kReportGroups.end(), g) != kReportGroups.end())
      cum[{r[0], reg, g}] += v;
    if (y >= 2025) t.cumulative_capex[r[0]] += v;
  }
  // Average over the deployment window: first spending year to the region's
  // completion year (the horizon when unfinished).
  for (const auto& [k, v] : cum) {
    const auto c = t.completion.find({std::get<0>(k), std::get<1>(k)});
    const int end = c != t.completion.end() && c->second ? *c->second : kHorizonYear;
    t.average[k] = v / static_cast<double>(end - kCapexFirstYear + 1);
  }

  const fs::path em = dir / "emissions.csv";
  for (const auto& r :
       read_table(em, {"year", "region", "chemical", "scope", "scenario", "value_tco2"})) {
    const int y = static_cast<int>(num(r[0], em));
    if (y >= 2025 && y <= kHorizonYear) t.cumulative_emissions[r[4]] += num(r[5], em);
  }
  return t;
}

std::string format_capital_table(const CapitalTable& t) {
  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "Average annual abatement capital, B$/y (2024$)\n";
  o << std::left << std::setw(24) << "group";
  for (Region r : kRegions)
    for (const std::string& s : t.scenarios)
      o << std::right << std::setw(9) << (std::string(region_code(r)) + "-" + s);
  for (const std::string& s : t.scenarios) o << std::right << std::setw(9) << ("ALL-" + s);
  o << "\n";
  for (Group g : kReportGroups) {
    o << std::left << std::setw(24) << to_string(g);
    for (Region r : kRegions)
      for (const std::string& s : t.scenarios) {
        auto it = t.average.find({s, r, g});
        o << std::right << std::setw(9) << (it == t.average.end() ? 0.0 : it->second) / 1e9;
      }
    for (const std::string& s : t.scenarios) o << std::right << std::setw(9) << t.group_total(s, g) / 1e9;
    o << "\n";
  }
  o << std::left << std::setw(24) << "totals";
  for (Region r : kRegions)
    for (const std::string& s : t.scenarios) o << std::right << std::setw(9) << t.region_total(s, r) / 1e9;
  for (const std::string& s : t.scenarios) o << std::right << std::setw(9) << t.total(s) / 1e9;
  o << "\n";
  o << std::left << std::setw(24) << "existing abated";
  for (Region r : kRegions)
    for (const std::string& s : t.scenarios) {
      auto it = t.completion.find({s, r});
      o << std::right << std::setw(9)
        << (it == t.completion.end() ? std::string("-") : year_or_late(it->second));
    }
  o << "\n\n";
  o << std::setprecision(1);
  o << "Cumulative 2025-2080\n";
  for (const std::string& s : t.scenarios)
    o << "  capex " << s << ": " << t.cumulative_capex.at(s) / 1e9 << " B$\n";
  for (const auto& [s, v] : t.cumulative_emissions)
    o << "  emissions " << s << ": " << v / 1e9 << " GtCO2\n";
  return o.str();
}

void write_report(const fs::path& dir, const CapitalTable& t) {
  auto f = open_out(dir / "report.csv");
  f << "# units: value $/y (2024) for average_capex rows; year for completion rows; $ and "
       "tCO2 for cumulative rows\n";
  f << "metric,group,region,scenario,value\n";
  for (const std::string& s : t.scenarios) {
    for (Group g : kReportGroups) {
      for (Region r : kRegions) {
        auto it = t.average.find({s, r, g});
        f << csv::join({"average_capex", std::string(to_string(g)), std::string(to_string(r)), s,
                        format_double(it == t.average.end() ? 0.0 : it->second)});
      }
      f << csv::join({"average_capex", std::string(to_string(g)), "all", s,
                      format_double(t.group_total(s, g))});
    }
    for (Region r : kRegions)
      f << csv::join({"average_capex", "totals", std::string(to_string(r)), s,
                      format_double(t.region_total(s, r))});
    f << csv::join({"average_capex", "totals", "all", s, format_double(t.total(s))});
    for (Region r : kRegions) {
      auto it = t.completion.find({s, r});
      if (it != t.completion.end())
        f << csv::join({"completion_year", "existing", std::string(to_string(r)), s,
                        year_or_late(it->second)});
    }
    f << csv::join({"cumulative_capex", "all", "all", s, format_double(t.cumulative_capex.at(s))});
  }
  for (const auto& [s, v] : t.cumulative_emissions)
    f << csv::join({"cumulative_emissions", "all", "all", s, format_double(v)});
}

}  // namespace chemdecarb
