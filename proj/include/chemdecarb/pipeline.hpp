#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/catalog.hpp"
#include "chemdecarb/costing.hpp"
#include "chemdecarb/dataset.hpp"
#include "chemdecarb/emissions.hpp"
#include "chemdecarb/projections.hpp"
#include "chemdecarb/scenario.hpp"
#include "chemdecarb/scheduler.hpp"

namespace chemdecarb {

inline constexpr std::string_view kVersion = "1.0.0";

struct ModelConfig {
  Catalog catalog;
  FinanceParams finance;
  PriceTable prices;
  StorageNetwork storage;
  GrowthConfig growth;
  EmissionFactors factors;
};

ModelConfig default_model_config();

// World-scale units added to meet demand growth. Intensities follow the
// capacity-weighted mean of existing same-process assets in the region
// (any region when the region has none). Chemicals with no same-process
// asset anywhere get no new builds and are listed in `untemplated`.
struct NewbuildFleet {
  AssetTable assets;
  std::vector<int> demand_year;  // parallel to assets.rows
  std::vector<std::pair<Region, Chemical>> untemplated;
};

NewbuildFleet newbuild_fleet(const AssetTable& existing,
                             const std::vector<RegionalOutlook>& outlook,
                             const GrowthConfig& growth);

struct ScenarioOutcome {
  ScenarioParams scenario;
  PlanResult plan;
  PathwayResult pathway;
  FleetEmissions emissions;
  std::map<std::string, AbatementState> states;  // asset id
};

struct RunOptions {
  bool frozen_reference = false;
  bool newbuilds = true;
  PlanOptions plan;
};

struct ModelRun {
  AssetTable existing;
  std::vector<RegionalOutlook> outlook;
  NewbuildFleet newbuilds;
  std::vector<ScenarioOutcome> outcomes;
  SeriesTable reference;  // filled when requested
};

ModelRun run_model(const AssetTable& assets, const ModelConfig& cfg,
                   const std::vector<ScenarioParams>& scenarios, const RunOptions& opts = {});

std::vector<RegionalTarget> production_targets(const std::vector<RegionalOutlook>& outlook);

// All emission series of a run (scenarios plus REF when present).
SeriesTable all_emissions(const ModelRun& run);
SeriesTable all_storage(const ModelRun& run);

// ---------------------------------------------------------------------------
// Output files

std::string sha256_file(const std::filesystem::path& p);
std::string sha256_text(std::string_view text);

struct ManifestInput {
  std::string role;  // assets, catalog, scenario, ...
  std::filesystem::path path;
};

// Writes `manifest.json` covering every regular file already in `dir`.
void write_manifest(const std::filesystem::path& dir, const std::vector<ManifestInput>& inputs,
                    const nlohmann::json& extra);

// Writes schedule.csv, capex_annual.csv, lcoa_projects.csv, emissions.csv,
// storage.csv, completion.csv, decisions.jsonl and scenario_effective.json.
void write_run_outputs(const std::filesystem::path& dir, const ModelRun& run);

// Table of average annual capital by (group, region, scenario) built from a
// run directory.
struct CapitalTable {
  std::vector<std::string> scenarios;
  std::map<std::tuple<std::string, Region, Group>, double> average;  // $ / y
  std::map<std::pair<std::string, Region>, std::optional<int>> completion;
  std::map<std::string, double> cumulative_capex;      // 2025-2080, $
  std::map<std::string, double> cumulative_emissions;  // 2025-2080, tCO2

  double group_total(const std::string& s, Group g) const;             // over regions
  double region_total(const std::string& s, Region r) const;           // over groups
  double total(const std::string& s) const;
};

// Table rows carry the capital-cap groups only.
inline constexpr std::array kReportGroups{Group::steam_crackers, Group::on_purpose_propylene,
                                          Group::aromatics, Group::methanol, Group::ammonia};

CapitalTable read_capital_table(const std::filesystem::path& run_dir);
std::string format_capital_table(const CapitalTable& t);
void write_report(const std::filesystem::path& run_dir, const CapitalTable& t);

}  // namespace chemdecarb
