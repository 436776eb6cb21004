#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "chemdecarb/types.hpp"

namespace chemdecarb {

// One production unit as it operated in the base year.
struct AssetRecord {
  std::string asset_id;
  std::string facility_id;
  std::string owner;
  Region region = Region::NorthAmerica;
  double latitude = 0.0;
  double longitude = 0.0;
  int startup_year = kBaseYear;
  Chemical chemical = Chemical::ethylene;
  Process process = Process::steam_cracker;
  double capacity = 0.0;               // t product / y
  double utilization = 1.0;            // fraction
  Feedstock feedstock_type = Feedstock::ethane;
  double feedstock_intensity = 0.0;    // GJ / t
  double electricity_intensity = 0.0;  // MWh / t
  double steam_intensity = 0.0;        // GJ / t
  double fuel_intensity = 0.0;         // GJ / t, excluding steam raising
  double process_co2_intensity = 0.0;  // tCO2 / t

  double production() const { return capacity * utilization; }
  GeoPoint location() const { return {latitude, longitude}; }

  friend bool operator==(const AssetRecord&, const AssetRecord&) = default;
};

// Column names of assets.csv, in canonical order.
const std::vector<std::string>& asset_columns();

struct AssetTable {
  std::vector<AssetRecord> rows;

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  friend bool operator==(const AssetTable&, const AssetTable&) = default;
};

// Parses assets.csv. Throws SchemaError for missing/unknown columns and
// InputError (message carries the line number) for bad cells or duplicate
// asset ids. Lines starting with '#' are comments.
AssetTable read_asset_csv(std::istream& in, const std::string& source = "<stream>");
AssetTable load_asset_table(const std::filesystem::path& path);

void write_asset_csv(std::ostream& out, const AssetTable& table);
void save_asset_table(const std::filesystem::path& path, const AssetTable& table);

struct Violation {
  std::size_t row = 0;  // zero-based index into AssetTable::rows
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool clean() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate_assets(const AssetTable& table);

struct Facility {
  std::string facility_id;
  Region region = Region::NorthAmerica;
  GeoPoint location;
  std::vector<std::size_t> assets;  // indices into AssetTable::rows
  std::map<Chemical, double> capacity_by_chemical;
};

// Partitions assets by facility_id, in first-appearance order.
// Throws InputError when members disagree on region or location.
std::vector<Facility> group_facilities(const AssetTable& table);

// ---------------------------------------------------------------------------
// Synthetic asset generator

struct UniformBand {
  double mean = 0.0;
  double spread = 0.0;  // half-width; samples are clamped at zero
};

struct CoProduct {
  Chemical chemical = Chemical::propylene;
  double capacity_ratio = 0.0;    // capacity relative to the main product
  double intensity_factor = 1.0;  // per-tonne intensities relative to main
  int facility_count = 0;         // first N facilities of the stratum carry it
};

struct Stratum {
  Region region = Region::NorthAmerica;
  Chemical chemical = Chemical::ethylene;
  Process process = Process::steam_cracker;
  Feedstock feedstock = Feedstock::ethane;
  int facility_count = 0;
  double capacity_median = 1.0;      // t / y
  double capacity_dispersion = 0.5;  // sigma of log(capacity)
  double capacity_min = 0.0;
  double capacity_max = 0.0;         // 0 = unbounded
  UniformBand utilization{0.85, 0.05};
  UniformBand feedstock_intensity;
  UniformBand electricity_intensity;
  UniformBand steam_intensity;
  UniformBand fuel_intensity;
  UniformBand process_co2_intensity;
  std::vector<GeoPoint> polygon;
  int startup_min = 1970;
  int startup_max = 2020;
  int owner_pool = 10;
  std::vector<CoProduct> co_products;
};

struct SynthesisSpec {
  std::uint64_t seed = 0;
  std::vector<Stratum> strata;
};

SynthesisSpec synthesis_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SynthesisSpec& spec);
SynthesisSpec load_synthesis_spec(const std::filesystem::path& path);

// Deterministic in (spec, seed). Throws InputError for an empty spec or an
// invalid polygon / distribution parameter.
AssetTable synthesize_assets(const SynthesisSpec& spec);

// Polygon helpers (lat/lon treated as planar coordinates).
bool polygon_valid(const std::vector<GeoPoint>& poly);
bool point_in_polygon(const GeoPoint& p, const std::vector<GeoPoint>& poly);

}  // namespace chemdecarb
