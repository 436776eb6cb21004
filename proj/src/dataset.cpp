#include "chemdecarb/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "chemdecarb/csv.hpp"
#include "chemdecarb/json_util.hpp"

namespace chemdecarb {

using nlohmann::json;

const std::vector<std::string>& asset_columns() {
  static const std::vector<std::string> kColumns{
      "asset_id",          "facility_id",           "owner",
      "region",            "latitude",              "longitude",
      "startup_year",      "chemical",              "process",
      "capacity",          "utilization",           "feedstock_type",
      "feedstock_intensity", "electricity_intensity", "steam_intensity",
      "fuel_intensity",    "process_co2_intensity"};
  return kColumns;
}

namespace {

[[noreturn]] void cell_error(const std::string& source, std::size_t line,
                             const std::string& column,
                             std::string_view value) {
  throw InputError(source + ":" + std::to_string(line) + ": cannot parse " +
                   column + " value '" + std::string(value) + "'");
}

}  // namespace

AssetTable read_asset_csv(std::istream& in, const std::string& source) {
  const auto& columns = asset_columns();
  std::string line;
  std::size_t line_no = 0;
  if (!csv::next_record(in, line, line_no))
    throw SchemaError("asset_id", source + ": missing header row");

  const auto header = csv::split_line(line);
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name(header[i]);
    if (std::find(columns.begin(), columns.end(), name) == columns.end())
      throw SchemaError(name, source + ": unknown column '" + name + "'");
    if (!pos.emplace(name, i).second)
      throw SchemaError(name, source + ": duplicate column '" + name + "'");
  }
  for (const auto& c : columns)
    if (!pos.contains(c))
      throw SchemaError(c, source + ": missing column '" + c + "'");

  AssetTable table;
  std::unordered_set<std::string> ids;
  while (csv::next_record(in, line, line_no)) {
    const auto cells = csv::split_line(line);
    if (cells.size() != header.size())
      throw InputError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    auto cell = [&](const char* c) { return cells[pos.at(c)]; };
    auto num = [&](const char* c) {
      auto v = csv::parse_double(cell(c));
      if (!v) cell_error(source, line_no, c, cell(c));
      return *v;
    };

    AssetRecord r;
    r.asset_id = std::string(cell("asset_id"));
    r.facility_id = std::string(cell("facility_id"));
    r.owner = std::string(cell("owner"));
    if (r.asset_id.empty()) cell_error(source, line_no, "asset_id", "");
    if (r.facility_id.empty()) cell_error(source, line_no, "facility_id", "");

    auto region = parse_region(cell("region"));
    if (!region) cell_error(source, line_no, "region", cell("region"));
    r.region = *region;
    r.latitude = num("latitude");
    r.longitude = num("longitude");
    auto year = csv::parse_int(cell("startup_year"));
    if (!year) cell_error(source, line_no, "startup_year", cell("startup_year"));
    r.startup_year = static_cast<int>(*year);
    auto chem = parse_chemical(cell("chemical"));
    if (!chem) cell_error(source, line_no, "chemical", cell("chemical"));
    r.chemical = *chem;
    auto proc = parse_process(cell("process"));
    if (!proc) cell_error(source, line_no, "process", cell("process"));
    r.process = *proc;
    r.capacity = num("capacity");
    r.utilization = num("utilization");
    auto feed = parse_feedstock(cell("feedstock_type"));
    if (!feed)
      cell_error(source, line_no, "feedstock_type", cell("feedstock_type"));
    r.feedstock_type = *feed;
    r.feedstock_intensity = num("feedstock_intensity");
    r.electricity_intensity = num("electricity_intensity");
    r.steam_intensity = num("steam_intensity");
    r.fuel_intensity = num("fuel_intensity");
    r.process_co2_intensity = num("process_co2_intensity");

    if (!ids.insert(r.asset_id).second)
      throw InputError(source + ":" + std::to_string(line_no) +
                       ": duplicate asset_id '" + r.asset_id + "'");
    table.rows.push_back(std::move(r));
  }
  return table;
}

AssetTable load_asset_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open asset table " + path.string());
  return read_asset_csv(in, path.string());
}

void write_asset_csv(std::ostream& out, const AssetTable& table) {
  using csv::format_double;
  out << "# units: capacity t/y; intensities per t product: feedstock GJ, "
         "electricity MWh, steam GJ, fuel GJ, process_co2 tCO2\n";
  out << csv::join(asset_columns());
  for (const auto& r : table.rows) {
    out << csv::join({r.asset_id, r.facility_id, r.owner,
                      std::string(to_string(r.region)),
                      format_double(r.latitude), format_double(r.longitude),
                      std::to_string(r.startup_year),
                      std::string(to_string(r.chemical)),
                      std::string(to_string(r.process)),
                      format_double(r.capacity), format_double(r.utilization),
                      std::string(to_string(r.feedstock_type)),
                      format_double(r.feedstock_intensity),
                      format_double(r.electricity_intensity),
                      format_double(r.steam_intensity),
                      format_double(r.fuel_intensity),
                      format_double(r.process_co2_intensity)});
  }
}

void save_asset_table(const std::filesystem::path& path,
                      const AssetTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  write_asset_csv(out, table);
  if (!out) throw std::ios_base::failure("write failed: " + path.string());
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations)
    os << "row " << v.row << " " << v.field << ": " << v.message << "\n";
  return os.str();
}

ValidationReport validate_assets(const AssetTable& table) {
  ValidationReport report;
  auto flag = [&](std::size_t row, const char* field, std::string msg) {
    report.violations.push_back({row, field, std::move(msg)});
  };
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    if (!(r.capacity > 0.0)) flag(i, "capacity", "must be > 0");
    if (!(r.utilization > 0.0 && r.utilization <= 1.0))
      flag(i, "utilization", "must lie in (0, 1]");
    const std::pair<const char*, double> intensities[] = {
        {"feedstock_intensity", r.feedstock_intensity},
        {"electricity_intensity", r.electricity_intensity},
        {"steam_intensity", r.steam_intensity},
        {"fuel_intensity", r.fuel_intensity},
        {"process_co2_intensity", r.process_co2_intensity}};
    for (const auto& [name, v] : intensities)
      if (!(v >= 0.0) || !std::isfinite(v)) flag(i, name, "must be >= 0");
    if (r.startup_year > kBaseYear)
      flag(i, "startup_year", "must be <= " + std::to_string(kBaseYear));
    if (!r.location().valid())
      flag(i, "latitude/longitude", "not a valid coordinate");
  }
  return report;
}

std::vector<Facility> group_facilities(const AssetTable& table) {
  std::vector<Facility> out;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& r = table.rows[i];
    auto [it, inserted] = index.emplace(r.facility_id, out.size());
    if (inserted) {
      Facility f;
      f.facility_id = r.facility_id;
      f.region = r.region;
      f.location = r.location();
      out.push_back(std::move(f));
    }
    Facility& f = out[it->second];
    if (f.region != r.region || f.location.latitude != r.latitude ||
        f.location.longitude != r.longitude)
      throw InputError("facility '" + f.facility_id +
                       "' has members with conflicting region/location (asset '" +
                       r.asset_id + "')");
    f.assets.push_back(i);
    f.capacity_by_chemical[r.chemical] += r.capacity;
  }
  return out;
}

// ---------------------------------------------------------------------------

bool polygon_valid(const std::vector<GeoPoint>& poly) {
  if (poly.size() < 3) return false;
  double area2 = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (!poly[i].valid()) return false;
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    area2 += a.longitude * b.latitude - b.longitude * a.latitude;
  }
  return std::abs(area2) > 1e-9;
}

bool point_in_polygon(const GeoPoint& p, const std::vector<GeoPoint>& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const auto& a = poly[i];
    const auto& b = poly[j];
    if ((a.latitude > p.latitude) != (b.latitude > p.latitude)) {
      const double x = (b.longitude - a.longitude) * (p.latitude - a.latitude) /
                           (b.latitude - a.latitude) +
                       a.longitude;
      if (p.longitude < x) inside = !inside;
    }
  }
  return inside;
}

namespace {

// Deterministic sampling on top of mt19937_64, whose output sequence is fixed
// by the standard (the std distributions are not).
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }
  double normal() {  // Box-Muller, one variate per call
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }
  double band(const UniformBand& b) {
    return std::max(0.0, uniform(b.mean - b.spread, b.mean + b.spread));
  }

 private:
  std::mt19937_64 engine_;
};

std::string pad(int v, int width) {
  std::string s = std::to_string(v);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(s.size()))), '0') + s;
}

void check_stratum(const Stratum& s, std::size_t idx) {
  const std::string where = "stratum " + std::to_string(idx) + ": ";
  if (s.facility_count < 0) throw InputError(where + "facility_count < 0");
  if (!(s.capacity_median > 0.0) || !(s.capacity_dispersion >= 0.0))
    throw InputError(where + "capacity distribution parameters must be positive");
  if (s.capacity_max > 0.0 && s.capacity_max < s.capacity_min)
    throw InputError(where + "capacity_max < capacity_min");
  if (!polygon_valid(s.polygon)) throw InputError(where + "invalid polygon");
  if (s.startup_min > s.startup_max || s.startup_max > kBaseYear)
    throw InputError(where + "invalid startup-year range");
  if (s.owner_pool < 1) throw InputError(where + "owner_pool must be >= 1");
  const UniformBand* bands[] = {&s.utilization, &s.feedstock_intensity,
                                &s.electricity_intensity, &s.steam_intensity,
                                &s.fuel_intensity, &s.process_co2_intensity};
  for (const auto* b : bands)
    if (!(b->mean >= 0.0) || !(b->spread >= 0.0))
      throw InputError(where + "distribution parameters must be non-negative");
  if (s.utilization.mean - s.utilization.spread <= 0.0 ||
      s.utilization.mean + s.utilization.spread > 1.0)
    throw InputError(where + "utilization band must lie within (0, 1]");
  for (const auto& c : s.co_products)
    if (c.facility_count < 0 || c.facility_count > s.facility_count ||
        !(c.capacity_ratio > 0.0) || !(c.intensity_factor >= 0.0))
      throw InputError(where + "invalid co-product");
}

}  // namespace

AssetTable synthesize_assets(const SynthesisSpec& spec) {
  if (spec.strata.empty()) throw InputError("synthesis spec has no strata");
  for (std::size_t i = 0; i < spec.strata.size(); ++i)
    check_stratum(spec.strata[i], i);

  Sampler rng(spec.seed);
  AssetTable table;
  std::map<std::string, int> serial;  // per (region, process) facility counter

  for (const auto& s : spec.strata) {
    double lo_lat = 90, hi_lat = -90, lo_lon = 180, hi_lon = -180;
    for (const auto& p : s.polygon) {
      lo_lat = std::min(lo_lat, p.latitude);
      hi_lat = std::max(hi_lat, p.latitude);
      lo_lon = std::min(lo_lon, p.longitude);
      hi_lon = std::max(hi_lon, p.longitude);
    }
    const std::string prefix = std::string(region_code(s.region)) + "-" +
                               std::string(to_string(s.process));
    for (int k = 0; k < s.facility_count; ++k) {
      AssetRecord r;
      double cap = s.capacity_median * std::exp(s.capacity_dispersion * rng.normal());
      if (s.capacity_max > 0.0) cap = std::min(cap, s.capacity_max);
      cap = std::max(cap, s.capacity_min);
      r.capacity = std::round(cap);
      if (r.capacity <= 0.0) r.capacity = 1.0;
      r.utilization = rng.uniform(s.utilization.mean - s.utilization.spread,
                                  s.utilization.mean + s.utilization.spread);
      GeoPoint p;
      do {
        p = {rng.uniform(lo_lat, hi_lat), rng.uniform(lo_lon, hi_lon)};
      } while (!point_in_polygon(p, s.polygon));
      r.latitude = std::round(p.latitude * 1e4) / 1e4;
      r.longitude = std::round(p.longitude * 1e4) / 1e4;
      r.startup_year = rng.uniform_int(s.startup_min, s.startup_max);
      r.feedstock_intensity = rng.band(s.feedstock_intensity);
      r.electricity_intensity = rng.band(s.electricity_intensity);
      r.steam_intensity = rng.band(s.steam_intensity);
      r.fuel_intensity = rng.band(s.fuel_intensity);
      r.process_co2_intensity = rng.band(s.process_co2_intensity);
      const int owner = rng.uniform_int(1, s.owner_pool);

      const int n = ++serial[prefix];
      r.region = s.region;
      r.chemical = s.chemical;
      r.process = s.process;
      r.feedstock_type = s.feedstock;
      r.facility_id = prefix + "-" + pad(n, 4);
      r.asset_id = r.facility_id + "-" + std::string(to_string(s.chemical));
      r.owner = std::string(region_code(s.region)) + "_owner_" + pad(owner, 3);

      const AssetRecord main = r;
      table.rows.push_back(std::move(r));
      for (const auto& co : s.co_products) {
        if (k >= co.facility_count) continue;
        AssetRecord c = main;
        c.chemical = co.chemical;
        c.asset_id = main.facility_id + "-" + std::string(to_string(co.chemical));
        c.capacity = std::max(1.0, std::round(main.capacity * co.capacity_ratio));
        c.feedstock_intensity = main.feedstock_intensity * co.intensity_factor;
        c.electricity_intensity = main.electricity_intensity * co.intensity_factor;
        c.steam_intensity = main.steam_intensity * co.intensity_factor;
        c.fuel_intensity = main.fuel_intensity * co.intensity_factor;
        c.process_co2_intensity = main.process_co2_intensity * co.intensity_factor;
        table.rows.push_back(std::move(c));
      }
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

UniformBand band_from(const json& j) {
  json_util::check_keys(j, {"mean", "spread"}, "band");
  return {j.at("mean").get<double>(), j.value("spread", 0.0)};
}
json band_to(const UniformBand& b) { return {{"mean", b.mean}, {"spread", b.spread}}; }

}  // namespace

SynthesisSpec synthesis_spec_from_json(const json& j) {
  try {
    json_util::check_keys(j, {"seed", "strata"}, "synthesis spec");
    SynthesisSpec spec;
    spec.seed = j.value("seed", std::uint64_t{0});
    for (const auto& js : j.at("strata")) {
      json_util::check_keys(
          js,
          {"region", "chemical", "process", "feedstock", "facility_count",
           "capacity_median", "capacity_dispersion", "capacity_min",
           "capacity_max", "utilization", "feedstock_intensity",
           "electricity_intensity", "steam_intensity", "fuel_intensity",
           "process_co2_intensity", "polygon", "startup_min", "startup_max",
           "owner_pool", "co_products"},
          "stratum");
      Stratum s;
      s.region = region_from(js.at("region").get<std::string>());
      s.chemical = chemical_from(js.at("chemical").get<std::string>());
      s.process = process_from(js.at("process").get<std::string>());
      s.feedstock = feedstock_from(js.at("feedstock").get<std::string>());
      s.facility_count = js.at("facility_count").get<int>();
      s.capacity_median = js.at("capacity_median").get<double>();
      s.capacity_dispersion = js.at("capacity_dispersion").get<double>();
      s.capacity_min = js.value("capacity_min", 0.0);
      s.capacity_max = js.value("capacity_max", 0.0);
      if (js.contains("utilization")) s.utilization = band_from(js["utilization"]);
      auto opt_band = [&](const char* k, UniformBand& b) {
        if (js.contains(k)) b = band_from(js[k]);
      };
      opt_band("feedstock_intensity", s.feedstock_intensity);
      opt_band("electricity_intensity", s.electricity_intensity);
      opt_band("steam_intensity", s.steam_intensity);
      opt_band("fuel_intensity", s.fuel_intensity);
      opt_band("process_co2_intensity", s.process_co2_intensity);
      for (const auto& p : js.at("polygon"))
        s.polygon.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
      s.startup_min = js.value("startup_min", 1970);
      s.startup_max = js.value("startup_max", 2020);
      s.owner_pool = js.value("owner_pool", 10);
      if (js.contains("co_products")) {
        for (const auto& jc : js["co_products"]) {
          json_util::check_keys(jc,
                                {"chemical", "capacity_ratio",
                                 "intensity_factor", "facility_count"},
                                "co_product");
          CoProduct c;
          c.chemical = chemical_from(jc.at("chemical").get<std::string>());
          c.capacity_ratio = jc.at("capacity_ratio").get<double>();
          c.intensity_factor = jc.value("intensity_factor", 1.0);
          c.facility_count = jc.at("facility_count").get<int>();
          s.co_products.push_back(c);
        }
      }
      spec.strata.push_back(std::move(s));
    }
    return spec;
  } catch (const json::exception& e) {
    throw InputError(std::string("synthesis spec: ") + e.what());
  }
}

json to_json(const SynthesisSpec& spec) {
  json strata = json::array();
  for (const auto& s : spec.strata) {
    json poly = json::array();
    for (const auto& p : s.polygon) poly.push_back({p.latitude, p.longitude});
    json co = json::array();
    for (const auto& c : s.co_products)
      co.push_back({{"chemical", to_string(c.chemical)},
                    {"capacity_ratio", c.capacity_ratio},
                    {"intensity_factor", c.intensity_factor},
                    {"facility_count", c.facility_count}});
    strata.push_back({{"region", to_string(s.region)},
                      {"chemical", to_string(s.chemical)},
                      {"process", to_string(s.process)},
                      {"feedstock", to_string(s.feedstock)},
                      {"facility_count", s.facility_count},
                      {"capacity_median", s.capacity_median},
                      {"capacity_dispersion", s.capacity_dispersion},
                      {"capacity_min", s.capacity_min},
                      {"capacity_max", s.capacity_max},
                      {"utilization", band_to(s.utilization)},
                      {"feedstock_intensity", band_to(s.feedstock_intensity)},
                      {"electricity_intensity", band_to(s.electricity_intensity)},
                      {"steam_intensity", band_to(s.steam_intensity)},
                      {"fuel_intensity", band_to(s.fuel_intensity)},
                      {"process_co2_intensity", band_to(s.process_co2_intensity)},
                      {"polygon", poly},
                      {"startup_min", s.startup_min},
                      {"startup_max", s.startup_max},
                      {"owner_pool", s.owner_pool},
                      {"co_products", co}});
  }
  return {{"seed", spec.seed}, {"strata", strata}};
}

SynthesisSpec load_synthesis_spec(const std::filesystem::path& path) {
  return synthesis_spec_from_json(json_util::read_file(path));
}

}  // namespace chemdecarb
