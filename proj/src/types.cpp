#include "chemdecarb/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace chemdecarb {

std::string_view region_code(Region r) {
  switch (r) {
    case Region::NorthAmerica: return "NA";
    case Region::Europe: return "EU";
    case Region::MiddleEast: return "ME";
    case Region::China: return "CN";
  }
  return "XX";
}

namespace {

template <typename E, std::size_t N>
struct Names {
  std::array<std::pair<E, std::string_view>, N> table;

  std::string_view name(E e) const {
    for (const auto& [k, v] : table)
      if (k == e) return v;
    return "?";
  }
  std::optional<E> parse(std::string_view s) const {
    for (const auto& [k, v] : table)
      if (v == s) return k;
    return std::nullopt;
  }
};

constexpr Names<Region, 4> kRegionNames{{{
    {Region::NorthAmerica, "NorthAmerica"},
    {Region::Europe, "Europe"},
    {Region::MiddleEast, "MiddleEast"},
    {Region::China, "China"},
}}};

constexpr Names<Chemical, 9> kChemicalNames{{{
    {Chemical::ethylene, "ethylene"},
    {Chemical::propylene, "propylene"},
    {Chemical::benzene, "benzene"},
    {Chemical::butadiene, "butadiene"},
    {Chemical::toluene, "toluene"},
    {Chemical::xylene, "xylene"},
    {Chemical::ammonia, "ammonia"},
    {Chemical::methanol, "methanol"},
    {Chemical::chlor_alkali, "chlor_alkali"},
}}};

constexpr Names<Process, 8> kProcessNames{{{
    {Process::steam_cracker, "steam_cracker"},
    {Process::on_purpose_propylene, "on_purpose_propylene"},
    {Process::aromatics_extraction, "aromatics_extraction"},
    {Process::smr_ammonia, "smr_ammonia"},
    {Process::coal_ammonia, "coal_ammonia"},
    {Process::smr_methanol, "smr_methanol"},
    {Process::coal_methanol, "coal_methanol"},
    {Process::electrolysis_chlor_alkali, "electrolysis_chlor_alkali"},
}}};

constexpr Names<Feedstock, 8> kFeedstockNames{{{
    {Feedstock::ethane, "ethane"},
    {Feedstock::propane, "propane"},
    {Feedstock::naphtha, "naphtha"},
    {Feedstock::lpg, "lpg"},
    {Feedstock::natural_gas, "natural_gas"},
    {Feedstock::coal, "coal"},
    {Feedstock::reformate, "reformate"},
    {Feedstock::salt, "salt"},
}}};

constexpr Names<Group, 6> kGroupNames{{{
    {Group::steam_crackers, "steam_crackers"},
    {Group::on_purpose_propylene, "on_purpose_propylene"},
    {Group::aromatics, "aromatics"},
    {Group::methanol, "methanol"},
    {Group::ammonia, "ammonia"},
    {Group::chlor_alkali, "chlor_alkali"},
}}};

constexpr Names<TechId, 9> kTechNames{{{
    {TechId::ccs_postcombustion, "ccs_postcombustion"},
    {TechId::ccs_process_co2, "ccs_process_co2"},
    {TechId::blue_h2, "blue_h2"},
    {TechId::green_h2, "green_h2"},
    {TechId::electrified_cracker, "electrified_cracker"},
    {TechId::ccu_methanol, "ccu_methanol"},
    {TechId::bio_syngas_methanol, "bio_syngas_methanol"},
    {TechId::bio_ethylene, "bio_ethylene"},
    {TechId::circular_pyoil, "circular_pyoil"},
}}};

template <typename Opt>
auto require(Opt v, std::string_view s, std::string_view what) {
  if (!v)
    throw ConfigError("unknown " + std::string(what) + " '" + std::string(s) +
                      "'");
  return *v;
}

}  // namespace

std::string_view to_string(Region v) { return kRegionNames.name(v); }
std::string_view to_string(Chemical v) { return kChemicalNames.name(v); }
std::string_view to_string(Process v) { return kProcessNames.name(v); }
std::string_view to_string(Feedstock v) { return kFeedstockNames.name(v); }
std::string_view to_string(Group v) { return kGroupNames.name(v); }
std::string_view to_string(TechId v) { return kTechNames.name(v); }
std::string_view to_string(BuildType v) {
  return v == BuildType::retrofit ? "retrofit" : "newbuild";
}

std::optional<Region> parse_region(std::string_view s) {
  return kRegionNames.parse(s);
}
std::optional<Chemical> parse_chemical(std::string_view s) {
  return kChemicalNames.parse(s);
}
std::optional<Process> parse_process(std::string_view s) {
  return kProcessNames.parse(s);
}
std::optional<Feedstock> parse_feedstock(std::string_view s) {
  return kFeedstockNames.parse(s);
}
std::optional<Group> parse_group(std::string_view s) {
  return kGroupNames.parse(s);
}
std::optional<TechId> parse_tech(std::string_view s) {
  return kTechNames.parse(s);
}
std::optional<BuildType> parse_build_type(std::string_view s) {
  if (s == "retrofit") return BuildType::retrofit;
  if (s == "newbuild") return BuildType::newbuild;
  return std::nullopt;
}

Region region_from(std::string_view s, std::string_view what) {
  return require(parse_region(s), s, what);
}
Chemical chemical_from(std::string_view s, std::string_view what) {
  return require(parse_chemical(s), s, what);
}
Process process_from(std::string_view s, std::string_view what) {
  return require(parse_process(s), s, what);
}
Feedstock feedstock_from(std::string_view s, std::string_view what) {
  return require(parse_feedstock(s), s, what);
}
Group group_from(std::string_view s, std::string_view what) {
  return require(parse_group(s), s, what);
}
TechId tech_from(std::string_view s, std::string_view what) {
  return require(parse_tech(s), s, what);
}

Group group_of(Process p) {
  switch (p) {
    case Process::steam_cracker: return Group::steam_crackers;
    case Process::on_purpose_propylene: return Group::on_purpose_propylene;
    case Process::aromatics_extraction: return Group::aromatics;
    case Process::smr_ammonia:
    case Process::coal_ammonia: return Group::ammonia;
    case Process::smr_methanol:
    case Process::coal_methanol: return Group::methanol;
    case Process::electrolysis_chlor_alkali: return Group::chlor_alkali;
  }
  return Group::chlor_alkali;
}

bool is_coal_fired(Process p) {
  return p == Process::coal_ammonia || p == Process::coal_methanol;
}

bool GeoPoint::valid() const {
  return std::isfinite(latitude) && std::isfinite(longitude) &&
         latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 &&
         longitude <= 180.0;
}

double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double phi1 = a.latitude * kDeg;
  const double phi2 = b.latitude * kDeg;
  const double dphi = phi2 - phi1;
  const double dlambda = (b.longitude - a.longitude) * kDeg;
  const double h = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(phi1) * std::cos(phi2) * std::sin(dlambda / 2) *
                       std::sin(dlambda / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace chemdecarb
