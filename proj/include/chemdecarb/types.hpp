#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chemdecarb {

inline constexpr int kBaseYear = 2023;
inline constexpr int kHorizonYear = 2080;

// Thrown for malformed or inconsistent inputs (files, configs, parameters).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A required column is missing or an unexpected one is present.
class SchemaError : public InputError {
 public:
  SchemaError(const std::string& column, const std::string& what)
      : InputError(what), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

// A configuration file or override tree is invalid.
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

// A planning request cannot be met (e.g. deadline earlier than feasible).
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, int earliest_feasible)
      : std::runtime_error(what), earliest_(earliest_feasible) {}
  int earliest_feasible_year() const noexcept { return earliest_; }

 private:
  int earliest_;
};

// Every storage site in reach is at its injection limit.
class StorageExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Region { NorthAmerica, Europe, MiddleEast, China };
inline constexpr std::array kRegions{Region::NorthAmerica, Region::Europe,
                                     Region::MiddleEast, Region::China};

enum class Chemical {
  ethylene,
  propylene,
  benzene,
  butadiene,
  toluene,
  xylene,
  ammonia,
  methanol,
  chlor_alkali
};
inline constexpr std::array kChemicals{
    Chemical::ethylene, Chemical::propylene, Chemical::benzene,
    Chemical::butadiene, Chemical::toluene,  Chemical::xylene,
    Chemical::ammonia,  Chemical::methanol,  Chemical::chlor_alkali};

enum class Process {
  steam_cracker,
  on_purpose_propylene,
  aromatics_extraction,
  smr_ammonia,
  coal_ammonia,
  smr_methanol,
  coal_methanol,
  electrolysis_chlor_alkali
};
inline constexpr std::array kProcesses{
    Process::steam_cracker,   Process::on_purpose_propylene,
    Process::aromatics_extraction, Process::smr_ammonia,
    Process::coal_ammonia,    Process::smr_methanol,
    Process::coal_methanol,   Process::electrolysis_chlor_alkali};

enum class Feedstock {
  ethane,
  propane,
  naphtha,
  lpg,
  natural_gas,
  coal,
  reformate,
  salt
};
inline constexpr std::array kFeedstocks{
    Feedstock::ethane,      Feedstock::propane, Feedstock::naphtha,
    Feedstock::lpg,         Feedstock::natural_gas, Feedstock::coal,
    Feedstock::reformate,   Feedstock::salt};

// Capital-planning groups (one row each in the capital summary).
enum class Group {
  steam_crackers,
  on_purpose_propylene,
  aromatics,
  methanol,
  ammonia,
  chlor_alkali
};
inline constexpr std::array kGroups{Group::steam_crackers,
                                    Group::on_purpose_propylene,
                                    Group::aromatics, Group::methanol,
                                    Group::ammonia, Group::chlor_alkali};

enum class BuildType { retrofit, newbuild };

enum class TechId {
  ccs_postcombustion,
  ccs_process_co2,
  blue_h2,
  green_h2,
  electrified_cracker,
  ccu_methanol,
  bio_syngas_methanol,
  bio_ethylene,
  circular_pyoil
};
inline constexpr std::array kTechs{
    TechId::ccs_postcombustion, TechId::ccs_process_co2, TechId::blue_h2,
    TechId::green_h2,           TechId::electrified_cracker,
    TechId::ccu_methanol,       TechId::bio_syngas_methanol,
    TechId::bio_ethylene,       TechId::circular_pyoil};

std::string_view to_string(Region);
std::string_view region_code(Region);  // NA, EU, ME, CN
std::string_view to_string(Chemical);
std::string_view to_string(Process);
std::string_view to_string(Feedstock);
std::string_view to_string(Group);
std::string_view to_string(BuildType);
std::string_view to_string(TechId);

std::optional<Region> parse_region(std::string_view);
std::optional<Chemical> parse_chemical(std::string_view);
std::optional<Process> parse_process(std::string_view);
std::optional<Feedstock> parse_feedstock(std::string_view);
std::optional<Group> parse_group(std::string_view);
std::optional<BuildType> parse_build_type(std::string_view);
std::optional<TechId> parse_tech(std::string_view);

// Throwing variants for config parsing; `what` names the field.
Region region_from(std::string_view s, std::string_view what = "region");
Chemical chemical_from(std::string_view s, std::string_view what = "chemical");
Process process_from(std::string_view s, std::string_view what = "process");
Feedstock feedstock_from(std::string_view s,
                         std::string_view what = "feedstock");
Group group_from(std::string_view s, std::string_view what = "group");
TechId tech_from(std::string_view s, std::string_view what = "tech");

Group group_of(Process p);
bool is_coal_fired(Process p);

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;
  bool valid() const;
};

// Great-circle distance on a spherical Earth (R = 6371 km).
double great_circle_km(const GeoPoint& a, const GeoPoint& b);

}  // namespace chemdecarb
