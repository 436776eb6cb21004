#include "chemdecarb/json_util.hpp"

#include <algorithm>
#include <fstream>

#include "chemdecarb/types.hpp"

namespace chemdecarb::json_util {

void check_keys(const nlohmann::json& j,
                std::initializer_list<std::string_view> allowed,
                std::string_view context) {
  if (!j.is_object())
    throw ConfigError(std::string(context) + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!key.empty() && key.front() == '_') continue;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(std::string(context) + ": unknown key '" + key + "'");
  }
}

nlohmann::json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

nlohmann::json parse(std::string_view text, std::string_view name) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  }
}

nlohmann::json strip_docs(const nlohmann::json& j) {
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items())
      if (k.empty() || k.front() != '_') out[k] = strip_docs(v);
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(strip_docs(v));
    return out;
  }
  return j;
}

}  // namespace chemdecarb::json_util
