#pragma once

#include <filesystem>
#include <initializer_list>
#include <string_view>

#include <nlohmann/json.hpp>

namespace chemdecarb::json_util {

// Rejects keys outside `allowed`. Keys starting with '_' are documentation
// and always accepted.
void check_keys(const nlohmann::json& j,
                std::initializer_list<std::string_view> allowed,
                std::string_view context);

// Parses a JSON file; throws ConfigError naming the path on failure.
nlohmann::json read_file(const std::filesystem::path& path);

// Parses an in-memory document (used for the embedded defaults).
nlohmann::json parse(std::string_view text, std::string_view name);

// Drops documentation keys ('_'-prefixed) recursively.
nlohmann::json strip_docs(const nlohmann::json& j);

}  // namespace chemdecarb::json_util
