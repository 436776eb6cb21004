#pragma once

#include <string_view>
#include <vector>

namespace chemdecarb::defaults {

// Text of the embedded data/config/<name>.json. Throws ConfigError for an
// unknown name.
std::string_view text(std::string_view name);
std::vector<std::string_view> names();

}  // namespace chemdecarb::defaults
