#pragma once

#include <string>
#include <vector>

namespace jpi::recipes {

/// Names of the bundled figure-reproduction configurations.
std::vector<std::string> names();

/// JSON text of a bundled configuration; throws ConfigError for unknown names.
const std::string& get(const std::string& name);

}  // namespace jpi::recipes
