#include "jpi/recipes.hpp"

#include <utility>

#include "jpi/errors.hpp"

namespace jpi::recipes {

namespace detail {
const std::vector<std::pair<std::string, std::string>>& table();
}

std::vector<std::string> names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : detail::table()) out.push_back(name);
    return out;
}

const std::string& get(const std::string& name) {
    for (const auto& [n, text] : detail::table())
        if (n == name) return text;
    std::string list;
    for (const auto& n : names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("recipe", "unknown recipe '" + name + "'; available: " + list);
}

}  // namespace jpi::recipes
