#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace cobra {

/// Files compiled into the library from core/assets, by relative path
/// (e.g. "reference.conf", "client/cobra.js").
std::optional<std::string_view> embedded_asset(std::string_view name);
std::vector<std::string_view> embedded_asset_names();

}  // namespace cobra
