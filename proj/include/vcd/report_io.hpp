#pragma once

// CSV trajectories and JSON reports shared by the command-line tool.

#include "vcd/cotangent.hpp"
#include "vcd/moser.hpp"
#include "vcd/numerics.hpp"
#include "vcd/sympl.hpp"
#include "vcd/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace vcd::report {

using Json = nlohmann::json;

constexpr int schema_version = 1;

/// Column names for rows (t, state) in the given chart: t, b, x.., y.. / t, b, q.., p.. / t, b, a, w.
auto trajectory_columns(const ContactChart& chart) -> std::vector<std::string>;
/// Header line plus one line per row, floats with 17 significant digits.
auto trajectory_csv(const numerics::Trajectory& tr, const std::vector<std::string>& columns) -> std::string;

auto moser_json(const moser::MoserRun& run) -> Json;
auto contacto_json(const ContactoReport& r) -> Json;
auto monodromy_json(const cotangent::MonodromyReport& r) -> Json;
auto monodromy_json(const sympl::MonodromyReport& r) -> Json;

/// Pretty-printed with a trailing newline.
auto dump(const Json& j) -> std::string;
/// Writes to a temporary sibling and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace vcd::report
