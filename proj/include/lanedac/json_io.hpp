#pragma once

// JSON and CSV serialization of lane graphs, scenarios, checkpoints and
// metric reports. Formats are documented in docs/formats.md.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "lanedac/error.hpp"
#include "lanedac/geometry.hpp"
#include "lanedac/lanegraph.hpp"
#include "lanedac/metrics.hpp"
#include "lanedac/mlp.hpp"
#include "lanedac/synthgen.hpp"

namespace lanedac {

using Json = nlohmann::json;

// Input file that does not exist or cannot be opened.
class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& path) : Error("cannot open file: " + path) {}
};

std::string read_text_file(const std::filesystem::path& path);
// Parse errors report the line and column of the offending character.
Json parse_json(const std::string& text, const std::string& source = "<input>");
Json read_json_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

Json points_to_json(std::span<const Point2> points);
std::vector<Point2> points_from_json(const Json& j, const std::string& what);

Json lane_graph_to_json(const LaneGraph& graph);
// Builds and validates the graph; errors name the offending segment.
LaneGraph lane_graph_from_json(const Json& j);

Json scenario_to_json(const LaneScenario& scenario);
LaneScenario scenario_from_json(const Json& j);

// {"layer_sizes": [...], "parameters": [...]}
Json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const Json& j);

// Shortest decimal text that parses back to the same double; NaN -> "".
std::string format_double(double v);

Json report_to_json(const MetricReport& r);
MetricReport report_from_json(const Json& j);

// One header line shared by every subcommand.
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricReport& r);
std::string metrics_csv(std::span<const MetricReport> rows);

// Reads a required field, with a message naming the key on a type mismatch.
template <typename T>
T get_field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(what + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(what + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace lanedac
