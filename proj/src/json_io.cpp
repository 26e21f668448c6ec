#include "lanedac/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lanedac {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError(path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line:column.
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(source + ":" + std::to_string(line) + ":" + std::to_string(col) +
                ": invalid JSON");
  }
}

Json read_json_file(const fs::path& path) {
  return parse_json(read_text_file(path), path.string());
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write file: " + tmp.string());
    out << content;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

Json points_to_json(std::span<const Point2> points) {
  Json arr = Json::array();
  for (const Point2& p : points) arr.push_back({p.x, p.y});
  return arr;
}

std::vector<Point2> points_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw Error(what + ": expected an array of [x, y] pairs");
  std::vector<Point2> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& p = j[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(what + ": point " + std::to_string(i) + " is not an [x, y] pair");
    }
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  return pts;
}

Json lane_graph_to_json(const LaneGraph& graph) {
  Json segs = Json::array();
  for (const auto& [id, seg] : graph.segments()) {
    segs.push_back({{"id", id},
                    {"centerline", points_to_json(seg.centerline.points())},
                    {"successors", seg.successors},
                    {"predecessors", seg.predecessors}});
  }
  return Json{{"segments", segs}};
}

LaneGraph lane_graph_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("segments") || !j["segments"].is_array()) {
    throw Error("lane graph: expected an object with a 'segments' array");
  }
  std::vector<LaneSegment> segs;
  for (std::size_t i = 0; i < j["segments"].size(); ++i) {
    const Json& s = j["segments"][i];
    const std::string where = "lane graph segment " + std::to_string(i);
    LaneSegment seg{get_field<std::string>(s, "id", where),
                    Polyline({{0.0, 0.0}, {1.0, 0.0}}),
                    {},
                    {}};
    const std::string named = "lane segment '" + seg.id + "'";
    try {
      seg.centerline = Polyline(points_from_json(s.value("centerline", Json()), named));
    } catch (const Error& e) {
      throw Error(named + ": " + e.what());
    }
    seg.successors = get_field<std::vector<std::string>>(s, "successors", named);
    seg.predecessors = get_field<std::vector<std::string>>(s, "predecessors", named);
    segs.push_back(std::move(seg));
  }
  return LaneGraph(std::move(segs));
}

Json scenario_to_json(const LaneScenario& scenario) {
  Json agents = Json::array();
  for (const LaneAgent& a : scenario.agents) {
    Json nt = Json::array();
    for (const NTCoord& c : a.future_nt) nt.push_back({c.n, c.l});
    agents.push_back({{"past", points_to_json(a.past)},
                      {"future", points_to_json(a.future)},
                      {"branch_id", a.branch_id},
                      {"chain", a.chain},
                      {"future_nt", nt},
                      {"speed", a.speed},
                      {"acceleration", a.acceleration}});
  }
  return Json{{"graph", lane_graph_to_json(scenario.graph)}, {"agents", agents}};
}

LaneScenario scenario_from_json(const Json& j) {
  if (!j.is_object()) throw Error("scenario: expected an object");
  LaneScenario sc{lane_graph_from_json(j.value("graph", Json())), {}};
  const Json agents = j.value("agents", Json::array());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Json& a = agents[i];
    const std::string where = "agent " + std::to_string(i);
    LaneAgent agent;
    agent.past = points_from_json(a.value("past", Json()), where + " past");
    agent.future = points_from_json(a.value("future", Json()), where + " future");
    if (agent.past.size() < 2) throw Error(where + ": past needs at least two points");
    agent.branch_id = a.value("branch_id", std::string());
    agent.chain = a.value("chain", std::vector<std::string>{});
    for (const Point2& p : points_from_json(a.value("future_nt", Json::array()), where)) {
      agent.future_nt.push_back({p.x, p.y});
    }
    agent.speed = a.value("speed", 0.0);
    agent.acceleration = a.value("acceleration", 0.0);
    sc.agents.push_back(std::move(agent));
  }
  return sc;
}

Json mlp_to_json(const Mlp& net) {
  const auto p = net.parameters();
  return Json{{"layer_sizes", net.layer_sizes()},
              {"parameters", std::vector<double>(p.begin(), p.end())}};
}

Mlp mlp_from_json(const Json& j) {
  const auto sizes = get_field<std::vector<std::size_t>>(j, "layer_sizes", "checkpoint");
  const auto params = get_field<std::vector<double>>(j, "parameters", "checkpoint");
  if (sizes.size() < 2) throw Error("checkpoint: need at least two layer sizes");
  Mlp net(sizes);
  if (params.size() != net.parameter_count()) {
    throw Error("checkpoint: expected " + std::to_string(net.parameter_count()) +
                " parameters for the layer sizes, found " + std::to_string(params.size()));
  }
  std::copy(params.begin(), params.end(), net.parameters().begin());
  return net;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

Json optional_number(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

double number_or_nan(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return MetricReport::kNone;
  return j[key].get<double>();
}

}  // namespace

Json report_to_json(const MetricReport& r) {
  return Json{{"experiment", r.experiment},
              {"variant", r.variant},
              {"strategy", r.strategy},
              {"seed", r.seed},
              {"samples", r.samples},
              {"oracle_fde", optional_number(r.oracle_fde)},
              {"emd", optional_number(r.emd)},
              {"made", optional_number(r.made)},
              {"mfde", optional_number(r.mfde)},
              {"miss_rate", optional_number(r.miss_rate)},
              {"miss_threshold", optional_number(r.miss_threshold)},
              {"m_sel", r.m_sel},
              {"offroad_rate", optional_number(r.offroad_rate)},
              {"spurious_count", optional_number(r.spurious_count)}};
}

MetricReport report_from_json(const Json& j) {
  MetricReport r;
  r.experiment = get_field<std::string>(j, "experiment", "report");
  r.variant = get_field<std::string>(j, "variant", "report");
  r.strategy = get_field<std::string>(j, "strategy", "report");
  r.seed = get_field<std::uint64_t>(j, "seed", "report");
  r.samples = get_field<std::size_t>(j, "samples", "report");
  r.oracle_fde = number_or_nan(j, "oracle_fde");
  r.emd = number_or_nan(j, "emd");
  r.made = number_or_nan(j, "made");
  r.mfde = number_or_nan(j, "mfde");
  r.miss_rate = number_or_nan(j, "miss_rate");
  r.miss_threshold = number_or_nan(j, "miss_threshold");
  r.m_sel = j.value("m_sel", std::size_t{0});
  r.offroad_rate = number_or_nan(j, "offroad_rate");
  r.spurious_count = number_or_nan(j, "spurious_count");
  return r;
}

std::string metrics_csv_header() {
  return "experiment,variant,strategy,seed,samples,oracle_fde,emd,made,mfde,miss_rate,"
         "miss_threshold,m_sel,offroad_rate,spurious_count";
}

std::string metrics_csv_row(const MetricReport& r) {
  std::string s = r.experiment + "," + r.variant + "," + r.strategy + "," +
                  std::to_string(r.seed) + "," + std::to_string(r.samples);
  for (double v : {r.oracle_fde, r.emd, r.made, r.mfde, r.miss_rate, r.miss_threshold}) {
    s += "," + format_double(v);
  }
  s += "," + (r.m_sel == 0 ? std::string() : std::to_string(r.m_sel));
  s += "," + format_double(r.offroad_rate) + "," + format_double(r.spurious_count);
  return s;
}

std::string metrics_csv(std::span<const MetricReport> rows) {
  std::string out = metrics_csv_header() + "\n";
  for (const auto& r : rows) out += metrics_csv_row(r) + "\n";
  return out;
}

}  // namespace lanedac
