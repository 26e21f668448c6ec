#include "lanedac/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <set>

namespace lanedac {

namespace {

// Reads fields of one JSON object, remembering which keys were used so the
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw Error("config: '" + display() + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error("config: '" + child(key) + "' has the wrong type");
    }
  }

  void read(const char* key, Objective& out) {
    std::string name(to_string(out));
    read(key, name);
    out = parse(key, name);
  }

  void read(const char* key, std::vector<Objective>& out) {
    std::vector<std::string> names;
    for (Objective o : out) names.emplace_back(to_string(o));
    read(key, names);
    out.clear();
    for (const auto& n : names) out.push_back(parse(key, n));
  }

  // Sub-object; absent keys read as an empty object.
  Reader section(const char* key) {
    used_.insert(key);
    static const Json empty = Json::object();
    return Reader(j_.contains(key) ? j_.at(key) : empty, child(key));
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw Error("config: unknown key '" + child(k) + "'");
    }
  }

 private:
  std::string display() const { return path_.empty() ? "<root>" : path_; }
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  Objective parse(const char* key, const std::string& name) const {
    try {
      return parse_objective(name);
    } catch (const Error&) {
      throw Error("config: '" + child(key) + "' has unknown objective '" + name + "'");
    }
  }

  const Json& j_;
  std::string path_;
  std::set<std::string, std::less<>> used_;
};

void read_scene(Reader r, CpiConfig& c) {
  r.read("observed_steps", c.observed_steps);
  r.read("dt", c.dt);
  r.read("goal_horizon", c.goal_horizon);
  r.read("crossing", c.crossing);
  r.read("p_pass_wait", c.p_pass_wait);
  r.read("p_yield_cross", c.p_yield_cross);
  r.read("p_pass_cross", c.p_pass_cross);
  r.read("p_yield_wait", c.p_yield_wait);
  r.read("goal_sigma", c.goal_sigma);
  r.read("car_x_min", c.car_x_min);
  r.read("car_x_max", c.car_x_max);
  r.read("car_speed_min", c.car_speed_min);
  r.read("car_speed_max", c.car_speed_max);
  r.read("ped_y_min", c.ped_y_min);
  r.read("ped_y_max", c.ped_y_max);
  r.read("stop_line_x", c.stop_line_x);
  r.read("ped_far_side_y", c.ped_far_side_y);
  r.finish();
}

Json write_scene(const CpiConfig& c) {
  return Json{{"observed_steps", c.observed_steps}, {"dt", c.dt},
              {"goal_horizon", c.goal_horizon},     {"crossing", c.crossing},
              {"p_pass_wait", c.p_pass_wait},       {"p_yield_cross", c.p_yield_cross},
              {"p_pass_cross", c.p_pass_cross},     {"p_yield_wait", c.p_yield_wait},
              {"goal_sigma", c.goal_sigma},         {"car_x_min", c.car_x_min},
              {"car_x_max", c.car_x_max},           {"car_speed_min", c.car_speed_min},
              {"car_speed_max", c.car_speed_max},   {"ped_y_min", c.ped_y_min},
              {"ped_y_max", c.ped_y_max},           {"stop_line_x", c.stop_line_x},
              {"ped_far_side_y", c.ped_far_side_y}};
}

void read_scenario(Reader r, LaneScenarioConfig& c) {
  r.read("branches", c.branches);
  r.read("merge", c.merge);
  r.read("min_radius", c.min_radius);
  r.read("max_radius", c.max_radius);
  r.read("min_turn", c.min_turn);
  r.read("max_turn", c.max_turn);
  r.read("branch_probabilities", c.branch_probabilities);
  r.read("agents", c.agents);
  r.read("observed_steps", c.observed_steps);
  r.read("future_steps", c.future_steps);
  r.read("dt", c.dt);
  r.read("min_speed", c.min_speed);
  r.read("max_speed", c.max_speed);
  r.read("accelerations", c.accelerations);
  r.read("acceleration_probabilities", c.acceleration_probabilities);
  r.read("noise_sigma", c.noise_sigma);
  r.read("corridor_halfwidth", c.corridor_halfwidth);
  r.read("point_spacing", c.point_spacing);
  r.finish();
}

Json write_scenario(const LaneScenarioConfig& c) {
  return Json{{"branches", c.branches},
              {"merge", c.merge},
              {"min_radius", c.min_radius},
              {"max_radius", c.max_radius},
              {"min_turn", c.min_turn},
              {"max_turn", c.max_turn},
              {"branch_probabilities", c.branch_probabilities},
              {"agents", c.agents},
              {"observed_steps", c.observed_steps},
              {"future_steps", c.future_steps},
              {"dt", c.dt},
              {"min_speed", c.min_speed},
              {"max_speed", c.max_speed},
              {"accelerations", c.accelerations},
              {"acceleration_probabilities", c.acceleration_probabilities},
              {"noise_sigma", c.noise_sigma},
              {"corridor_halfwidth", c.corridor_halfwidth},
              {"point_spacing", c.point_spacing}};
}

std::vector<std::string> objective_names(const std::vector<Objective>& v) {
  std::vector<std::string> out;
  for (Objective o : v) out.emplace_back(to_string(o));
  return out;
}

}  // namespace

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  Reader root(j, "");
  root.read("objective", c.objective);
  root.read("eps", c.eps);
  root.read("split_interval", c.split_interval);
  root.read("seeds", c.seeds);
  root.read("out", c.out);
  {
    Reader r = root.section("toy");
    ToyConfig& t = c.toy;
    r.read("variants", t.variants);
    r.read("hypotheses", t.hypotheses);
    r.read("steps", t.steps);
    r.read("lr", t.lr);
    r.read("mode_spacing", t.mode_spacing);
    r.read("mode_sigma", t.mode_sigma);
    r.read("init_spread", t.init_spread);
    r.read("eval_samples", t.eval_samples);
    r.read("emd_samples", t.emd_samples);
    r.read("tau", t.tau);
    r.finish();
  }
  {
    Reader r = root.section("cpi");
    CpiExperimentConfig& t = c.cpi;
    r.read("variants", t.variants);
    r.read("hypotheses", t.hypotheses);
    r.read("hidden", t.hidden);
    r.read("train_scenes", t.train_scenes);
    r.read("iterations", t.iterations);
    r.read("batch_size", t.batch_size);
    r.read("lr", t.lr);
    r.read("stage2_iterations", t.stage2_iterations);
    r.read("stage2_lr", t.stage2_lr);
    r.read("test_scenes", t.test_scenes);
    r.read("gt_samples", t.gt_samples);
    r.read("heldout_scenes", t.heldout_scenes);
    read_scene(r.section("scene"), t.scene);
    r.finish();
  }
  {
    Reader r = root.section("lanes");
    LanesExperimentConfig& t = c.lanes;
    r.read("cells", t.cells);
    r.read("hypotheses", t.hypotheses);
    r.read("hidden", t.hidden);
    r.read("train_scenarios", t.train_scenarios);
    r.read("test_scenarios", t.test_scenarios);
    r.read("iterations", t.iterations);
    r.read("batch_size", t.batch_size);
    r.read("lr", t.lr);
    r.read("lambda1", t.lambda1);
    r.read("lambda2", t.lambda2);
    r.read("m_sel", t.m_sel);
    r.read("top_anchors", t.top_anchors);
    r.read("miss_threshold", t.miss_threshold);
    r.read("corridor_halfwidth", t.corridor_halfwidth);
    r.read("filter_bad_anchors", t.filter_bad_anchors);
    read_scenario(r.section("scenario"), t.scenario);
    {
      Reader q = r.section("retrieval");
      q.read("radius", t.retrieval.radius);
      q.read("ahead", t.retrieval.ahead);
      q.read("behind", t.retrieval.behind);
      q.read("lookahead_tol", t.retrieval.lookahead_tol);
      q.read("horizon", t.retrieval.horizon);
      q.finish();
    }
    {
      Reader q = r.section("encoding");
      q.read("anchor_points", t.encoding.anchor_points);
      q.read("anchor_behind", t.encoding.anchor_behind);
      q.read("anchor_ahead", t.encoding.anchor_ahead);
      q.read("scale", t.encoding.scale);
      q.finish();
    }
    r.finish();
  }
  root.finish();
  validate(c);
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  const ToyConfig& t = c.toy;
  const CpiExperimentConfig& p = c.cpi;
  const LanesExperimentConfig& l = c.lanes;
  return Json{
      {"objective", std::string(to_string(c.objective))},
      {"eps", c.eps},
      {"split_interval", c.split_interval},
      {"seeds", c.seeds},
      {"out", c.out},
      {"toy",
       {{"variants", objective_names(t.variants)},
        {"hypotheses", t.hypotheses},
        {"steps", t.steps},
        {"lr", t.lr},
        {"mode_spacing", t.mode_spacing},
        {"mode_sigma", t.mode_sigma},
        {"init_spread", t.init_spread},
        {"eval_samples", t.eval_samples},
        {"emd_samples", t.emd_samples},
        {"tau", t.tau}}},
      {"cpi",
       {{"variants", objective_names(p.variants)},
        {"hypotheses", p.hypotheses},
        {"hidden", p.hidden},
        {"train_scenes", p.train_scenes},
        {"iterations", p.iterations},
        {"batch_size", p.batch_size},
        {"lr", p.lr},
        {"stage2_iterations", p.stage2_iterations},
        {"stage2_lr", p.stage2_lr},
        {"test_scenes", p.test_scenes},
        {"gt_samples", p.gt_samples},
        {"heldout_scenes", p.heldout_scenes},
        {"scene", write_scene(p.scene)}}},
      {"lanes",
       {{"cells", l.cells},
        {"hypotheses", l.hypotheses},
        {"hidden", l.hidden},
        {"train_scenarios", l.train_scenarios},
        {"test_scenarios", l.test_scenarios},
        {"iterations", l.iterations},
        {"batch_size", l.batch_size},
        {"lr", l.lr},
        {"lambda1", l.lambda1},
        {"lambda2", l.lambda2},
        {"m_sel", l.m_sel},
        {"top_anchors", l.top_anchors},
        {"miss_threshold", l.miss_threshold},
        {"corridor_halfwidth", l.corridor_halfwidth},
        {"filter_bad_anchors", l.filter_bad_anchors},
        {"scenario", write_scenario(l.scenario)},
        {"retrieval",
         {{"radius", l.retrieval.radius},
          {"ahead", l.retrieval.ahead},
          {"behind", l.retrieval.behind},
          {"lookahead_tol", l.retrieval.lookahead_tol},
          {"horizon", l.retrieval.horizon}}},
        {"encoding",
         {{"anchor_points", l.encoding.anchor_points},
          {"anchor_behind", l.encoding.anchor_behind},
          {"anchor_ahead", l.encoding.anchor_ahead},
          {"scale", l.encoding.scale}}}}}};
}

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error("config: " + msg);
}

}  // namespace

void validate(const ExperimentConfig& c) {
  require(c.eps >= 0.0 && c.eps < 1.0, "eps must lie in [0, 1)");
  require(c.split_interval >= 1, "split_interval must be >= 1");
  require(!c.seeds.empty(), "seeds must not be empty");
  require(!c.out.empty(), "out must not be empty");

  const ToyConfig& t = c.toy;
  require(!t.variants.empty(), "toy.variants must not be empty");
  require(t.hypotheses >= 1, "toy.hypotheses must be >= 1");
  require(t.lr >= 0.0, "toy.lr must be >= 0");
  require(t.mode_sigma > 0.0, "toy.mode_sigma must be > 0");
  require(t.init_spread >= 0.0, "toy.init_spread must be >= 0");
  require(t.eval_samples >= 1 && t.emd_samples >= 1, "toy sample counts must be >= 1");
  require(t.tau >= 0.0 && t.tau < 1.0, "toy.tau must lie in [0, 1)");

  const CpiExperimentConfig& p = c.cpi;
  require(!p.variants.empty(), "cpi.variants must not be empty");
  require(p.hypotheses >= 1, "cpi.hypotheses must be >= 1");
  require(p.train_scenes >= 1 && p.test_scenes >= 1 && p.heldout_scenes >= 1,
          "cpi scene counts must be >= 1");
  require(p.gt_samples >= 1, "cpi.gt_samples must be >= 1");
  require(p.batch_size >= 1, "cpi.batch_size must be >= 1");
  require(p.lr >= 0.0 && p.stage2_lr >= 0.0, "cpi learning rates must be >= 0");

  const LanesExperimentConfig& l = c.lanes;
  require(!l.cells.empty(), "lanes.cells must not be empty");
  for (const auto& cell : l.cells) {
    require(cell == "xy" || cell == "nt" || cell == "ntxy" || cell == "ntxy_reg",
            "lanes.cells: unknown cell '" + cell + "'");
  }
  require(l.hypotheses >= 1, "lanes.hypotheses must be >= 1");
  require(l.train_scenarios >= 1 && l.test_scenarios >= 1, "lanes scenario counts must be >= 1");
  require(l.batch_size >= 1, "lanes.batch_size must be >= 1");
  require(l.lr >= 0.0, "lanes.lr must be >= 0");
  require(l.lambda1 >= 0.0 && l.lambda2 >= 0.0, "lambda1 and lambda2 must be >= 0");
  require(l.top_anchors >= 1, "lanes.top_anchors must be >= 1");
  require(l.m_sel >= 1 && l.m_sel <= l.hypotheses, "lanes.m_sel must lie in [1, lanes.hypotheses]");
  require(l.miss_threshold > 0.0, "lanes.miss_threshold must be > 0");
  require(l.corridor_halfwidth > 0.0, "lanes.corridor_halfwidth must be > 0");
  require(l.filter_bad_anchors >= 0.0, "lanes.filter_bad_anchors must be >= 0");
  require(l.encoding.anchor_points >= 2, "lanes.encoding.anchor_points must be >= 2");
  require(l.encoding.scale > 0.0, "lanes.encoding.scale must be > 0");
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string s = config_to_json(c).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

ObjectiveConfig objective_config(const ExperimentConfig& c, Objective o) {
  return ObjectiveConfig{o, c.eps, c.split_interval};
}

}  // namespace lanedac
