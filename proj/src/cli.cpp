#include "lanedac/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "lanedac/config.hpp"
#include "lanedac/experiments.hpp"
#include "lanedac/json_io.hpp"

#ifndef LANEDAC_GIT_DESCRIBE
#define LANEDAC_GIT_DESCRIBE "unknown"
#endif

namespace lanedac {

namespace fs = std::filesystem;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> objective;
  std::optional<std::size_t> hypotheses;
  std::optional<std::size_t> split_interval;
  std::optional<double> eps;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> steps;
  std::optional<double> filter_bad_anchors;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config (flags override it)");
  cmd->add_option("--objective", o.objective, "wta, rwta, ewta or dac");
  cmd->add_option("--hypotheses", o.hypotheses, "number of hypotheses M");
  cmd->add_option("--split-interval", o.split_interval, "iterations per DAC split / EWTA halving");
  cmd->add_option("--eps", o.eps, "RWTA residual weight");
  cmd->add_option("--lambda1", o.lambda1, "weight of the nt consistency term");
  cmd->add_option("--lambda2", o.lambda2, "weight of the xy consistency term");
  cmd->add_option("--seed", o.seed, "run a single seed instead of the config's list");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--steps", o.steps, "training steps / iterations");
  cmd->add_option("--filter-bad-anchors", o.filter_bad_anchors,
                  "drop samples whose past is farther than this from the best anchor (m)");
}

enum class Command { kToy, kCpi, kLanes, kOther };

ExperimentConfig load_config(const Overrides& o, Command cmd) {
  ExperimentConfig c;
  if (!o.config_path.empty()) c = config_from_json(read_json_file(o.config_path));
  if (o.objective) {
    c.objective = parse_objective(*o.objective);
    if (cmd == Command::kToy) c.toy.variants = {c.objective};
    if (cmd == Command::kCpi) c.cpi.variants = {c.objective};
  }
  if (o.hypotheses) {
    c.toy.hypotheses = *o.hypotheses;
    c.cpi.hypotheses = *o.hypotheses;
    c.lanes.hypotheses = *o.hypotheses;
    c.lanes.m_sel = std::min(c.lanes.m_sel, *o.hypotheses);
  }
  if (o.split_interval) c.split_interval = *o.split_interval;
  if (o.eps) c.eps = *o.eps;
  if (o.lambda1) c.lanes.lambda1 = *o.lambda1;
  if (o.lambda2) c.lanes.lambda2 = *o.lambda2;
  if (o.seed) c.seeds = {*o.seed};
  if (o.out) c.out = *o.out;
  if (o.steps) {
    if (cmd == Command::kToy) c.toy.steps = *o.steps;
    if (cmd == Command::kCpi) c.cpi.iterations = *o.steps;
    if (cmd == Command::kLanes) c.lanes.iterations = *o.steps;
  }
  if (o.filter_bad_anchors) c.lanes.filter_bad_anchors = *o.filter_bad_anchors;
  validate(c);
  return c;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Run {
 public:
  Run(std::string command, fs::path out) : command_(std::move(command)), out_(std::move(out)) {
    start_ = std::chrono::steady_clock::now();
    started_at_ = utc_now();
  }

  const fs::path& out() const { return out_; }
  void add(const MetricReport& r) { rows_.push_back(r); }
  void detail(Json d) { details_.push_back(std::move(d)); }

  // metrics.csv and report.json hold only deterministic content; timing
  // and provenance live in manifest.json.
  void finish(const std::string& config_hash, const Json& config,
              const std::vector<std::uint64_t>& seeds) {
    write_file_atomic(out_ / "metrics.csv", metrics_csv(rows_));
    Json rows = Json::array();
    for (const auto& r : rows_) rows.push_back(report_to_json(r));
    write_file_atomic(out_ / "report.json",
                      Json{{"command", command_}, {"rows", rows}, {"details", details_}}.dump(2) +
                          "\n");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    Json manifest{{"command", command_},
                  {"config_hash", config_hash},
                  {"config", config},
                  {"seeds", seeds},
                  {"git_describe", LANEDAC_GIT_DESCRIBE},
                  {"started_at", started_at_},
                  {"wall_clock_seconds", secs},
                  {"results", rows}};
    write_file_atomic(out_ / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  std::string command_;
  fs::path out_;
  std::chrono::steady_clock::time_point start_;
  std::string started_at_;
  std::vector<MetricReport> rows_;
  Json details_ = Json::array();
};

void cmd_fit_toy(const ExperimentConfig& c, std::ostream& log) {
  Run run("fit-toy", c.out);
  for (std::uint64_t seed : c.seeds) {
    const ToyRun toy = run_toy(c, seed);
    for (const auto& v : toy.variants) {
      run.add(v.report);
      run.detail({{"variant", v.report.variant},
                  {"seed", seed},
                  {"initial", toy.initial.values},
                  {"hypotheses", v.fit.params.values},
                  {"wins", v.fit.wins},
                  {"recent_wins", v.fit.recent_wins}});
      const std::string name = "toy_" + v.report.variant + "_seed" + std::to_string(seed) + ".svg";
      write_file_atomic(run.out() / name, toy_svg(toy, v));
      log << "toy " << v.report.variant << " seed " << seed << ": oracle_fde "
          << format_double(v.report.oracle_fde) << " emd " << format_double(v.report.emd)
          << " spurious " << format_double(v.report.spurious_count) << "\n";
    }
  }
  run.finish(config_hash(c), config_to_json(c), c.seeds);
}

void cmd_train_cpi(const ExperimentConfig& c, std::ostream& log) {
  Run run("train-cpi", c.out);
  for (std::uint64_t seed : c.seeds) {
    for (const auto& v : run_cpi(c, seed)) {
      run.add(v.report);
      run.detail({{"variant", v.report.variant},
                  {"seed", seed},
                  {"sigma", v.sigma},
                  {"heldout_log_likelihood", v.heldout_log_likelihood}});
      log << "cpi " << v.report.variant << " seed " << seed << ": oracle_fde "
          << format_double(v.report.oracle_fde) << " emd " << format_double(v.report.emd)
          << "\n";
    }
  }
  run.finish(config_hash(c), config_to_json(c), c.seeds);
}

void cmd_train_lanes(const ExperimentConfig& c, std::ostream& log) {
  Run run("train-lanes", c.out);
  for (std::uint64_t seed : c.seeds) {
    const LanesRun lr = run_lanes(c, seed);
    const std::string suffix = "_seed" + std::to_string(seed) + ".json";
    write_file_atomic(run.out() / ("test" + suffix), lane_dataset_to_json(lr.test).dump() + "\n");
    for (const auto& cell : lr.cells) {
      write_file_atomic(run.out() / "checkpoints" / (cell.checkpoint.cell + suffix),
                        checkpoint_to_json(cell.checkpoint).dump() + "\n");
      const auto& last = cell.curves.curves.back();
      run.detail({{"cell", cell.checkpoint.cell}, {"seed", seed}, {"final_loss", last}});
    }
    for (const auto& r : lr.rows) {
      run.add(r);
      log << "lanes " << r.variant << " " << r.strategy << " seed " << seed << ": made "
          << format_double(r.made) << " mfde " << format_double(r.mfde) << " miss "
          << format_double(r.miss_rate) << " offroad " << format_double(r.offroad_rate) << "\n";
    }
    if (!lr.test.scenarios.empty()) {
      write_file_atomic(run.out() / ("scenario" + std::string("_seed") + std::to_string(seed) +
                                     ".svg"),
                        lane_svg(lr.test.scenarios.front(), &lr.cells.back().checkpoint));
    }
  }
  run.finish(config_hash(c), config_to_json(c), c.seeds);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-hypothesis trajectory prediction experiments", "lanedac"};
  app.require_subcommand(1);

  Overrides o;
  auto* toy = app.add_subcommand("fit-toy", "fit unconditional hypotheses on the 4-mode fixture");
  add_common(toy, o);
  auto* cpi = app.add_subcommand("train-cpi", "two-stage model on car-pedestrian scenes");
  add_common(cpi, o);
  auto* lanes = app.add_subcommand("train-lanes", "lane-anchored ablation grid");
  add_common(lanes, o);

  std::string checkpoint, dataset;
  std::string eval_out = "out";
  std::optional<double> eval_filter;
  auto* eval = app.add_subcommand("eval", "re-evaluate a lane checkpoint on a dataset");
  eval->add_option("--checkpoint", checkpoint, "checkpoint JSON")->required();
  eval->add_option("--dataset", dataset, "lane dataset JSON")->required();
  eval->add_option("--out", eval_out, "output directory");
  eval->add_option("--filter-bad-anchors", eval_filter, "bad-anchor threshold (m)");

  std::string plot_dataset, plot_checkpoint;
  std::string plot_out = "out";
  std::size_t plot_scenario = 0;
  auto* plot = app.add_subcommand("plot", "draw a lane scenario (and predictions) as SVG");
  plot->add_option("--dataset", plot_dataset, "lane dataset JSON")->required();
  plot->add_option("--checkpoint", plot_checkpoint, "optional checkpoint for predictions");
  plot->add_option("--scenario", plot_scenario, "scenario index");
  plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (toy->parsed()) {
      cmd_fit_toy(load_config(o, Command::kToy), out);
    } else if (cpi->parsed()) {
      cmd_train_cpi(load_config(o, Command::kCpi), out);
    } else if (lanes->parsed()) {
      cmd_train_lanes(load_config(o, Command::kLanes), out);
    } else if (eval->parsed()) {
      const LaneCheckpoint ckpt = checkpoint_from_json(read_json_file(checkpoint));
      const LaneDataset data = lane_dataset_from_json(read_json_file(dataset));
      const double filter = eval_filter ? *eval_filter : ckpt.config.lanes.filter_bad_anchors;
      if (filter < 0.0) throw Error("--filter-bad-anchors must be >= 0");
      Run run("eval", eval_out);
      for (const auto& r : evaluate_lanes(ckpt, data, filter)) {
        run.add(r);
        out << "eval " << r.variant << " " << r.strategy << ": samples " << r.samples
            << " made " << format_double(r.made) << " mfde " << format_double(r.mfde) << "\n";
      }
      run.finish(config_hash(ckpt.config), config_to_json(ckpt.config), {ckpt.seed});
    } else if (plot->parsed()) {
      const LaneDataset data = lane_dataset_from_json(read_json_file(plot_dataset));
      if (plot_scenario >= data.scenarios.size()) {
        throw Error("--scenario " + std::to_string(plot_scenario) + " out of range (dataset has " +
                    std::to_string(data.scenarios.size()) + ")");
      }
      std::optional<LaneCheckpoint> ckpt;
      if (!plot_checkpoint.empty()) ckpt = checkpoint_from_json(read_json_file(plot_checkpoint));
      Run run("plot", plot_out);
      const std::string name = "scenario_" + std::to_string(plot_scenario) + ".svg";
      write_file_atomic(run.out() / name,
                        lane_svg(data.scenarios[plot_scenario], ckpt ? &*ckpt : nullptr));
      out << "wrote " << (run.out() / name).string() << "\n";
      const ExperimentConfig cfg = ckpt ? ckpt->config : ExperimentConfig{};
      run.finish(config_hash(cfg), config_to_json(cfg), cfg.seeds);
    }
  } catch (const FileNotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lanedac
