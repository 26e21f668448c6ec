#include "lanedac/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lanedac/emd.hpp"
#include "lanedac/error.hpp"
#include "lanedac/losses.hpp"
#include "lanedac/mixture.hpp"
#include "lanedac/svg.hpp"

namespace lanedac {

namespace {

// Stream ids for derive_seed; fixed so reports stay reproducible.
enum Stream : std::uint64_t {
  kInit = 1,
  kTrainData = 2,
  kEvalData = 3,
  kHeldoutData = 4,
  kShuffle = 5,
  kStage2 = 6,
  kSamples = 7,
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return MetricReport::kNone;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// Toy

ToyRun run_toy(const ExperimentConfig& config, std::uint64_t seed) {
  const ToyConfig& tc = config.toy;
  ToyRun run;
  run.modes = four_mode_fixture(tc.mode_spacing, tc.mode_sigma);

  SeededRng init_rng(derive_seed(seed, kInit));
  run.initial.dim = 2;
  for (std::size_t i = 0; i < 2 * tc.hypotheses; ++i) {
    run.initial.values.push_back(init_rng.normal(0.0, tc.init_spread));
  }
  SeededRng eval_rng(derive_seed(seed, kEvalData));
  run.eval_samples = sample_multimodal(run.modes, tc.eval_samples, eval_rng);

  const auto modes = run.modes;
  const Sampler sampler = [modes](SeededRng& rng, std::span<double> out) {
    const auto s = sample_multimodal(modes, 1, rng);
    std::copy(s.begin(), s.end(), out.begin());
  };
  const double tau = tc.tau > 0.0 ? tc.tau : 0.1 / static_cast<double>(tc.hypotheses);
  const std::size_t n_emd = std::min(tc.emd_samples, tc.eval_samples);
  const WeightedPoints reference = uniform_points(
      2, std::vector<double>(run.eval_samples.begin(),
                             run.eval_samples.begin() + static_cast<std::ptrdiff_t>(2 * n_emd)));

  for (Objective o : tc.variants) {
    ToyVariantRun v;
    v.objective = o;
    FitConfig fc;
    fc.objective = objective_config(config, o);
    fc.adam.lr = tc.lr;
    fc.steps = tc.steps;
    fc.seed = derive_seed(seed, kTrainData);
    v.fit = fit_unconditional(run.initial, sampler, fc);

    const auto& hyps = v.fit.params.values;
    std::vector<double> fdes;
    for (std::size_t s = 0; s < tc.eval_samples; ++s) {
      fdes.push_back(
          oracle_fde(hyps, std::span<const double>(run.eval_samples).subspan(2 * s, 2)));
    }
    // Win frequencies as mixture weights; uniform before any training.
    std::vector<double> counts(v.fit.recent_wins.begin(), v.fit.recent_wins.end());
    if (std::accumulate(counts.begin(), counts.end(), 0.0) == 0.0) {
      counts.assign(counts.size(), 1.0);
    }
    const MixtureModel mix = mixture_from_counts(hyps, 2, counts, tc.mode_sigma);
    const WeightedPoints predicted{2, hyps, mix.weights};

    MetricReport& r = v.report;
    r.experiment = "toy";
    r.variant = std::string(to_string(o));
    r.seed = seed;
    r.samples = tc.eval_samples;
    r.oracle_fde = mean_of(fdes);
    r.emd = emd(predicted, reference);
    r.spurious_count =
        static_cast<double>(spurious_mode_count(hyps, run.eval_samples, 2, tau));
    run.variants.push_back(std::move(v));
  }
  return run;
}

std::string toy_svg(const ToyRun& run, const ToyVariantRun& variant) {
  SvgPlot plot;
  std::vector<Point2> samples;
  for (std::size_t i = 0; i + 1 < run.eval_samples.size(); i += 2) {
    samples.push_back({run.eval_samples[i], run.eval_samples[i + 1]});
  }
  std::vector<Point2> hyps;
  const auto& h = variant.fit.params.values;
  for (std::size_t i = 0; i + 1 < h.size(); i += 2) hyps.push_back({h[i], h[i + 1]});
  plot.include(samples);
  plot.include(hyps);
  for (const Point2& p : samples) plot.circle(p, 1.5, "#999999", 0.5);
  const double total = static_cast<double>(
      std::accumulate(variant.fit.recent_wins.begin(), variant.fit.recent_wins.end(),
                      std::size_t{0}));
  for (std::size_t m = 0; m < hyps.size(); ++m) {
    const double share =
        total > 0.0 ? static_cast<double>(variant.fit.recent_wins[m]) / total : 0.0;
    plot.circle(hyps[m], 4.0 + 20.0 * std::sqrt(share), kPalette[m % 8], 0.8);
  }
  plot.axes();
  plot.text({50, 30}, variant.report.variant + "  seed " + std::to_string(variant.report.seed));
  return plot.str();
}

// ---------------------------------------------------------------------------
// CPI

namespace {

constexpr double kCpiScale = 10.0;
constexpr std::size_t kGoalDim = 4;

struct CpiData {
  std::vector<CpiScene> scenes;
  std::vector<std::vector<double>> inputs;
  std::vector<std::vector<double>> targets;  // one per scene for training; scaled
};

CpiData make_cpi_data(const CpiConfig& cfg, std::size_t count, std::size_t draws,
                      std::uint64_t seed) {
  CpiData d;
  SeededRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    CpiScene s = gen_cpi(rng, cfg);
    d.inputs.push_back(cpi_input(s, kCpiScale));
    const auto specs = cpi_mode_specs(s);
    d.targets.push_back(sample_multimodal(specs, draws, rng));
    d.scenes.push_back(std::move(s));
  }
  return d;
}

std::vector<double> forward(const Mlp& net, std::span<const double> input) {
  const auto cache = net.forward(input);
  const auto out = cache.output();
  return {out.begin(), out.end()};
}

}  // namespace

std::vector<CpiVariantRun> run_cpi(const ExperimentConfig& config, std::uint64_t seed) {
  const CpiExperimentConfig& cc = config.cpi;
  const std::size_t m = cc.hypotheses;
  const CpiData train = make_cpi_data(cc.scene, cc.train_scenes, 1, derive_seed(seed, kTrainData));
  const CpiData heldout =
      make_cpi_data(cc.scene, cc.heldout_scenes, cc.gt_samples, derive_seed(seed, kHeldoutData));
  const CpiData test =
      make_cpi_data(cc.scene, cc.test_scenes, cc.gt_samples, derive_seed(seed, kEvalData));

  std::vector<std::vector<double>> scaled_targets;
  for (const auto& t : train.targets) {
    std::vector<double> s(t);
    for (double& v : s) v /= kCpiScale;
    scaled_targets.push_back(std::move(s));
  }

  std::vector<std::size_t> sizes1{train.inputs.front().size()};
  sizes1.insert(sizes1.end(), cc.hidden.begin(), cc.hidden.end());
  std::vector<std::size_t> sizes2 = sizes1;
  sizes1.push_back(m * kGoalDim);
  sizes2.push_back(m);

  std::vector<CpiVariantRun> runs;
  for (Objective o : cc.variants) {
    CpiVariantRun v;
    v.objective = o;
    const ObjectiveConfig oc = objective_config(config, o);

    // Stage 1: hypotheses trained with the selected objective.
    SeededRng init_rng(derive_seed(seed, kInit));
    v.stage1 = Mlp::random(sizes1, init_rng);
    TrainConfig tc;
    tc.iterations = cc.iterations;
    tc.batch_size = cc.batch_size;
    tc.adam.lr = cc.lr;
    tc.seed = derive_seed(seed, kShuffle);
    const SampleLoss loss1 = [&](std::size_t idx, std::size_t iter,
                                 std::span<const double> out, std::span<double> g) {
      const auto& y = scaled_targets[idx];
      const auto l2 = per_hypothesis_l2(out, y, kGoalDim);
      const Weights w = variant_weights(oc, l2, iter);
      double total = 0.0;
      for (std::size_t h = 0; h < m; ++h) {
        total += w[h] * l2[h];
        for (std::size_t j = 0; j < kGoalDim; ++j) {
          g[h * kGoalDim + j] = 2.0 * w[h] * (out[h * kGoalDim + j] - y[j]);
        }
      }
      return std::vector<double>{total};
    };
    train_mlp(v.stage1, train.inputs, loss1, tc);

    // Stage 2: soft assignment of each training target to its closest
    // hypothesis of the frozen first stage.
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < train.inputs.size(); ++i) {
      const auto h = forward(v.stage1, train.inputs[i]);
      winners.push_back(argmin_index(per_hypothesis_l2(h, scaled_targets[i], kGoalDim)));
    }
    SeededRng init2(derive_seed(seed, kStage2));
    v.stage2 = Mlp::random(sizes2, init2);
    TrainConfig tc2 = tc;
    tc2.iterations = cc.stage2_iterations;
    tc2.adam.lr = cc.stage2_lr;
    const SampleLoss loss2 = [&](std::size_t idx, std::size_t, std::span<const double> out,
                                 std::span<double> g) {
      const auto p = softmax(out);
      const std::size_t k = winners[idx];
      for (std::size_t h = 0; h < m; ++h) g[h] = p[h] - (h == k ? 1.0 : 0.0);
      return std::vector<double>{-std::log(std::max(p[k], 1e-300))};
    };
    train_mlp(v.stage2, train.inputs, loss2, tc2);

    auto mixture_for = [&](const std::vector<double>& input) {
      auto means = forward(v.stage1, input);
      for (double& x : means) x *= kCpiScale;
      const auto logits = forward(v.stage2, input);
      return mixture_from_logits(std::move(means), kGoalDim, logits, 1.0);
    };

    std::vector<MixtureModel> held_mix;
    for (const auto& in : heldout.inputs) held_mix.push_back(mixture_for(in));
    v.sigma = fit_sigma(held_mix, heldout.targets, SigmaGrid{});
    v.heldout_log_likelihood = 0.0;
    for (std::size_t k = 0; k < held_mix.size(); ++k) {
      held_mix[k].sigma = v.sigma;
      const auto& pts = heldout.targets[k];
      for (std::size_t p = 0; p < pts.size(); p += kGoalDim) {
        v.heldout_log_likelihood +=
            log_likelihood(held_mix[k], std::span<const double>(pts).subspan(p, kGoalDim));
      }
    }

    std::vector<double> fdes, emds;
    for (std::size_t k = 0; k < test.inputs.size(); ++k) {
      const MixtureModel mix = mixture_for(test.inputs[k]);
      const auto& pts = test.targets[k];
      for (std::size_t p = 0; p < pts.size(); p += kGoalDim) {
        fdes.push_back(oracle_fde(mix.means, std::span<const double>(pts).subspan(p, kGoalDim)));
      }
      emds.push_back(emd(WeightedPoints{kGoalDim, mix.means, mix.weights},
                         uniform_points(kGoalDim, pts)));
    }
    MetricReport& r = v.report;
    r.experiment = "cpi";
    r.variant = std::string(to_string(o));
    r.seed = seed;
    r.samples = fdes.size();
    r.oracle_fde = mean_of(fdes);
    r.emd = mean_of(emds);
    runs.push_back(std::move(v));
  }
  return runs;
}

// ---------------------------------------------------------------------------
// Lanes

LaneCell lane_cell(const std::string& name) {
  if (name == "xy") return {name, HeadSet::kXyOnly, false};
  if (name == "nt") return {name, HeadSet::kNtOnly, false};
  if (name == "ntxy") return {name, HeadSet::kNtXy, false};
  if (name == "ntxy_reg") return {name, HeadSet::kNtXy, true};
  throw Error("unknown lane cell '" + name + "'");
}

LaneDataset make_lane_dataset(const LaneScenarioConfig& config, std::size_t count,
                              std::uint64_t seed) {
  LaneDataset d;
  SeededRng rng(seed);
  for (std::size_t i = 0; i < count; ++i) d.scenarios.push_back(gen_lane_scenario(rng, config));
  return d;
}

Json lane_dataset_to_json(const LaneDataset& data) {
  Json arr = Json::array();
  for (const auto& s : data.scenarios) arr.push_back(scenario_to_json(s));
  return Json{{"format", "lanedac-lane-dataset"}, {"version", 1}, {"scenarios", arr}};
}

LaneDataset lane_dataset_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", std::string()) != "lanedac-lane-dataset") {
    throw Error("dataset: not a lane dataset file");
  }
  if (j.value("version", 0) != 1) throw Error("dataset: unsupported version");
  LaneDataset d;
  const Json& arr = j.at("scenarios");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    try {
      d.scenarios.push_back(scenario_from_json(arr[i]));
    } catch (const Error& e) {
      throw Error("dataset scenario " + std::to_string(i) + ": " + e.what());
    }
  }
  return d;
}

Pose agent_pose(std::span<const Point2> past) {
  if (past.size() < 2) throw Error("agent pose needs two observed points");
  const Point2 d = past[past.size() - 1] - past[past.size() - 2];
  return Pose(past.back(), std::atan2(d.y, d.x));
}

double agent_speed(std::span<const Point2> past, double dt) {
  if (past.size() < 2) throw Error("agent speed needs two observed points");
  return distance(past[past.size() - 1], past[past.size() - 2]) / dt;
}

std::vector<AnchorCandidate> inference_anchors(const LaneScenario& scenario,
                                               const LaneAgent& agent,
                                               const LanesExperimentConfig& config) {
  return retrieve_anchors(scenario.graph, agent_pose(agent.past),
                          agent_speed(agent.past, config.scenario.dt), agent.past,
                          config.retrieval);
}

AnchorCandidate oracle_anchor(const LaneScenario& scenario, const LaneAgent& agent,
                              const LanesExperimentConfig& config) {
  std::vector<Point2> track(agent.past);
  track.insert(track.end(), agent.future.begin(), agent.future.end());
  RetrievalConfig rc = config.retrieval;
  rc.horizon = static_cast<double>(config.scenario.future_steps) * config.scenario.dt;
  auto ranked = retrieve_anchors(scenario.graph, agent_pose(agent.past),
                                 agent_speed(agent.past, config.scenario.dt), track, rc);
  return std::move(ranked.front());
}

Json checkpoint_to_json(const LaneCheckpoint& ckpt) {
  return Json{{"format", "lanedac-alan-checkpoint"},
              {"version", 1},
              {"cell", ckpt.cell},
              {"seed", ckpt.seed},
              {"config", config_to_json(ckpt.config)},
              {"hypotheses", ckpt.model.layout().hypotheses},
              {"steps", ckpt.model.layout().steps},
              {"model", mlp_to_json(ckpt.model.net())}};
}

LaneCheckpoint checkpoint_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", std::string()) != "lanedac-alan-checkpoint") {
    throw Error("checkpoint: not a lane model checkpoint");
  }
  if (j.value("version", 0) != 1) throw Error("checkpoint: unsupported version");
  LaneCheckpoint c;
  c.cell = get_field<std::string>(j, "cell", "checkpoint");
  lane_cell(c.cell);
  c.seed = get_field<std::uint64_t>(j, "seed", "checkpoint");
  c.config = config_from_json(j.at("config"));
  AlanLayout layout;
  layout.hypotheses = get_field<std::size_t>(j, "hypotheses", "checkpoint");
  layout.steps = get_field<std::size_t>(j, "steps", "checkpoint");
  if (layout.hypotheses != c.config.lanes.hypotheses ||
      layout.steps != c.config.lanes.scenario.future_steps) {
    throw Error("checkpoint: layout does not match its config");
  }
  Mlp net = mlp_from_json(j.at("model"));
  const std::size_t in =
      encoded_input_size(c.config.lanes.scenario.observed_steps, c.config.lanes.encoding);
  if (net.input_size() != in) {
    throw Error("checkpoint: model input size " + std::to_string(net.input_size()) +
                " does not match the encoding (" + std::to_string(in) + ")");
  }
  c.model = AlanModel(std::move(net), layout);
  return c;
}

LaneTrainResult train_lane_cell(const ExperimentConfig& config, const LaneDataset& train,
                                const std::string& cell_name, std::uint64_t seed) {
  const LanesExperimentConfig& lc = config.lanes;
  const LaneCell cell = lane_cell(cell_name);
  AlanLayout layout;
  layout.hypotheses = lc.hypotheses;
  layout.steps = lc.scenario.future_steps;

  struct Item {
    EncodedSample enc;
    Polyline anchor;
  };
  std::vector<Item> items;
  std::vector<std::vector<double>> inputs;
  for (const auto& sc : train.scenarios) {
    for (const auto& agent : sc.agents) {
      const AnchorCandidate anchor = oracle_anchor(sc, agent, lc);
      EncodedSample enc = encode_sample(agent.past, agent.future, anchor.polyline, lc.encoding);
      inputs.push_back(enc.input);
      items.push_back({std::move(enc), anchor.polyline});
    }
  }

  AlanLossConfig loss_cfg;
  loss_cfg.heads = cell.heads;
  loss_cfg.regularize = cell.regularize;
  loss_cfg.lambda1 = lc.lambda1;
  loss_cfg.lambda2 = lc.lambda2;
  loss_cfg.objective = objective_config(config, config.objective);

  LaneTrainResult result;
  SeededRng init_rng(derive_seed(seed, kInit));
  AlanModel model(inputs.front().size(), lc.hidden, layout, init_rng);
  const SampleLoss loss = [&](std::size_t idx, std::size_t iter, std::span<const double> raw,
                              std::span<double> g) {
    const Item& it = items[idx];
    const auto abs = decode_outputs(raw, layout, it.enc.frame);
    const AlanLossResult r =
        alan_loss(abs, layout, it.enc.gt_nt, it.enc.gt_xy, it.anchor, loss_cfg, iter);
    const auto rg = raw_gradient(r.grad, layout, it.enc.frame);
    std::copy(rg.begin(), rg.end(), g.begin());
    const auto& c = r.components;
    return std::vector<double>{c.total, c.nt_dac, c.xy_dac, c.nt_reg, c.xy_reg, c.score};
  };
  TrainConfig tc;
  tc.iterations = lc.iterations;
  tc.batch_size = lc.batch_size;
  tc.adam.lr = lc.lr;
  tc.seed = derive_seed(seed, kShuffle);
  result.curves = train_mlp(model.net(), inputs, loss, tc);
  result.checkpoint = LaneCheckpoint{cell_name, seed, config, std::move(model)};
  return result;
}

std::vector<double> predict_lane(const LaneCheckpoint& ckpt, const LaneAgent& agent,
                                 const Polyline& anchor) {
  const auto& lc = ckpt.config.lanes;
  const EncodedSample enc = encode_sample(agent.past, {}, anchor, lc.encoding);
  const auto raw = forward(ckpt.model.net(), enc.input);
  return decode_outputs(raw, ckpt.model.layout(), enc.frame);
}

namespace {

struct Pool {
  std::vector<double> trajs;   // K x steps x 2
  std::vector<double> scores;  // K
};

void add_predictions(Pool& pool, const LaneCheckpoint& ckpt, const LaneAgent& agent,
                     const Polyline& anchor) {
  const AlanLayout& layout = ckpt.model.layout();
  const auto out = predict_lane(ckpt, agent, anchor);
  const auto trajs =
      predicted_trajectories(out, layout, anchor, lane_cell(ckpt.cell).heads);
  pool.trajs.insert(pool.trajs.end(), trajs.begin(), trajs.end());
  const auto logits = std::span<const double>(out).subspan(layout.score_offset(),
                                                           layout.hypotheses);
  pool.scores.insert(pool.scores.end(), logits.begin(), logits.end());
}

struct Tally {
  std::vector<double> made, mfde, oracle;
  std::size_t misses = 0;
  std::size_t offroad = 0;
  std::size_t trajectories = 0;
};

void score_pool(Tally& t, const Pool& pool, std::span<const double> gt, std::size_t m_sel,
                std::span<const Polyline> lanes, const LanesExperimentConfig& lc) {
  const std::size_t len = gt.size();
  const std::size_t k = pool.scores.size();
  const auto errs = made_mfde(pool.trajs, pool.scores, gt, m_sel);
  t.made.push_back(errs.made);
  t.mfde.push_back(errs.mfde);
  std::vector<double> ends;
  for (std::size_t i = 0; i < k; ++i) {
    ends.push_back(pool.trajs[i * len + len - 2]);
    ends.push_back(pool.trajs[i * len + len - 1]);
  }
  t.oracle.push_back(oracle_fde(ends, gt.subspan(len - 2, 2)));
  const auto selected = top_by_score(pool.scores, m_sel);
  if (is_miss(pool.trajs, selected, gt, lc.miss_threshold)) ++t.misses;
  for (std::size_t s : selected) {
    if (is_offroad(std::span<const double>(pool.trajs).subspan(s * len, len), lanes,
                   lc.corridor_halfwidth)) {
      ++t.offroad;
    }
    ++t.trajectories;
  }
}

MetricReport finish(const Tally& t, const LaneCheckpoint& ckpt, const std::string& strategy,
                    std::size_t m_sel) {
  const auto& lc = ckpt.config.lanes;
  MetricReport r;
  r.experiment = "lanes";
  r.variant = ckpt.cell;
  r.strategy = strategy;
  r.seed = ckpt.seed;
  r.samples = t.made.size();
  r.m_sel = m_sel;
  r.miss_threshold = lc.miss_threshold;
  if (r.samples == 0) return r;
  const double n = static_cast<double>(r.samples);
  r.made = mean_of(t.made);
  r.mfde = mean_of(t.mfde);
  r.oracle_fde = mean_of(t.oracle);
  r.miss_rate = static_cast<double>(t.misses) / n;
  r.offroad_rate = static_cast<double>(t.offroad) / static_cast<double>(t.trajectories);
  return r;
}

}  // namespace

std::vector<MetricReport> evaluate_lanes(const LaneCheckpoint& ckpt, const LaneDataset& test,
                                         double filter_bad) {
  const auto& lc = ckpt.config.lanes;
  Tally top, oracle, all;
  std::size_t all_k = 0;
  for (const auto& sc : test.scenarios) {
    const auto lanes = lane_centerlines(sc.graph);
    for (const auto& agent : sc.agents) {
      const auto ranked = inference_anchors(sc, agent, lc);
      if (filter_bad > 0.0 && mean_abs_normal(ranked.front().polyline, agent.past) > filter_bad) {
        continue;
      }
      std::vector<double> gt;
      for (const Point2& p : agent.future) {
        gt.push_back(p.x);
        gt.push_back(p.y);
      }
      Pool top_pool;
      const std::size_t n_anchor = std::min(lc.top_anchors, ranked.size());
      for (std::size_t a = 0; a < n_anchor; ++a) {
        add_predictions(top_pool, ckpt, agent, ranked[a].polyline);
      }
      score_pool(top, top_pool, gt, lc.m_sel, lanes, lc);

      Pool oracle_pool;
      add_predictions(oracle_pool, ckpt, agent, oracle_anchor(sc, agent, lc).polyline);
      score_pool(oracle, oracle_pool, gt, lc.m_sel, lanes, lc);

      Pool all_pool = top_pool;
      for (std::size_t a = n_anchor; a < ranked.size(); ++a) {
        add_predictions(all_pool, ckpt, agent, ranked[a].polyline);
      }
      score_pool(all, all_pool, gt, all_pool.scores.size(), lanes, lc);
      all_k = std::max(all_k, all_pool.scores.size());
    }
  }
  return {finish(top, ckpt, "top_m", lc.m_sel), finish(oracle, ckpt, "oracle", lc.m_sel),
          finish(all, ckpt, "best_of_all", all_k)};
}

LanesRun run_lanes(const ExperimentConfig& config, std::uint64_t seed) {
  const auto& lc = config.lanes;
  LanesRun run;
  run.train = make_lane_dataset(lc.scenario, lc.train_scenarios, derive_seed(seed, kTrainData));
  run.test = make_lane_dataset(lc.scenario, lc.test_scenarios, derive_seed(seed, kEvalData));
  for (const auto& cell : lc.cells) {
    run.cells.push_back(train_lane_cell(config, run.train, cell, seed));
    const auto rows =
        evaluate_lanes(run.cells.back().checkpoint, run.test, lc.filter_bad_anchors);
    run.rows.insert(run.rows.end(), rows.begin(), rows.end());
  }
  return run;
}

std::string lane_svg(const LaneScenario& scenario, const LaneCheckpoint* ckpt) {
  SvgPlot plot;
  for (const auto& [id, seg] : scenario.graph.segments()) plot.include(seg.centerline.points());
  for (const auto& a : scenario.agents) {
    plot.include(a.past);
    plot.include(a.future);
  }
  for (const auto& [id, seg] : scenario.graph.segments()) {
    plot.polyline(seg.centerline.points(), "#bbbbbb", 6.0);
  }
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const LaneAgent& a = scenario.agents[i];
    plot.polyline(a.future, "#2ca02c", 2.0);
    plot.polyline(a.past, "#000000", 2.5);
    if (ckpt == nullptr) continue;
    const auto& lc = ckpt->config.lanes;
    const auto ranked = inference_anchors(scenario, a, lc);
    const std::size_t steps = ckpt->model.layout().steps;
    Pool pool;
    for (std::size_t k = 0; k < std::min(lc.top_anchors, ranked.size()); ++k) {
      add_predictions(pool, *ckpt, a, ranked[k].polyline);
    }
    for (std::size_t s : top_by_score(pool.scores, lc.m_sel)) {
      std::vector<Point2> t{a.past.back()};
      for (std::size_t j = 0; j < steps; ++j) {
        t.push_back({pool.trajs[(s * steps + j) * 2], pool.trajs[(s * steps + j) * 2 + 1]});
      }
      plot.polyline(t, kPalette[s % 8], 1.5, 0.8);
    }
  }
  plot.axes();
  return plot.str();
}

}  // namespace lanedac
