#include <doctest.h>

#include <cmath>
#include <vector>

#include "lanedac/alan.hpp"
#include "lanedac/error.hpp"
#include "lanedac/losses.hpp"
#include "lanedac/rng.hpp"

using namespace lanedac;

namespace {

Polyline straight() { return Polyline({{0, 0}, {100, 0}}); }

// Loss with the score target frozen at q0: what alan_loss differentiates.
double frozen_total(std::span<const double> outputs, const AlanLayout& layout,
                    std::span<const double> gt_nt, std::span<const double> gt_xy,
                    const Polyline& anchor, const AlanLossConfig& cfg, std::size_t iter,
                    std::span<const double> q0) {
  const auto r = alan_loss(outputs, layout, gt_nt, gt_xy, anchor, cfg, iter);
  const auto logits = outputs.subspan(layout.score_offset(), layout.hypotheses);
  return r.components.total - r.components.score + score_loss(logits, q0);
}

}  // namespace

TEST_CASE("regularizer on a straight lane") {
  // One hypothesis, one step: nt head says (n, l) = (0, 5), xy head (5, 1).
  const AlanLayout layout{1, 1};
  const std::vector<double> outputs{0.0, 5.0, 5.0, 1.0, 0.0};
  const std::vector<double> gt_nt{0.0, 5.0}, gt_xy{5.0, 0.0};
  AlanLossConfig cfg;
  cfg.lambda1 = 0.7;
  cfg.lambda2 = 3.0;
  const auto r = alan_loss(outputs, layout, gt_nt, gt_xy, straight(), cfg, 0);
  CHECK(r.components.nt_dac == 0.0);
  CHECK(r.components.xy_dac == doctest::Approx(1.0));
  CHECK(r.components.nt_reg == doctest::Approx(1.0));
  CHECK(r.components.xy_reg == doctest::Approx(1.0));
  CHECK(r.components.score == doctest::Approx(0.0));
  CHECK(r.components.total == doctest::Approx(1.0 + 0.7 + 3.0));

  cfg.regularize = false;
  const auto plain = alan_loss(outputs, layout, gt_nt, gt_xy, straight(), cfg, 0);
  CHECK(plain.components.nt_reg == 0.0);
  CHECK(plain.components.total == doctest::Approx(1.0));
}

TEST_CASE("regularizer averages over hypotheses and steps") {
  // Two hypotheses x two steps; only one point disagrees, by 2 m laterally.
  const AlanLayout layout{2, 2};
  std::vector<double> out(layout.output_size(), 0.0);
  const double nt[] = {0, 1, 0, 2, 0, 3, 0, 4};
  const double xy[] = {1, 0, 2, 0, 3, 0, 4, 2};
  std::copy(nt, nt + 8, out.begin());
  std::copy(xy, xy + 8, out.begin() + 8);
  const std::vector<double> gt_nt{0, 1, 0, 2}, gt_xy{1, 0, 2, 0};
  AlanLossConfig cfg;
  const auto r = alan_loss(out, layout, gt_nt, gt_xy, straight(), cfg, 0);
  CHECK(r.components.nt_reg == doctest::Approx(4.0 / 4.0));
  CHECK(r.components.xy_reg == doctest::Approx(4.0 / 4.0));
}

TEST_CASE("head sets select the supervised heads") {
  const AlanLayout layout{2, 1};
  const std::vector<double> out{0, 3, 0, 9, 3, 1, 9, 0, 0.2, -0.1};
  const std::vector<double> gt_nt{0, 3}, gt_xy{3, 0};
  AlanLossConfig cfg;
  cfg.heads = HeadSet::kXyOnly;
  auto r = alan_loss(out, layout, gt_nt, gt_xy, straight(), cfg, 0);
  CHECK(r.components.nt_dac == 0.0);
  CHECK(r.components.nt_reg == 0.0);
  CHECK(r.nt_weights.empty());
  for (std::size_t i = 0; i < 4; ++i) CHECK(r.grad[i] == 0.0);
  cfg.heads = HeadSet::kNtOnly;
  r = alan_loss(out, layout, gt_nt, gt_xy, straight(), cfg, 0);
  CHECK(r.components.xy_dac == 0.0);
  for (std::size_t i = 4; i < 8; ++i) CHECK(r.grad[i] == 0.0);
  CHECK_THROWS_AS(alan_loss(std::vector<double>(3), layout, gt_nt, gt_xy, straight(), cfg, 0),
                  Error);
}

TEST_CASE("score target is built from the primary head and held constant") {
  const AlanLayout layout{2, 1};
  // nt hypothesis 0 exact, hypothesis 1 off by 1 m; xy head the other way round.
  const std::vector<double> out{0, 3, 1, 3, 4, 0, 3, 0, 0.0, 0.0};
  const std::vector<double> gt_nt{0, 3}, gt_xy{3, 0};
  AlanLossConfig cfg;
  cfg.regularize = false;
  const auto r = alan_loss(out, layout, gt_nt, gt_xy, straight(), cfg, 0);
  const auto q = ioc_target_q(std::vector<double>{0.0, 1.0});
  CHECK(r.grad[8] == doctest::Approx(0.5 - q[0]));
  CHECK(r.grad[9] == doctest::Approx(0.5 - q[1]));
  CHECK(r.components.score == doctest::Approx(std::log(2.0)));
  // Under DAC at depth 1 every hypothesis shares the update.
  CHECK(r.nt_weights == Weights{0.5, 0.5});
  cfg.objective.objective = Objective::kWta;
  const auto w = alan_loss(out, layout, gt_nt, gt_xy, straight(), cfg, 0);
  CHECK(w.nt_weights == Weights{1, 0});
  CHECK(w.xy_weights == Weights{0, 1});
}

TEST_CASE("output gradient matches finite differences with the target frozen") {
  SeededRng rng(31);
  const Polyline anchor({{0, 0}, {20, 0}, {40, 12}, {55, 30}});
  const AlanLayout layout{3, 4};
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    AlanLossConfig cfg;
    cfg.lambda1 = rng.uniform(0.1, 2.0);
    cfg.lambda2 = rng.uniform(0.1, 2.0);
    cfg.objective.objective = static_cast<Objective>(rng.below(4));
    cfg.objective.split_interval = 3;
    const std::size_t iter = rng.below(12);
    std::vector<double> out(layout.output_size());
    std::vector<double> gt_nt, gt_xy;
    for (std::size_t t = 0; t < layout.steps; ++t) {
      const NTCoord c{rng.uniform(-1, 1), rng.uniform(3, 50)};
      gt_nt.insert(gt_nt.end(), {c.n, c.l});
      const Point2 p = nt_to_xy(anchor, c);
      gt_xy.insert(gt_xy.end(), {p.x, p.y});
    }
    bool ok = true;
    for (std::size_t i = 0; i < layout.hypotheses * layout.steps; ++i) {
      const NTCoord c{rng.uniform(-1.5, 1.5), rng.uniform(3, 50)};
      out[2 * i] = c.n;
      out[2 * i + 1] = c.l;
      const Point2 p = nt_to_xy(anchor, {rng.uniform(-1.5, 1.5), rng.uniform(3, 50)});
      out[layout.xy_offset() + 2 * i] = p.x;
      out[layout.xy_offset() + 2 * i + 1] = p.y;
      // Keep the finite-difference stencil inside one smooth piece.
      if (project(anchor, p).region != ProjectionRegion::kInterior) ok = false;
      for (double v : {c.l - 20.0, c.l - (20.0 + std::hypot(20.0, 12.0))}) {
        if (std::abs(v) < 0.05) ok = false;
      }
    }
    for (std::size_t m = 0; m < layout.hypotheses; ++m) {
      out[layout.score_offset() + m] = rng.uniform(-1, 1);
    }
    if (!ok) continue;
    const auto r = alan_loss(out, layout, gt_nt, gt_xy, anchor, cfg, iter);
    const auto q0 = ioc_target_q(per_hypothesis_l2(
        std::span<const double>(out).subspan(0, layout.trajectory_size()), gt_nt));
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto a = out, b = out;
      a[i] += h;
      b[i] -= h;
      const double fd = (frozen_total(a, layout, gt_nt, gt_xy, anchor, cfg, iter, q0) -
                         frozen_total(b, layout, gt_nt, gt_xy, anchor, cfg, iter, q0)) /
                        (2 * h);
      CHECK(r.grad[i] == doctest::Approx(fd).epsilon(1e-5).scale(1e-2));
    }
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("decode and raw gradient are consistent") {
  const AlanLayout layout{2, 2};
  AgentFrame f;
  f.origin = {3, -1};
  f.heading = 0.7;
  f.l_origin = 12.0;
  f.scale = 10.0;
  SeededRng rng(2);
  std::vector<double> raw(layout.output_size()), g(layout.output_size());
  for (double& v : raw) v = rng.uniform(-1, 1);
  for (double& v : g) v = rng.uniform(-1, 1);
  // d/draw of g . decode(raw) equals raw_gradient(g).
  const auto rg = raw_gradient(g, layout, f);
  const double h = 1e-6;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto a = raw, b = raw;
    a[i] += h;
    b[i] -= h;
    const auto da = decode_outputs(a, layout, f), db = decode_outputs(b, layout, f);
    double fd = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) fd += g[k] * (da[k] - db[k]) / (2 * h);
    CHECK(rg[i] == doctest::Approx(fd).epsilon(1e-7));
  }
  const auto dec = decode_outputs(std::vector<double>(layout.output_size(), 0.0), layout, f);
  CHECK(dec[0] == 0.0);
  CHECK(dec[1] == 12.0);
  CHECK(dec[layout.xy_offset()] == 3.0);
  CHECK(dec[layout.xy_offset() + 1] == -1.0);
}

TEST_CASE("encoding layout") {
  const Polyline anchor({{-20, 0}, {80, 0}});
  const std::vector<Point2> past{{-3, 0.5}, {-2, 0.5}, {-1, 0.5}, {0, 0.5}};
  const std::vector<Point2> future{{1, 0.5}, {2, 0.0}};
  EncodingConfig ec;
  const auto s = encode_sample(past, future, anchor, ec);
  REQUIRE(s.input.size() == encoded_input_size(4, ec));
  CHECK(s.frame.origin == Point2{0, 0.5});
  CHECK(s.frame.heading == doctest::Approx(0.0));
  CHECK(s.frame.l_origin == doctest::Approx(20.0));
  // Last observed step: at the origin, n = 0.05 in scaled units, mask 1.
  CHECK(s.input[15] == doctest::Approx(0.0));
  CHECK(s.input[16] == doctest::Approx(0.0));
  CHECK(s.input[17] == doctest::Approx(0.05));
  CHECK(s.input[18] == doctest::Approx(0.0));
  CHECK(s.input[19] == 1.0);
  // Anchor crop starts 10 m behind the agent, on the centerline.
  CHECK(s.input[20] == doctest::Approx(-1.0));
  CHECK(s.input[21] == doctest::Approx(-0.05));
  CHECK(s.gt_nt == std::vector<double>{0.5, 21.0, 0.0, 22.0});
  CHECK(s.gt_xy == std::vector<double>{1, 0.5, 2, 0.0});
}

TEST_CASE("predicted trajectories follow the configured head") {
  const AlanLayout layout{1, 1};
  const std::vector<double> out{1.0, 5.0, 7.0, 7.0, 0.0};
  const Polyline anchor({{0, 0}, {10, 0}});
  CHECK(predicted_trajectories(out, layout, anchor, HeadSet::kNtXy) ==
        std::vector<double>{5.0, 1.0});
  CHECK(predicted_trajectories(out, layout, anchor, HeadSet::kXyOnly) ==
        std::vector<double>{7.0, 7.0});
}
