#include "lanedac/alan.hpp"

#include <cmath>

#include "lanedac/error.hpp"
#include "lanedac/losses.hpp"

namespace lanedac {

namespace {

// Adds w * d(L2_m)/d(pred_m) = w * 2/steps * (pred - gt) for hypothesis m.
void add_l2_grad(std::span<const double> pred, std::span<const double> gt, double w,
                 std::size_t m, std::size_t steps, std::span<double> grad) {
  if (w == 0.0) return;
  const std::size_t d = gt.size();
  const double c = w * 2.0 / static_cast<double>(steps);
  for (std::size_t j = 0; j < d; ++j) grad[m * d + j] += c * (pred[m * d + j] - gt[j]);
}

}  // namespace

AlanLossResult alan_loss(std::span<const double> outputs, const AlanLayout& layout,
                         std::span<const double> gt_nt, std::span<const double> gt_xy,
                         const Polyline& anchor, const AlanLossConfig& config,
                         std::size_t iter) {
  const std::size_t m_count = layout.hypotheses;
  const std::size_t steps = layout.steps;
  const std::size_t traj = layout.trajectory_size();
  if (outputs.size() != layout.output_size()) throw Error("alan_loss: output size mismatch");
  if (gt_nt.size() != steps * 2 || gt_xy.size() != steps * 2) {
    throw Error("alan_loss: ground truth must hold steps x 2 values");
  }

  const auto nt = outputs.subspan(layout.nt_offset(), traj);
  const auto xy = outputs.subspan(layout.xy_offset(), traj);
  const auto logits = outputs.subspan(layout.score_offset(), m_count);

  AlanLossResult out;
  out.grad.assign(outputs.size(), 0.0);
  std::span<double> g_nt{out.grad.data() + layout.nt_offset(), traj};
  std::span<double> g_xy{out.grad.data() + layout.xy_offset(), traj};
  std::span<double> g_score{out.grad.data() + layout.score_offset(), m_count};
  AlanLossComponents& c = out.components;

  const bool use_nt = config.heads != HeadSet::kXyOnly;
  const bool use_xy = config.heads != HeadSet::kNtOnly;

  std::vector<double> l2_nt, l2_xy;
  if (use_nt) {
    l2_nt = per_hypothesis_l2(nt, gt_nt);
    out.nt_weights = variant_weights(config.objective, l2_nt, iter);
    for (std::size_t m = 0; m < m_count; ++m) {
      c.nt_dac += out.nt_weights[m] * l2_nt[m];
      add_l2_grad(nt, gt_nt, out.nt_weights[m], m, steps, g_nt);
    }
  }
  if (use_xy) {
    l2_xy = per_hypothesis_l2(xy, gt_xy);
    out.xy_weights = variant_weights(config.objective, l2_xy, iter);
    for (std::size_t m = 0; m < m_count; ++m) {
      c.xy_dac += out.xy_weights[m] * l2_xy[m];
      add_l2_grad(xy, gt_xy, out.xy_weights[m], m, steps, g_xy);
    }
  }

  {
    // The target q is a constant of the step: only the logits receive
    // gradient, so low-scored hypotheses are not pushed away from the truth.
    const auto& dist = use_nt ? l2_nt : l2_xy;
    const auto q = ioc_target_q(dist);
    const auto logp = log_softmax(logits);
    for (std::size_t m = 0; m < m_count; ++m) {
      c.score -= q[m] * logp[m];
      g_score[m] += std::exp(logp[m]) - q[m];
    }
  }

  const bool reg = config.heads == HeadSet::kNtXy && config.regularize;
  if (reg) {
    const double norm_c = 1.0 / static_cast<double>(m_count * steps);
    const double k1 = 2.0 * norm_c * config.lambda1;
    const double k2 = 2.0 * norm_c * config.lambda2;
    for (std::size_t i = 0; i < m_count * steps; ++i) {
      const NTCoord a{nt[2 * i], nt[2 * i + 1]};
      const Point2 b{xy[2 * i], xy[2 * i + 1]};

      const Projection pr = project(anchor, b);
      const double dn = a.n - pr.nt.n;
      const double dl = a.l - pr.nt.l;
      c.nt_reg += dn * dn + dl * dl;
      g_nt[2 * i] += k1 * dn;
      g_nt[2 * i + 1] += k1 * dl;
      g_xy[2 * i] -= k1 * (dn * pr.dn_dq.x + dl * pr.dl_dq.x);
      g_xy[2 * i + 1] -= k1 * (dn * pr.dn_dq.y + dl * pr.dl_dq.y);

      const Placement pl = place(anchor, a);
      const Point2 diff = b - pl.point;
      c.xy_reg += dot(diff, diff);
      g_xy[2 * i] += k2 * diff.x;
      g_xy[2 * i + 1] += k2 * diff.y;
      g_nt[2 * i] -= k2 * dot(diff, pl.d_dn);
      g_nt[2 * i + 1] -= k2 * dot(diff, pl.d_dl);
    }
    c.nt_reg *= norm_c;
    c.xy_reg *= norm_c;
  }

  c.total = c.nt_dac + c.xy_dac + c.score;
  if (reg) c.total += config.lambda1 * c.nt_reg + config.lambda2 * c.xy_reg;
  return out;
}

std::size_t encoded_input_size(std::size_t observed_steps, const EncodingConfig& config) {
  return 5 * observed_steps + 2 * config.anchor_points;
}

namespace {

Point2 rotate(Point2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

}  // namespace

EncodedSample encode_sample(std::span<const Point2> past, std::span<const Point2> future,
                            const Polyline& anchor, const EncodingConfig& config) {
  if (past.empty()) throw Error("encode_sample needs at least one observed point");
  EncodedSample s;
  AgentFrame& f = s.frame;
  f.origin = past.back();
  f.scale = config.scale;
  f.l_origin = project(anchor, f.origin).nt.l;
  if (past.size() >= 2 && distance(past[past.size() - 1], past[past.size() - 2]) > 1e-6) {
    const Point2 d = past[past.size() - 1] - past[past.size() - 2];
    f.heading = std::atan2(d.y, d.x);
  } else {
    f.heading = yaw_at(anchor, f.l_origin);
  }
  const double inv = 1.0 / f.scale;
  auto to_frame = [&](Point2 p) { return inv * rotate(p - f.origin, -f.heading); };

  s.input.reserve(encoded_input_size(past.size(), config));
  for (const Point2& p : past) {
    const Point2 q = to_frame(p);
    const NTCoord c = project_xy_to_nt(anchor, p);
    s.input.insert(s.input.end(), {q.x, q.y, c.n * inv, (c.l - f.l_origin) * inv, 1.0});
  }
  const Polyline crop =
      resample(sub_polyline(anchor, f.l_origin - config.anchor_behind,
                            f.l_origin + config.anchor_ahead),
               config.anchor_points);
  for (const Point2& p : crop.points()) {
    const Point2 q = to_frame(p);
    s.input.push_back(q.x);
    s.input.push_back(q.y);
  }

  for (const Point2& p : future) {
    const NTCoord c = project_xy_to_nt(anchor, p);
    s.gt_nt.push_back(c.n);
    s.gt_nt.push_back(c.l);
    s.gt_xy.push_back(p.x);
    s.gt_xy.push_back(p.y);
  }
  return s;
}

std::vector<double> decode_outputs(std::span<const double> raw, const AlanLayout& layout,
                                   const AgentFrame& frame) {
  if (raw.size() != layout.output_size()) throw Error("decode_outputs: size mismatch");
  std::vector<double> out(raw.begin(), raw.end());
  const std::size_t pts = layout.hypotheses * layout.steps;
  for (std::size_t i = 0; i < pts; ++i) {
    const std::size_t a = layout.nt_offset() + 2 * i;
    out[a] = frame.scale * raw[a];
    out[a + 1] = frame.l_origin + frame.scale * raw[a + 1];
    const std::size_t b = layout.xy_offset() + 2 * i;
    const Point2 p = frame.origin + frame.scale * rotate({raw[b], raw[b + 1]}, frame.heading);
    out[b] = p.x;
    out[b + 1] = p.y;
  }
  return out;
}

std::vector<double> raw_gradient(std::span<const double> abs_grad, const AlanLayout& layout,
                                 const AgentFrame& frame) {
  if (abs_grad.size() != layout.output_size()) throw Error("raw_gradient: size mismatch");
  std::vector<double> out(abs_grad.begin(), abs_grad.end());
  const std::size_t pts = layout.hypotheses * layout.steps;
  for (std::size_t i = 0; i < pts; ++i) {
    const std::size_t a = layout.nt_offset() + 2 * i;
    out[a] = frame.scale * abs_grad[a];
    out[a + 1] = frame.scale * abs_grad[a + 1];
    const std::size_t b = layout.xy_offset() + 2 * i;
    const Point2 g = frame.scale * rotate({abs_grad[b], abs_grad[b + 1]}, -frame.heading);
    out[b] = g.x;
    out[b + 1] = g.y;
  }
  return out;
}

AlanModel::AlanModel(std::size_t input_size, std::vector<std::size_t> hidden,
                     AlanLayout layout, SeededRng& rng)
    : layout_(layout) {
  std::vector<std::size_t> sizes{input_size};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(layout.output_size());
  net_ = Mlp::random(std::move(sizes), rng);
}

AlanModel::AlanModel(Mlp net, AlanLayout layout) : net_(std::move(net)), layout_(layout) {
  if (net_.output_size() != layout_.output_size()) {
    throw Error("network output size does not match the hypothesis layout");
  }
}

std::vector<double> predicted_trajectories(std::span<const double> outputs,
                                           const AlanLayout& layout, const Polyline& anchor,
                                           HeadSet heads) {
  const std::size_t traj = layout.trajectory_size();
  std::vector<double> out(traj);
  if (heads == HeadSet::kXyOnly) {
    const auto xy = outputs.subspan(layout.xy_offset(), traj);
    std::copy(xy.begin(), xy.end(), out.begin());
    return out;
  }
  const auto nt = outputs.subspan(layout.nt_offset(), traj);
  for (std::size_t i = 0; i < traj / 2; ++i) {
    const Point2 p = nt_to_xy(anchor, {nt[2 * i], nt[2 * i + 1]});
    out[2 * i] = p.x;
    out[2 * i + 1] = p.y;
  }
  return out;
}

}  // namespace lanedac
