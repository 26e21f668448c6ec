#include "lanedac/lanegraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace lanedac {

LaneGraph::LaneGraph(std::vector<LaneSegment> segments) {
  for (auto& s : segments) {
    const std::string id = s.id;
    if (id.empty()) throw Error("lane segment with empty id");
    if (!segments_.emplace(id, std::move(s)).second) {
      throw Error("duplicate lane segment id '" + id + "'");
    }
  }
  auto has = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  for (const auto& [id, seg] : segments_) {
    for (const auto& s : seg.successors) {
      if (s == id) throw Error("segment '" + id + "' lists itself as successor");
      auto it = segments_.find(s);
      if (it == segments_.end()) {
        throw Error("segment '" + id + "' has unknown successor '" + s + "'");
      }
      if (!has(it->second.predecessors, id)) {
        throw Error("segment '" + id + "' -> '" + s + "' is missing the reverse predecessor link");
      }
    }
    for (const auto& p : seg.predecessors) {
      if (p == id) throw Error("segment '" + id + "' lists itself as predecessor");
      auto it = segments_.find(p);
      if (it == segments_.end()) {
        throw Error("segment '" + id + "' has unknown predecessor '" + p + "'");
      }
      if (!has(it->second.successors, id)) {
        throw Error("segment '" + p + "' -> '" + id + "' is missing the forward successor link");
      }
    }
  }
}

const LaneSegment& LaneGraph::segment(const std::string& id) const {
  auto it = segments_.find(id);
  if (it == segments_.end()) throw Error("unknown lane segment '" + id + "'");
  return it->second;
}

Polyline chain_polyline(const LaneGraph& graph, std::span<const std::string> ids) {
  if (ids.empty()) throw Error("empty segment chain");
  constexpr double kJunction = 1e-6;
  std::vector<Point2> pts;
  for (const auto& id : ids) {
    const auto cl = graph.segment(id).centerline.points();
    for (const Point2& p : cl) {
      if (!pts.empty() && distance(pts.back(), p) <= kJunction) continue;
      pts.push_back(p);
    }
  }
  return Polyline(std::move(pts));
}

std::vector<std::string> closest_segments(const LaneGraph& graph, const Pose& pose,
                                          double radius) {
  if (!(radius > 0.0)) throw Error("radius must be positive");
  std::vector<std::pair<double, std::string>> hits;
  for (const auto& [id, seg] : graph.segments()) {
    const double d = distance_to(seg.centerline, pose.position);
    if (d <= radius) hits.emplace_back(d, id);
  }
  std::sort(hits.begin(), hits.end());
  std::vector<std::string> out;
  out.reserve(hits.size());
  for (auto& h : hits) out.push_back(std::move(h.second));
  return out;
}

namespace {

using Chain = std::vector<std::string>;

bool in_chain(const Chain& c, const std::string& id) {
  return std::find(c.begin(), c.end(), id) != c.end();
}

// Predecessor chains ending just before the seed, nearest first.
void collect_backward(const LaneGraph& graph, Chain& chain, double covered, double behind,
                      std::vector<Chain>& out) {
  const auto& tail = graph.segment(chain.back());
  std::vector<const std::string*> next;
  if (covered < behind) {
    for (const auto& p : tail.predecessors) {
      if (!in_chain(chain, p)) next.push_back(&p);
    }
  }
  if (next.empty()) {
    out.push_back(chain);
    return;
  }
  for (const std::string* p : next) {
    chain.push_back(*p);
    collect_backward(graph, chain, covered + graph.segment(*p).centerline.length(), behind,
                     out);
    chain.pop_back();
  }
}

void collect_forward(const LaneGraph& graph, Chain& chain, const Chain& behind_part,
                     double covered, double ahead, std::vector<Chain>& out) {
  const auto& tail = graph.segment(chain.back());
  std::vector<const std::string*> next;
  if (covered < ahead) {
    for (const auto& s : tail.successors) {
      if (!in_chain(chain, s) && !in_chain(behind_part, s)) next.push_back(&s);
    }
  }
  if (next.empty()) {
    out.push_back(chain);
    return;
  }
  for (const std::string* s : next) {
    chain.push_back(*s);
    collect_forward(graph, chain, behind_part,
                    covered + graph.segment(*s).centerline.length(), ahead, out);
    chain.pop_back();
  }
}

}  // namespace

std::vector<AnchorCandidate> retrieve_candidates(const LaneGraph& graph,
                                                 std::span<const std::string> seeds,
                                                 double ahead, double behind) {
  if (seeds.empty()) throw Error("retrieve_candidates needs at least one seed");
  std::vector<AnchorCandidate> out;
  for (const auto& seed : seeds) {
    std::vector<Chain> backs;
    Chain start{seed};
    collect_backward(graph, start, 0.0, behind, backs);
    for (const Chain& back : backs) {
      // back = [seed, p1, p2, ...]; the part strictly behind the seed.
      const Chain behind_part(back.begin() + 1, back.end());
      std::vector<Chain> fronts;
      Chain front{seed};
      collect_forward(graph, front, behind_part, graph.segment(seed).centerline.length(),
                      ahead, fronts);
      for (const Chain& f : fronts) {
        Chain ids(behind_part.rbegin(), behind_part.rend());
        ids.insert(ids.end(), f.begin(), f.end());
        Polyline poly = chain_polyline(graph, ids);
        out.push_back(AnchorCandidate{std::move(ids), std::move(poly), 0.0, 0.0});
      }
    }
  }
  return out;
}

namespace {

bool contiguous_within(const Chain& inner, const Chain& outer) {
  if (inner.size() > outer.size()) return false;
  return std::search(outer.begin(), outer.end(), inner.begin(), inner.end()) != outer.end();
}

}  // namespace

std::vector<AnchorCandidate> prune_subset_duplicates(std::vector<AnchorCandidate> cands) {
  std::vector<bool> drop(cands.size(), false);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = 0; j < cands.size() && !drop[i]; ++j) {
      if (i == j) continue;
      const Chain& a = cands[i].segment_ids;
      const Chain& b = cands[j].segment_ids;
      if (!contiguous_within(a, b)) continue;
      if (b.size() > a.size() || j < i) drop[i] = true;
    }
  }
  std::vector<AnchorCandidate> out;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!drop[i]) out.push_back(std::move(cands[i]));
  }
  return out;
}

std::vector<AnchorCandidate> heuristic_prune(std::vector<AnchorCandidate> cands,
                                             const Pose& pose, double speed,
                                             double horizon, double tol) {
  if (speed < 0.0) throw Error("speed must be non-negative");
  std::vector<AnchorCandidate> out;
  std::vector<Point2> kept;
  for (auto& c : cands) {
    const double l0 = project(c.polyline, pose.position).nt.l;
    const Point2 ahead = nt_to_xy(c.polyline, {0.0, l0 + speed * horizon});
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](Point2 k) { return distance(k, ahead) <= tol; });
    if (dup) continue;
    kept.push_back(ahead);
    out.push_back(std::move(c));
  }
  return out;
}

double distance_along_lane_score(const Polyline& anchor, std::span<const Point2> past) {
  if (past.empty()) throw Error("distance_along_lane_score needs a non-empty trajectory");
  double s = 0.0;
  for (const Point2& p : past) s += std::abs(project_xy_to_nt(anchor, p).n);
  return s;
}

double centerline_yaw_score(const Polyline& anchor, const Pose& pose) {
  const double l = project_xy_to_nt(anchor, pose.position).l;
  return std::abs(wrap_angle(pose.yaw - yaw_at(anchor, l)));
}

std::vector<AnchorCandidate> rank_anchors(std::vector<AnchorCandidate> cands,
                                          std::span<const Point2> past, const Pose& pose) {
  if (cands.empty()) throw NoAnchorError();
  for (auto& c : cands) {
    c.dal_score = distance_along_lane_score(c.polyline, past);
    c.yaw_score = centerline_yaw_score(c.polyline, pose);
  }
  auto by_yaw_then_ids = [](const AnchorCandidate& a, const AnchorCandidate& b) {
    if (a.yaw_score != b.yaw_score) return a.yaw_score < b.yaw_score;
    return a.segment_ids < b.segment_ids;
  };
  std::sort(cands.begin(), cands.end(), [&](const AnchorCandidate& a, const AnchorCandidate& b) {
    if (a.dal_score != b.dal_score) return a.dal_score < b.dal_score;
    return by_yaw_then_ids(a, b);
  });
  // Groups of near-equal dal_score (anchored at each group's first element)
  // are re-ordered by yaw.
  constexpr double kTie = 1e-6;
  std::size_t g = 0;
  while (g < cands.size()) {
    std::size_t e = g + 1;
    while (e < cands.size() && cands[e].dal_score - cands[g].dal_score <= kTie) ++e;
    std::sort(cands.begin() + static_cast<std::ptrdiff_t>(g),
              cands.begin() + static_cast<std::ptrdiff_t>(e), by_yaw_then_ids);
    g = e;
  }
  return cands;
}

AnchorCandidate nearest_centerline(const LaneGraph& graph, std::span<const Point2> trajectory) {
  if (graph.size() == 0) throw NoAnchorError();
  if (trajectory.empty()) throw Error("nearest_centerline needs a non-empty trajectory");
  const LaneSegment* best = nullptr;
  double best_mean = std::numeric_limits<double>::infinity();
  for (const auto& [id, seg] : graph.segments()) {
    double s = 0.0;
    for (const Point2& p : trajectory) s += distance_to(seg.centerline, p);
    const double mean = s / static_cast<double>(trajectory.size());
    if (mean < best_mean) {
      best_mean = mean;
      best = &seg;
    }
  }
  return AnchorCandidate{{best->id}, best->centerline, 0.0, 0.0};
}

std::vector<AnchorCandidate> retrieve_anchors(const LaneGraph& graph, const Pose& pose,
                                              double speed, std::span<const Point2> track,
                                              const RetrievalConfig& config) {
  const auto seeds = closest_segments(graph, pose, config.radius);
  if (seeds.empty()) {
    auto fb = nearest_centerline(graph, track);
    return rank_anchors({std::move(fb)}, track, pose);
  }
  auto cands = retrieve_candidates(graph, seeds, config.ahead, config.behind);
  cands = prune_subset_duplicates(std::move(cands));
  cands = heuristic_prune(std::move(cands), pose, speed, config.horizon, config.lookahead_tol);
  return rank_anchors(std::move(cands), track, pose);
}

}  // namespace lanedac
