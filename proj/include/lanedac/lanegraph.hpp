#pragma once

// Lane-segment graph and the anchor retrieval pipeline:
//   closest segments -> candidate chains -> subset pruning ->
//   look-ahead pruning -> distance-along-lane / yaw ranking.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lanedac/error.hpp"
#include "lanedac/geometry.hpp"

namespace lanedac {

struct LaneSegment {
  std::string id;
  Polyline centerline;
  std::vector<std::string> successors;
  std::vector<std::string> predecessors;
};

class LaneGraph {
 public:
  LaneGraph() = default;
  // Validates unique ids, link targets, no self-loops, and successor /
  // predecessor symmetry. Throws lanedac::Error naming the offending segment.
  explicit LaneGraph(std::vector<LaneSegment> segments);

  const LaneSegment& segment(const std::string& id) const;
  bool contains(const std::string& id) const { return segments_.count(id) != 0; }
  // Ordered by id.
  const std::map<std::string, LaneSegment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }

 private:
  std::map<std::string, LaneSegment> segments_;
};

struct AnchorCandidate {
  std::vector<std::string> segment_ids;
  Polyline polyline;
  double dal_score = 0.0;
  double yaw_score = 0.0;
};

// Thrown by rank_anchors when there is nothing to rank.
class NoAnchorError : public Error {
 public:
  NoAnchorError() : Error("no anchor available") {}
};

// Concatenated centerline of a connected chain; junction points shared by
// consecutive segments appear once.
Polyline chain_polyline(const LaneGraph& graph, std::span<const std::string> ids);

// Segments whose centerline lies within `radius` of the pose, ascending by
// distance, ties by id.
std::vector<std::string> closest_segments(const LaneGraph& graph, const Pose& pose,
                                          double radius);

// One candidate per (predecessor chain, successor chain) pair reachable from
// each seed. Successor chains extend until their length measured from the
// seed's start reaches `ahead` or no unvisited successor remains; predecessor
// chains extend until they cover `behind`. A segment never repeats within one
// candidate.
std::vector<AnchorCandidate> retrieve_candidates(const LaneGraph& graph,
                                                 std::span<const std::string> seeds,
                                                 double ahead, double behind);

// Drops candidates whose id sequence is a contiguous run inside another
// candidate's sequence (exact duplicates keep the first). Survivors keep
// their input order.
std::vector<AnchorCandidate> prune_subset_duplicates(std::vector<AnchorCandidate> cands);

// Look-ahead point = centerline point at (projected l of the pose +
// speed * horizon). Candidates whose look-ahead point is within `tol` of an
// earlier kept candidate's are dropped.
std::vector<AnchorCandidate> heuristic_prune(std::vector<AnchorCandidate> cands,
                                             const Pose& pose, double speed,
                                             double horizon, double tol);

// Sum over the trajectory of |n| against the candidate's centerline.
double distance_along_lane_score(const Polyline& anchor, std::span<const Point2> past);

// |wrap(pose.yaw - lane yaw at the pose's projection)|, in [0, pi].
double centerline_yaw_score(const Polyline& anchor, const Pose& pose);

// Ascending by dal_score; scores within 1e-6 m of a group's best compare by
// yaw_score, then by id sequence. Fills in both scores. Throws NoAnchorError
// on empty input.
std::vector<AnchorCandidate> rank_anchors(std::vector<AnchorCandidate> cands,
                                          std::span<const Point2> past, const Pose& pose);

// The single centerline closest on average to the trajectory. Used when the
// graph yields no connected candidate.
AnchorCandidate nearest_centerline(const LaneGraph& graph, std::span<const Point2> trajectory);

struct RetrievalConfig {
  double radius = 10.0;
  double ahead = 80.0;
  double behind = 20.0;
  double lookahead_tol = 2.0;
  double horizon = 6.0;
};

// Full pipeline for one agent. `track` is the trajectory the ranking sees
// (the observed past at inference, the whole trajectory for the oracle);
// the pose is the agent's last observed pose and `speed` its speed there.
// Never empty: falls back to nearest_centerline.
std::vector<AnchorCandidate> retrieve_anchors(const LaneGraph& graph, const Pose& pose,
                                              double speed, std::span<const Point2> track,
                                              const RetrievalConfig& config);

}  // namespace lanedac
