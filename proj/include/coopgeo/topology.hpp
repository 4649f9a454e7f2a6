#pragma once

#include <cstddef>
#include <vector>

#include "coopgeo/contention.hpp"
#include "coopgeo/geometry.hpp"
#include "coopgeo/rng.hpp"

namespace coopgeo {

// Unit-disk graph over planar node positions: an edge joins two nodes iff
// their distance is at most `range`.
class Topology {
 public:
  Topology(std::vector<Point2D> positions, double range, NodeId source, NodeId destination);

  std::size_t size() const { return positions_.size(); }
  double range() const { return range_; }
  NodeId source() const { return source_; }
  NodeId destination() const { return destination_; }

  Point2D position(NodeId id) const { return positions_.at(id); }
  const std::vector<Point2D>& positions() const { return positions_; }
  const std::vector<NodeId>& neighbors(NodeId id) const { return adjacency_.at(id); }
  bool adjacent(NodeId a, NodeId b) const;

  // Breadth-first reachability.
  bool connected(NodeId a, NodeId b) const;

 private:
  std::vector<Point2D> positions_;
  double range_;
  NodeId source_;
  NodeId destination_;
  std::vector<std::vector<NodeId>> adjacency_;
};

// Source at the origin (id 0), destination at (dst_distance, 0) (id 1), and
// `neighbor_count` nodes uniform over the source's disk of radius `range`.
Topology gen_per_hop_topology(int neighbor_count, double range, Rng& rng,
                              double dst_distance_factor = 2.0);

// `node_count` nodes uniform over [0, side]^2. The source is the node
// closest to (0,0) and the destination the remaining node closest to
// (side, side). With `require_connected`, placements are redrawn until the
// two are connected (throws std::runtime_error after `max_attempts`).
Topology gen_area_topology(int node_count, double area_side, double range, Rng& rng,
                           bool require_connected = false, int max_attempts = 100000);

}  // namespace coopgeo
