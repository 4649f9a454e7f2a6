#include "coopgeo/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace coopgeo {

Topology::Topology(std::vector<Point2D> positions, double range, NodeId source, NodeId destination)
    : positions_(std::move(positions)),
      range_(range),
      source_(source),
      destination_(destination),
      adjacency_(positions_.size()) {
  if (!(range_ > 0)) throw std::invalid_argument("Topology: range must be positive");
  if (source_ >= positions_.size() || destination_ >= positions_.size()) {
    throw std::invalid_argument("Topology: source/destination out of bounds");
  }
  for (const Point2D& p : positions_) {
    if (!p.finite()) throw std::invalid_argument("Topology: non-finite position");
  }
  for (NodeId i = 0; i < positions_.size(); ++i) {
    for (NodeId j = i + 1; j < positions_.size(); ++j) {
      if (distance(positions_[i], positions_[j]) <= range_) {
        adjacency_[i].push_back(j);
        adjacency_[j].push_back(i);
      }
    }
  }
}

bool Topology::adjacent(NodeId a, NodeId b) const {
  const auto& n = adjacency_.at(a);
  return std::find(n.begin(), n.end(), b) != n.end();
}

bool Topology::connected(NodeId a, NodeId b) const {
  std::vector<bool> seen(size(), false);
  std::deque<NodeId> frontier{a};
  seen[a] = true;
  while (!frontier.empty()) {
    const NodeId u = frontier.front();
    frontier.pop_front();
    if (u == b) return true;
    for (NodeId v : adjacency_[u]) {
      if (!seen[v]) {
        seen[v] = true;
        frontier.push_back(v);
      }
    }
  }
  return false;
}

Topology gen_per_hop_topology(int neighbor_count, double range, Rng& rng, double dst_distance_factor) {
  if (neighbor_count < 1) throw std::invalid_argument("gen_per_hop_topology: neighbor_count must be >= 1");
  std::vector<Point2D> pos;
  pos.reserve(neighbor_count + 2);
  pos.push_back({0.0, 0.0});
  pos.push_back({dst_distance_factor * range, 0.0});
  for (int i = 0; i < neighbor_count; ++i) {
    const double r = range * std::sqrt(rng.uniform());
    const double th = 2 * std::numbers::pi * rng.uniform();
    pos.push_back({r * std::cos(th), r * std::sin(th)});
  }
  return Topology(std::move(pos), range, 0, 1);
}

Topology gen_area_topology(int node_count, double area_side, double range, Rng& rng,
                           bool require_connected, int max_attempts) {
  if (node_count < 2) throw std::invalid_argument("gen_area_topology: node_count must be >= 2");
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<Point2D> pos(node_count);
    for (auto& p : pos) p = {rng.uniform(0, area_side), rng.uniform(0, area_side)};

    const auto closest_to = [&](Point2D corner, NodeId exclude) {
      NodeId best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (NodeId i = 0; i < pos.size(); ++i) {
        const double d = distance(pos[i], corner);
        if (i != exclude && d < best_d) {
          best = i;
          best_d = d;
        }
      }
      return best;
    };
    const NodeId src = closest_to({0, 0}, std::numeric_limits<NodeId>::max());
    const NodeId dst = closest_to({area_side, area_side}, src);
    Topology topo(std::move(pos), range, src, dst);
    if (!require_connected || topo.connected(src, dst)) return topo;
  }
  throw std::runtime_error("gen_area_topology: no connected placement within attempt budget");
}

}  // namespace coopgeo
