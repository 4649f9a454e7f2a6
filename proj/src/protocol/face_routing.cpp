#include <cmath>
#include <numbers>

#include "coopgeo/protocol.hpp"

namespace coopgeo {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double bearing(Point2D from, Point2D to) { return std::atan2(to.y - from.y, to.x - from.x); }

// First planar edge counter-clockwise about `here` from the ray at `ref`.
// An edge lying exactly on the ray counts as a full turn.
std::optional<NodeId> ccw_next(const Topology& topo, const PlanarNeighborhood& planar, Point2D here,
                               double ref) {
  std::optional<NodeId> best;
  double best_offset = 0.0;
  for (NodeId n : planar.edges) {
    double offset = std::fmod(bearing(here, topo.position(n)) - ref, kTwoPi);
    if (offset < 0) offset += kTwoPi;
    if (offset <= 1e-12) offset = kTwoPi;
    if (!best || offset < best_offset) {
      best = n;
      best_offset = offset;
    }
  }
  return best;
}

// Intersection of segments pq and rs, if they cross.
std::optional<Point2D> segment_intersection(Point2D p, Point2D q, Point2D r, Point2D s) {
  const Point2D d1 = q - p;
  const Point2D d2 = s - r;
  const double denom = cross(d1, d2);
  if (std::abs(denom) < 1e-15) return std::nullopt;
  const double t = cross(r - p, d2) / denom;
  const double u = cross(r - p, d1) / denom;
  if (t < -1e-12 || t > 1 + 1e-12 || u < -1e-12 || u > 1 + 1e-12) return std::nullopt;
  return p + d1 * t;
}

}  // namespace

void RoutingState::enter_recovery(Point2D here, Point2D dst) {
  mode = Mode::Recovery;
  recovery_entry_distance = distance(here, dst);
  entry_point = here;
  face_point = here;
  previous.reset();
  visited.clear();
}

void RoutingState::leave_recovery() {
  mode = Mode::Greedy;
  recovery_entry_distance.reset();
  previous.reset();
  visited.clear();
}

std::optional<NodeId> face_route_step(const Topology& topo, const PlanarNeighborhood& planar,
                                      RoutingState& state, Point2D dst) {
  if (planar.edges.empty()) return std::nullopt;
  const NodeId here_id = planar.center;
  const Point2D here = topo.position(here_id);

  const double ref = state.previous ? bearing(here, topo.position(*state.previous)) : bearing(here, dst);
  std::optional<NodeId> next = ccw_next(topo, planar, here, ref);

  // Face change: while the chosen edge crosses the entry->dst segment closer
  // to dst than the last crossing, rotate on to the next edge.
  for (std::size_t guard = 0; next && guard <= planar.edges.size(); ++guard) {
    const Point2D there = topo.position(*next);
    const auto hit = segment_intersection(here, there, state.entry_point, dst);
    if (!hit || distance(*hit, dst) >= distance(state.face_point, dst) - kGeomTol) break;
    state.face_point = *hit;
    next = ccw_next(topo, planar, here, bearing(here, there));
  }
  if (!next) return std::nullopt;

  if (!state.visited.insert({here_id, *next}).second) return std::nullopt;
  state.previous = here_id;
  return next;
}

}  // namespace coopgeo
