#include <algorithm>
#include <map>

#include "coopgeo/event_queue.hpp"
#include "coopgeo/protocol.hpp"

namespace coopgeo {

bool PlanarNeighborhood::contains(NodeId n) const {
  return std::binary_search(edges.begin(), edges.end(), n);
}

BfpOutcome run_bfp(const Topology& topo, NodeId center, const ContentionConfig& cfg, Rng& rng) {
  return run_bfp(topo, center, topo.neighbors(center), cfg, rng);
}

BfpOutcome run_bfp(const Topology& topo, NodeId center, const std::vector<NodeId>& participants,
                   const ContentionConfig& cfg, Rng& rng) {
  enum class Role { Pending, Responder, Hidden };

  BfpOutcome out;
  out.planar.center = center;
  const Point2D c = topo.position(center);

  std::map<NodeId, Role> role;
  std::map<NodeId, EventQueue<NodeId>::Handle> timer;
  EventQueue<NodeId> selection;
  for (NodeId n : participants) {
    role[n] = Role::Pending;
    timer[n] = selection.schedule(t_bfp(distance(c, topo.position(n)), topo.range(), cfg, rng), n);
  }

  while (auto ev = selection.pop()) {
    const NodeId v = ev->payload;
    role[v] = Role::Responder;
    out.responders.push_back(v);
    out.frames.push_back({FrameKind::CTF, v, ev->time, true, std::nullopt});
    // v witnesses against every pending node whose Gabriel circle contains it.
    for (auto& [w, r] : role) {
      if (r == Role::Pending && in_gabriel_region(c, topo.position(w), topo.position(v))) {
        r = Role::Hidden;
        selection.cancel(timer[w]);
        out.hidden.push_back(w);
      }
    }
  }

  // Protest window appended after the selection phase.
  const double selection_end = t_bfp_max(cfg);
  EventQueue<NodeId> protest;
  for (NodeId h : out.hidden) {
    const bool violates_any = std::any_of(out.responders.begin(), out.responders.end(), [&](NodeId v) {
      return in_gabriel_region(c, topo.position(v), topo.position(h));
    });
    if (!violates_any) continue;
    const double t = selection_end + t_bfp(distance(c, topo.position(h)), topo.range(), cfg, rng) -
                     cfg.t_max_us / 2;
    protest.schedule(t, h);
  }

  std::vector<NodeId> protested;
  out.finished_at = selection_end;
  while (auto ev = protest.pop()) {
    const NodeId h = ev->payload;
    for (NodeId v : out.responders) {
      if (!in_gabriel_region(c, topo.position(v), topo.position(h))) continue;
      if (std::find(protested.begin(), protested.end(), v) != protested.end()) continue;
      protested.push_back(v);
      out.protests.emplace_back(h, v);
      out.frames.push_back({FrameKind::PROTEST, h, ev->time, std::nullopt, v});
    }
  }
  out.finished_at = selection_end + cfg.t_max_us / 2 + (cfg.jitter ? cfg.t_max_us / (4.0 * cfg.nsa) : 0.0);

  for (NodeId v : out.responders) {
    if (std::find(protested.begin(), protested.end(), v) != protested.end()) continue;
    const bool witnessed = std::any_of(out.responders.begin(), out.responders.end(), [&](NodeId u) {
      return u != v && in_gabriel_region(c, topo.position(v), topo.position(u));
    });
    if (!witnessed) out.planar.edges.push_back(v);
  }
  std::sort(out.planar.edges.begin(), out.planar.edges.end());
  return out;
}

}  // namespace coopgeo
