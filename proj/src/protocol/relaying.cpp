#include <algorithm>

#include "coopgeo/protocol.hpp"

namespace coopgeo {

CbrRound run_cbr_round(const Topology& topo, NodeId src, NodeId forwarder, const ProtocolConfig& cfg,
                       const Receptions& rx, Rng& rng) {
  CbrRound round;
  const Point2D s = topo.position(src);
  const Point2D f = topo.position(forwarder);
  const auto regions = relay_regions(s, f, cfg.relay_side);

  std::vector<NodeId> eligible;
  for (NodeId n : topo.neighbors(src)) {
    if (n == forwarder || !rx[n] || !rx[n]->payload_ok) continue;
    if (!topo.adjacent(n, forwarder)) continue;
    if (!regions_contain(regions, topo.position(n))) continue;
    eligible.push_back(n);
  }
  if (eligible.empty()) {
    round.result.resolved_at = t_cbr_max(cfg.contention);
    return round;
  }

  round.f_star = relay_metric(minimize_relay_metric(s, f, cfg.metric), s, f, cfg.metric);
  round.f_max = 0.0;
  for (const auto& region : regions) {
    round.f_max = std::max(round.f_max, f_max_over_region(region, s, f, cfg.metric));
  }

  std::vector<Bid> bids;
  for (NodeId n : eligible) {
    RelayCandidate c;
    c.node = n;
    c.metric = relay_metric(topo.position(n), s, f, cfg.metric);
    c.mapped = map_metric(c.metric, round.f_star, round.f_max);
    c.fire_time = t_cbr(c.mapped, cfg.contention, rng);
    round.candidates.push_back(c);
    bids.push_back({n, c.fire_time, BidKind::CTR});
  }
  round.result = resolve(bids, cfg.contention);
  return round;
}

}  // namespace coopgeo
