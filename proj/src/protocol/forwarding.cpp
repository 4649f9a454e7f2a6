#include "coopgeo/protocol.hpp"

namespace coopgeo {

CbfRound run_cbf_round(const Topology& topo, NodeId current, Point2D dst, const ProtocolConfig& cfg,
                       const Receptions& rx, Rng& rng) {
  CbfRound round;
  const Point2D here = topo.position(current);
  std::vector<Bid> bids;
  for (NodeId n : topo.neighbors(current)) {
    if (!rx[n] || !rx[n]->header_ok) continue;
    const Point2D pos = topo.position(n);
    const Progress progress = classify_progress(here, dst, pos, topo.range());
    if (progress == Progress::OutOfRange) continue;
    if (progress == Progress::NPA && cfg.recovery) continue;
    CbfCandidate c;
    c.node = n;
    c.progress = progress;
    c.csa = csa_index(here, dst, pos, topo.range(), cfg.contention.nsa);
    c.fire_time = t_cbf(c.csa, cfg.contention, rng);
    round.candidates.push_back(c);
    bids.push_back({n, c.fire_time, BidKind::CTF});
  }
  round.result = resolve(bids, cfg.contention);
  if (round.result.outcome == ContentionResult::Outcome::Silence) {
    round.result.resolved_at = cfg.recovery ? cfg.contention.t_max_us / 2 : cfg.contention.t_max_us;
  }
  return round;
}

bool detect_local_optimum(const ContentionResult& result, const ContentionConfig& cfg) {
  return result.outcome == ContentionResult::Outcome::Silence || result.resolved_at >= cfg.t_max_us / 2;
}

}  // namespace coopgeo
