#include <algorithm>

#include "coopgeo/protocol.hpp"

namespace coopgeo {

namespace {

void log(HopOutcome& out, FrameKind kind, NodeId sender, double at, std::optional<bool> decoded = {},
         std::optional<NodeId> target = {}) {
  out.events.push_back({kind, sender, at, decoded, target});
}

// Relay election, cooperative combining and the direct fallback after the
// forwarder reported a failed decode. `cbr_start` is the end of the CTF.
void cooperate(const Topology& topo, NodeId current, NodeId fwd, const ProtocolConfig& cfg,
               const Radio& radio, Rng& rng, const Receptions& rx, double cbr_start, double select_end,
               HopOutcome& out) {
  const double ctrl = radio.control_airtime_us;
  for (int attempt = 0;; ++attempt) {
    const CbrRound cbr = run_cbr_round(topo, current, fwd, cfg, rx, rng);
    const double round_start = cbr_start + out.cbr_elapsed_us;

    if (cbr.result.has_winner()) {
      const NodeId relay = cbr.result.winner();
      const double t_ctr = round_start + cbr.result.resolved_at;
      out.cbr_elapsed_us += cbr.result.resolved_at;
      const double t_relay = std::max(t_ctr + ctrl, select_end);
      log(out, FrameKind::CTR, relay, t_ctr, {}, fwd);
      log(out, FrameKind::DATA, relay, t_relay);
      out.mode = HopMode::GreedyCooperative;
      out.relay = relay;
      out.relay_transmitted = true;
      const double combined = mrc_combine(rx[fwd]->snr, radio.link->draw_snr(topo, relay, fwd, rng));
      out.delivered = rng.uniform() < radio.success_probability(combined, radio.data_symbols);
      out.channel_failure = !out.delivered;
      out.elapsed_us = t_relay + radio.data_airtime_us;
      return;
    }

    if (cbr.result.outcome == ContentionResult::Outcome::Collision) {
      for (NodeId n : cbr.result.nodes) log(out, FrameKind::CTR, n, round_start + cbr.result.resolved_at, {}, fwd);
      out.cbr_elapsed_us += cbr.result.resolved_at + ctrl;
      ++out.collision_count;
      if (attempt < cfg.collision_retries) continue;
      out.mode = HopMode::GreedyCooperative;
      out.collision_failure = true;
      out.elapsed_us = cbr_start + out.cbr_elapsed_us;
      return;
    }

    // Nobody answered within the relay window: one direct retransmission.
    out.cbr_elapsed_us += cbr.result.resolved_at;
    const double t_retx = std::max(select_end, cbr_start + out.cbr_elapsed_us);
    log(out, FrameKind::DATA, current, t_retx);
    out.mode = HopMode::GreedyDirectRetx;
    out.retransmitted = true;
    const double snr = radio.link->draw_snr(topo, current, fwd, rng);
    out.delivered = rng.uniform() < radio.success_probability(snr, radio.data_symbols);
    out.channel_failure = !out.delivered;
    out.elapsed_us = t_retx + radio.data_airtime_us;
    return;
  }
}

HopOutcome hop_state_machine(const Topology& topo, NodeId current, NodeId dst, const ProtocolConfig& cfg,
                             const Radio& radio, Rng& rng, RoutingState& state) {
  HopOutcome out;
  const Point2D here = topo.position(current);
  const Point2D dpos = topo.position(dst);
  const double ctrl = radio.control_airtime_us;
  const double t_max = cfg.contention.t_max_us;

  if (state.mode == RoutingState::Mode::Recovery && distance(here, dpos) < *state.recovery_entry_distance) {
    state.leave_recovery();
  }

  double t = 0.0;
  for (int round = 0;; ++round) {
    log(out, FrameKind::DATA, current, t);
    const Receptions rx = receive_broadcast(topo, current, radio, rng);
    const double contention_start = t + radio.data_airtime_us;
    ++out.contention_rounds;

    if (state.mode == RoutingState::Mode::Greedy) {
      const CbfRound cbf = run_cbf_round(topo, current, dpos, cfg, rx, rng);
      const auto& res = cbf.result;
      const bool stuck = cfg.recovery && detect_local_optimum(res, cfg.contention);

      if (!stuck && res.outcome == ContentionResult::Outcome::Collision) {
        for (NodeId n : res.nodes) log(out, FrameKind::CTF, n, contention_start + res.resolved_at, rx[n]->payload_ok);
        ++out.collision_count;
        t = contention_start + t_max;
        if (round < cfg.collision_retries) continue;
        out.collision_failure = true;
        out.elapsed_us = t;
        return out;
      }

      if (!stuck && res.has_winner()) {
        const NodeId fwd = res.winner();
        const bool decoded = rx[fwd]->payload_ok;
        const double t_ctf = contention_start + res.resolved_at;
        log(out, FrameKind::CTF, fwd, t_ctf, decoded);
        // Candidates out of range of the winner only learn about it from the
        // SELECT and may still fire before it ends.
        const double t_sel = t_ctf + ctrl;
        for (const auto& c : cbf.candidates) {
          if (c.node == fwd || topo.adjacent(c.node, fwd)) continue;
          const double at = contention_start + c.fire_time;
          if (at > t_ctf && at < t_sel + ctrl) log(out, FrameKind::CTF, c.node, at, rx[c.node]->payload_ok);
        }
        log(out, FrameKind::SELECT, current, t_sel, {}, fwd);

        out.forwarder = fwd;
        out.ctf_offset_us = res.resolved_at;
        out.mode = HopMode::GreedyDirect;
        out.elapsed_us = t_sel + ctrl;
        if (decoded) {
          out.delivered = true;
        } else if (!cfg.cooperative) {
          out.channel_failure = true;
        } else {
          cooperate(topo, current, fwd, cfg, radio, rng, rx, t_ctf + ctrl, t_sel + ctrl, out);
        }
        return out;
      }

      if (!cfg.recovery) {
        out.dead_end = true;
        out.elapsed_us = contention_start + res.resolved_at;
        return out;
      }
      state.enter_recovery(here, dpos);
    }

    // Recovery: planarize the neighborhood and take one face-routing step.
    out.recovery_used = true;
    out.mode = HopMode::Recovery;
    std::vector<NodeId> participants;
    for (NodeId n : topo.neighbors(current)) {
      if (rx[n] && rx[n]->header_ok) participants.push_back(n);
    }
    const BfpOutcome bfp = run_bfp(topo, current, participants, cfg.contention, rng);
    for (const Frame& f : bfp.frames) {
      Frame g = f;
      g.sent_at += contention_start;
      if (g.kind == FrameKind::CTF) g.decoded_ok = rx[g.sender]->payload_ok;
      out.events.push_back(g);
    }
    out.protest_count = static_cast<int>(bfp.protests.size());
    const double t_sel = contention_start + bfp.finished_at;
    const auto next = face_route_step(topo, bfp.planar, state, dpos);
    if (!next) {
      out.dead_end = true;
      out.elapsed_us = t_sel;
      return out;
    }
    log(out, FrameKind::SELECT, current, t_sel, {}, *next);
    out.forwarder = *next;
    out.delivered = rx[*next]->payload_ok;
    out.elapsed_us = t_sel + ctrl;
    if (!out.delivered && cfg.cooperative) {
      // No relay election in recovery; fall back to one direct retransmission.
      const double t_retx = out.elapsed_us;
      log(out, FrameKind::DATA, current, t_retx);
      out.retransmitted = true;
      const double snr = radio.link->draw_snr(topo, current, *next, rng);
      out.delivered = rng.uniform() < radio.success_probability(snr, radio.data_symbols);
      out.elapsed_us = t_retx + radio.data_airtime_us;
    }
    out.channel_failure = !out.delivered;
    return out;
  }
}

}  // namespace

HopOutcome run_hop(const Topology& topo, NodeId current, NodeId dst, const ProtocolConfig& cfg,
                   const Radio& radio, Rng& rng, RoutingState& state) {
  HopOutcome out = hop_state_machine(topo, current, dst, cfg, radio, rng, state);
  std::stable_sort(out.events.begin(), out.events.end(),
                   [](const Frame& a, const Frame& b) { return a.sent_at < b.sent_at; });
  return out;
}

DeliveryReport run_route(const Topology& topo, NodeId src, NodeId dst, const ProtocolConfig& cfg,
                         const Radio& radio, Rng& rng) {
  DeliveryReport report;
  const std::size_t limit = cfg.hop_limit ? cfg.hop_limit : 4 * topo.size();
  RoutingState state;
  NodeId current = src;
  double clock = 0.0;
  while (current != dst && report.hops.size() < limit) {
    HopOutcome hop = run_hop(topo, current, dst, cfg, radio, rng, state);
    for (const Frame& f : hop.events) {
      Frame g = f;
      g.sent_at += clock;
      report.trace.push_back({report.hops.size(), g});
    }
    clock += hop.elapsed_us;
    const bool ok = hop.delivered;
    if (hop.forwarder) {
      report.forwarders.push_back(*hop.forwarder);
      if (hop.relay) report.relays.push_back(*hop.relay);
    }
    const std::optional<NodeId> next = hop.forwarder;
    report.hops.push_back(std::move(hop));
    if (!ok) break;
    current = *next;
  }
  report.delivered = current == dst;
  return report;
}

}  // namespace coopgeo
