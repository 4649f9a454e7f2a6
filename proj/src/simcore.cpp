#include "coopgeo/simcore.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace coopgeo {

namespace {

constexpr double kZ95 = 1.959963984540054;

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw std::invalid_argument(key + ": " + what);
}

double proportion_ci(long hits, long n) {
  if (n <= 0) return 0.0;
  const double p = static_cast<double>(hits) / n;
  return kZ95 * std::sqrt(p * (1 - p) / n);
}

}  // namespace

void SimConfig::validate() const {
  channel.validate();
  (void)Modulation(constellation);
  require(packet_size_octets > 0, "packet_size_octets", "must be positive");
  require(control_frame_octets > 0, "control_frame_octets", "must be positive");
  contention().validate();
  require(collision_retries >= 0, "collision_retries", "must be >= 0");
  metric_params().validate();
  require(range_m > 0, "range_m", "must be positive");
  require(range_m >= channel.reference_distance_m, "range_m", "must be >= reference_distance_m");
  require(replications >= 1, "replications", "must be >= 1");
  require(runs_per_topology >= 1, "runs_per_topology", "must be >= 1");
  if (topology_mode == TopologyMode::PerHopDisk) {
    require(neighbor_count >= 1 && neighbor_count <= 20, "neighbor_count", "must be in [1, 20]");
    require(dst_distance_factor > 1, "dst_distance_factor", "must be > 1");
  } else {
    require(node_count >= 2, "node_count", "must be >= 2");
    require(area_side_m > 0, "area_side_m", "must be positive");
  }
}

SerConstants SimConfig::ser_weights() const {
  SerConstants w = ser_constants(modulation());
  if (metric_a_squared) w.a_squared = *metric_a_squared;
  if (metric_b) w.b = *metric_b;
  return w;
}

RelayMetricParams SimConfig::metric_params() const {
  const SerConstants w = ser_weights();
  return {w.a_squared, w.b, metric_p.value_or(channel.path_loss_exponent)};
}

ContentionConfig SimConfig::contention() const {
  ContentionConfig c;
  c.t_max_us = t_max_us;
  c.nsa = nsa;
  c.collision_window_us =
      collision_window_us.value_or(airtime_us(control_frame_octets, modulation(), channel.bandwidth_hz));
  c.jitter = jitter;
  return c;
}

ProtocolConfig SimConfig::protocol() const {
  ProtocolConfig p;
  p.contention = contention();
  p.metric = metric_params();
  p.relay_side = relay_side;
  p.cooperative = cooperative;
  p.recovery = recovery;
  p.collision_retries = collision_retries;
  p.hop_limit = hop_limit;
  return p;
}

double cycle_time_us(const HopOutcome& hop, const SimConfig& cfg) {
  const Modulation mod = cfg.modulation();
  const double data = airtime_us(cfg.packet_size_octets, mod, cfg.channel.bandwidth_hz);
  const double ctrl = airtime_us(cfg.control_frame_octets, mod, cfg.channel.bandwidth_hz);
  const double t_max = cfg.t_max_us;

  double cycle = hop.contention_rounds * (data + t_max);
  if (hop.forwarder) cycle += 2 * ctrl;  // CTF + SELECT
  if (hop.recovery_used) cycle += t_max / 2 + hop.protest_count * ctrl;

  const bool cbr_ran = hop.relay_transmitted || hop.retransmitted || hop.cbr_elapsed_us > 0;
  if (cbr_ran) {
    cycle += std::max(0.0, hop.ctf_offset_us + ctrl + hop.cbr_elapsed_us - t_max);
  }
  if (hop.relay_transmitted) cycle += ctrl + data;
  if (hop.retransmitted) cycle += data;
  return cycle;
}

double saturated_throughput(const std::vector<HopOutcome>& hops, const SimConfig& cfg) {
  double bits = 0.0;
  double time_us = 0.0;
  for (const HopOutcome& h : hops) {
    if (h.delivered) bits += 8.0 * cfg.packet_size_octets;
    time_us += cycle_time_us(h, cfg);
  }
  if (bits == 0.0 || time_us == 0.0) return 0.0;
  return bits / (time_us * 1e-6);
}

Topology make_topology(const SimConfig& cfg, Rng& rng) {
  if (cfg.topology_mode == TopologyMode::PerHopDisk) {
    return gen_per_hop_topology(cfg.neighbor_count, cfg.range_m, rng, cfg.dst_distance_factor);
  }
  return gen_area_topology(cfg.node_count, cfg.area_side_m, cfg.range_m, rng, cfg.require_connected);
}

ReplicationTally run_replication(const SimConfig& cfg, std::uint64_t index) {
  Rng rng = Rng::substream(cfg.seed, index);
  const Topology topo = make_topology(cfg, rng);

  std::unique_ptr<LinkModel> link;
  if (cfg.channel_model == ChannelModel::Ideal) {
    link = std::make_unique<IdealLink>();
  } else {
    link = std::make_unique<RayleighLink>(cfg.channel);
  }
  const Radio radio =
      Radio::make(*link, cfg.modulation(), cfg.packet_size_octets, cfg.control_frame_octets, cfg.channel.bandwidth_hz);
  const ProtocolConfig proto = cfg.protocol();

  ReplicationTally tally;
  const auto account = [&](const HopOutcome& h) {
    ++tally.hops;
    if (h.failed()) ++tally.failures;
    if (h.collision_failure) ++tally.collision_failures;
    if (h.forwarder) {
      ++tally.transmissions;
      if (!h.delivered) ++tally.transmission_errors;
    }
    if (h.delivered) tally.delivered_bits += 8 * cfg.packet_size_octets;
    tally.cycle_us += cycle_time_us(h, cfg);
  };

  for (long run = 0; run < cfg.runs_per_topology; ++run) {
    if (cfg.topology_mode == TopologyMode::PerHopDisk) {
      RoutingState state;
      account(run_hop(topo, topo.source(), topo.destination(), proto, radio, rng, state));
    } else {
      const DeliveryReport report = run_route(topo, topo.source(), topo.destination(), proto, radio, rng);
      for (const HopOutcome& h : report.hops) account(h);
      tally.route_delivered = report.delivered;
    }
  }
  return tally;
}

MetricsReport run_replications(const SimConfig& cfg) {
  cfg.validate();
  MetricsReport m;
  ReplicationTally sum;
  long routes_delivered = 0;
  std::vector<double> bits;
  std::vector<double> cycles;
  bits.reserve(cfg.replications);
  cycles.reserve(cfg.replications);

  for (long i = 0; i < cfg.replications; ++i) {
    const ReplicationTally t = run_replication(cfg, static_cast<std::uint64_t>(i));
    sum.hops += t.hops;
    sum.failures += t.failures;
    sum.collision_failures += t.collision_failures;
    sum.transmissions += t.transmissions;
    sum.transmission_errors += t.transmission_errors;
    sum.delivered_bits += t.delivered_bits;
    sum.cycle_us += t.cycle_us;
    if (t.route_delivered) ++routes_delivered;
    bits.push_back(static_cast<double>(t.delivered_bits));
    cycles.push_back(t.cycle_us);
  }

  m.replications_used = cfg.replications;
  m.hops = sum.hops;
  m.transmissions = sum.transmissions;
  if (sum.hops > 0) {
    m.per = static_cast<double>(sum.failures) / sum.hops;
    m.collision_rate = static_cast<double>(sum.collision_failures) / sum.hops;
  }
  m.per_ci95 = proportion_ci(sum.failures, sum.hops);
  m.collision_rate_ci95 = proportion_ci(sum.collision_failures, sum.hops);
  if (sum.transmissions > 0) {
    m.tx_error_prob = static_cast<double>(sum.transmission_errors) / sum.transmissions;
  }
  m.tx_error_prob_ci95 = proportion_ci(sum.transmission_errors, sum.transmissions);
  m.delivery_ratio = cfg.topology_mode == TopologyMode::PerHopDisk
                         ? 1.0 - m.per
                         : static_cast<double>(routes_delivered) / cfg.replications;

  // Ratio estimator sum(bits)/sum(time) with a delta-method interval.
  if (sum.cycle_us > 0 && sum.delivered_bits > 0) {
    const double theta = static_cast<double>(sum.delivered_bits) / sum.cycle_us;  // bits per us
    m.saturated_throughput_bps = theta * 1e6;
    const double n = static_cast<double>(cfg.replications);
    if (n > 1) {
      double ss = 0.0;
      for (std::size_t i = 0; i < bits.size(); ++i) {
        const double r = bits[i] - theta * cycles[i];
        ss += r * r;
      }
      const double mean_cycle = sum.cycle_us / n;
      const double se = std::sqrt(ss / (n * (n - 1))) / mean_cycle;
      m.saturated_throughput_ci95 = kZ95 * se * 1e6;
    }
  }
  return m;
}

}  // namespace coopgeo
