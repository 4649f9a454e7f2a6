#pragma once
// Monte-Carlo experiment driver: topology generation per replication,
// per-hop or multi-hop protocol runs, and the estimators for packet error
// rate, transmission error probability and saturated throughput.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coopgeo/channel.hpp"
#include "coopgeo/contention.hpp"
#include "coopgeo/geometry.hpp"
#include "coopgeo/protocol.hpp"

namespace coopgeo {

enum class TopologyMode { PerHopDisk, MultiHopArea };
enum class ChannelModel { Rayleigh, Ideal };

struct SimConfig {
  ChannelParams channel;
  ChannelModel channel_model{ChannelModel::Rayleigh};
  int constellation{64};
  long packet_size_octets{1538};
  long control_frame_octets{20};

  double t_max_us{500.0};
  int nsa{4};
  // Unset: one control-frame airtime.
  std::optional<double> collision_window_us;
  bool jitter{true};
  int collision_retries{1};

  // Unset: modulation defaults for (A^2, B); metric p defaults to the path-loss exponent.
  std::optional<double> metric_a_squared;
  std::optional<double> metric_b;
  std::optional<double> metric_p;
  ReuleauxSide relay_side{ReuleauxSide::Upper};

  bool cooperative{true};
  bool recovery{true};
  std::size_t hop_limit{0};

  TopologyMode topology_mode{TopologyMode::PerHopDisk};
  double range_m{2.5};
  int neighbor_count{10};
  double dst_distance_factor{2.0};
  int node_count{50};
  double area_side_m{15.0};
  bool require_connected{true};

  long replications{20000};
  long runs_per_topology{1};
  std::uint64_t seed{1};

  void validate() const;  // throws std::invalid_argument naming the key

  Modulation modulation() const { return Modulation(constellation); }
  SerConstants ser_weights() const;
  RelayMetricParams metric_params() const;
  ContentionConfig contention() const;
  ProtocolConfig protocol() const;
};

struct MetricsReport {
  double per{0.0};
  double tx_error_prob{0.0};
  double saturated_throughput_bps{0.0};
  double collision_rate{0.0};
  double delivery_ratio{0.0};  // multi-hop only; equals 1 - per in per-hop mode

  double per_ci95{0.0};
  double tx_error_prob_ci95{0.0};
  double saturated_throughput_ci95{0.0};
  double collision_rate_ci95{0.0};

  long replications_used{0};
  long hops{0};
  long transmissions{0};
};

// Channel-time cost of one hop as seen by a saturated sender: every
// contention round occupies one DATA airtime plus the full contention period,
// followed by CTF and SELECT. Relay election runs from the end of the CTF and
// lengthens the cycle only where it outlasts the contention period; a relay
// adds CTR and its DATA airtime, and the fallback adds one DATA airtime.
// Recovery adds the protest window and the protest frames.
double cycle_time_us(const HopOutcome& hop, const SimConfig& cfg);

// Payload bits delivered per second of channel time over a stream of hops.
double saturated_throughput(const std::vector<HopOutcome>& hops, const SimConfig& cfg);

// Per-replication tallies, folded in replication order.
struct ReplicationTally {
  long hops{0};
  long failures{0};
  long collision_failures{0};
  long transmissions{0};  // hops that reached a forwarder
  long transmission_errors{0};
  long delivered_bits{0};
  double cycle_us{0.0};
  bool route_delivered{false};
};

ReplicationTally run_replication(const SimConfig& cfg, std::uint64_t index);

MetricsReport run_replications(const SimConfig& cfg);

// Topology for replication `index`, drawn from the front of its stream.
Topology make_topology(const SimConfig& cfg, Rng& rng);

}  // namespace coopgeo
