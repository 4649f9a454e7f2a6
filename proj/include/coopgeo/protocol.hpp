#pragma once
// CoopGeo state machines: contention-based forwarder election with the
// DATA/CTF/SELECT handshake, local-optimum detection, select-and-protest
// planarization with face-routing recovery, contention-based relay election,
// cooperative combining and the direct-retransmission fallback.

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "coopgeo/channel.hpp"
#include "coopgeo/contention.hpp"
#include "coopgeo/geometry.hpp"
#include "coopgeo/topology.hpp"

namespace coopgeo {

// ---------------------------------------------------------------------------
// Radio

// Instantaneous SNR of one transmission over one link.
class LinkModel {
 public:
  virtual ~LinkModel() = default;
  virtual double draw_snr(const Topology& topo, NodeId from, NodeId to, Rng& rng) const = 0;
};

// Power-law mean SNR with block Rayleigh fading. Links shorter than the
// reference distance see the mean SNR of the reference distance.
class RayleighLink final : public LinkModel {
 public:
  explicit RayleighLink(ChannelParams params);
  double draw_snr(const Topology& topo, NodeId from, NodeId to, Rng& rng) const override;
  const ChannelParams& params() const { return params_; }

 private:
  ChannelParams params_;
};

// Error-free links.
class IdealLink final : public LinkModel {
 public:
  double draw_snr(const Topology&, NodeId, NodeId, Rng&) const override;
};

struct Radio {
  const LinkModel* link{nullptr};
  Modulation modulation{4};
  long data_symbols{0};
  long control_symbols{0};
  double data_airtime_us{0.0};
  double control_airtime_us{0.0};

  static Radio make(const LinkModel& link, Modulation mod, long packet_octets, long control_octets,
                    double bandwidth_hz);

  double success_probability(double snr, long symbols) const;
};

// Outcome of one broadcast at one receiver. Header and payload decoding share
// the same fading draw and the same uniform, so payload_ok implies header_ok.
struct Reception {
  double snr{0.0};
  bool header_ok{false};
  bool payload_ok{false};
};

// Indexed by NodeId; empty for nodes out of range of the sender.
using Receptions = std::vector<std::optional<Reception>>;

Receptions receive_broadcast(const Topology& topo, NodeId sender, const Radio& radio, Rng& rng);

// ---------------------------------------------------------------------------
// Protocol state

struct ProtocolConfig {
  ContentionConfig contention;
  RelayMetricParams metric;
  ReuleauxSide relay_side{ReuleauxSide::Upper};
  bool cooperative{true};
  // When disabled, NPA candidates may win forwarder election after the PPA
  // half-window and silence fails the hop instead of entering recovery.
  bool recovery{true};
  int collision_retries{1};
  // 0 selects 4 * |V|.
  std::size_t hop_limit{0};
};

enum class FrameKind { DATA, CTF, SELECT, CTR, PROTEST };
const char* to_string(FrameKind k);

struct Frame {
  FrameKind kind{FrameKind::DATA};
  NodeId sender{0};
  double sent_at{0.0};
  std::optional<bool> decoded_ok;  // CTF
  std::optional<NodeId> target;    // SELECT, CTR, PROTEST
};

enum class HopMode { GreedyDirect, GreedyCooperative, GreedyDirectRetx, Recovery };
const char* to_string(HopMode m);

struct HopOutcome {
  std::optional<NodeId> forwarder;
  std::optional<NodeId> relay;
  HopMode mode{HopMode::GreedyDirect};
  std::vector<Frame> events;  // hop-relative times
  int collision_count{0};
  bool channel_failure{false};
  bool collision_failure{false};
  bool dead_end{false};
  bool delivered{false};  // forwarder holds a correctly decoded copy
  double elapsed_us{0.0};

  // Timing details consumed by the throughput accounting.
  int contention_rounds{0};
  double ctf_offset_us{0.0};    // winning CTF timer within its contention period
  double cbr_elapsed_us{0.0};   // relay election time measured from the end of the CTF
  bool relay_transmitted{false};
  bool retransmitted{false};
  bool recovery_used{false};
  int protest_count{0};

  bool failed() const { return !delivered; }
};

struct PlanarNeighborhood {
  NodeId center{0};
  std::vector<NodeId> edges;  // sorted ids

  bool contains(NodeId n) const;
};

struct RoutingState {
  enum class Mode { Greedy, Recovery };

  Mode mode{Mode::Greedy};
  std::optional<double> recovery_entry_distance;
  Point2D entry_point;  // where recovery began
  Point2D face_point;   // last face change point
  std::optional<NodeId> previous;
  std::set<std::pair<NodeId, NodeId>> visited;  // directed edges this episode

  void enter_recovery(Point2D here, Point2D dst);
  void leave_recovery();
};

// ---------------------------------------------------------------------------
// Forwarder election

struct CbfCandidate {
  NodeId node{0};
  int csa{0};
  Progress progress{Progress::PPA};
  double fire_time{0.0};
};

struct CbfRound {
  ContentionResult result;
  std::vector<CbfCandidate> candidates;
};

// Neighbors that decoded the DATA header bid with CSA-based timers. With
// recovery enabled only PPA nodes bid and silence resolves at t_max/2.
CbfRound run_cbf_round(const Topology& topo, NodeId current, Point2D dst, const ProtocolConfig& cfg,
                       const Receptions& rx, Rng& rng);

// True iff no PPA CTF arrived before t_max/2.
bool detect_local_optimum(const ContentionResult& result, const ContentionConfig& cfg);

// ---------------------------------------------------------------------------
// Recovery

struct BfpOutcome {
  PlanarNeighborhood planar;
  std::vector<Frame> frames;  // relative to the start of the contention period
  std::vector<NodeId> responders;
  std::vector<NodeId> hidden;
  std::vector<std::pair<NodeId, NodeId>> protests;  // (protester, violating node)
  double finished_at{0.0};
};

// Select-and-protest planarization around `center` among `participants`.
// Selection: responders fire nearest-first; a pending node that hears a CTF
// from a node inside its own Gabriel circle with the center is suppressed and
// becomes hidden. Protest: each hidden node protests every responder whose
// Gabriel circle contains it, unless another protest for that responder was
// heard first. The center drops protested responders and any responder whose
// circle contains another responder.
BfpOutcome run_bfp(const Topology& topo, NodeId center, const std::vector<NodeId>& participants,
                   const ContentionConfig& cfg, Rng& rng);
BfpOutcome run_bfp(const Topology& topo, NodeId center, const ContentionConfig& cfg, Rng& rng);

// Right-hand-rule step over the planar neighborhood of the current node with
// face changes on the segment from the recovery entry point to dst. Returns
// nullopt on a dead end or when a directed edge would be traversed twice.
std::optional<NodeId> face_route_step(const Topology& topo, const PlanarNeighborhood& planar,
                                      RoutingState& state, Point2D dst);

// ---------------------------------------------------------------------------
// Relay election

struct RelayCandidate {
  NodeId node{0};
  double metric{0.0};
  double mapped{0.0};
  double fire_time{0.0};
};

struct CbrRound {
  ContentionResult result;
  std::vector<RelayCandidate> candidates;
  double f_star{0.0};
  double f_max{0.0};
};

// Candidates decoded the source DATA, lie inside the relay region built on
// src->forwarder and hear both ends of the handshake.
CbrRound run_cbr_round(const Topology& topo, NodeId src, NodeId forwarder, const ProtocolConfig& cfg,
                       const Receptions& rx, Rng& rng);

// ---------------------------------------------------------------------------
// Hop and route

HopOutcome run_hop(const Topology& topo, NodeId current, NodeId dst, const ProtocolConfig& cfg,
                   const Radio& radio, Rng& rng, RoutingState& state);

struct TraceLine {
  std::size_t hop{0};
  Frame frame;  // absolute time
};

struct DeliveryReport {
  std::vector<HopOutcome> hops;
  bool delivered{false};
  std::vector<NodeId> forwarders;  // P_F
  std::vector<NodeId> relays;      // P_R
  std::vector<TraceLine> trace;
};

DeliveryReport run_route(const Topology& topo, NodeId src, NodeId dst, const ProtocolConfig& cfg,
                         const Radio& radio, Rng& rng);

}  // namespace coopgeo
