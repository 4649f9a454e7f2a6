#include <algorithm>
#include <limits>
#include <stdexcept>

#include "coopgeo/protocol.hpp"

namespace coopgeo {

RayleighLink::RayleighLink(ChannelParams params) : params_(params) { params_.validate(); }

double RayleighLink::draw_snr(const Topology& topo, NodeId from, NodeId to, Rng& rng) const {
  const double d = std::max(distance(topo.position(from), topo.position(to)), params_.reference_distance_m);
  return draw_rayleigh_snr(mean_snr(d, params_), rng).instantaneous_snr;
}

double IdealLink::draw_snr(const Topology&, NodeId, NodeId, Rng&) const {
  return std::numeric_limits<double>::infinity();
}

Radio Radio::make(const LinkModel& link, Modulation mod, long packet_octets, long control_octets,
                  double bandwidth_hz) {
  if (packet_octets <= 0 || control_octets <= 0) throw std::invalid_argument("frame sizes must be positive");
  Radio r;
  r.link = &link;
  r.modulation = mod;
  r.data_symbols = symbols_for(packet_octets, mod);
  r.control_symbols = symbols_for(control_octets, mod);
  r.data_airtime_us = airtime_us(packet_octets, mod, bandwidth_hz);
  r.control_airtime_us = airtime_us(control_octets, mod, bandwidth_hz);
  return r;
}

double Radio::success_probability(double snr, long symbols) const {
  return packet_success(ser_mqam(snr, modulation), symbols);
}

Receptions receive_broadcast(const Topology& topo, NodeId sender, const Radio& radio, Rng& rng) {
  Receptions rx(topo.size());
  for (NodeId n : topo.neighbors(sender)) {
    Reception r;
    r.snr = radio.link->draw_snr(topo, sender, n, rng);
    const double u = rng.uniform();
    r.header_ok = u < radio.success_probability(r.snr, radio.control_symbols);
    r.payload_ok = u < radio.success_probability(r.snr, radio.data_symbols);
    rx[n] = r;
  }
  return rx;
}

const char* to_string(FrameKind k) {
  switch (k) {
    case FrameKind::DATA: return "DATA";
    case FrameKind::CTF: return "CTF";
    case FrameKind::SELECT: return "SELECT";
    case FrameKind::CTR: return "CTR";
    case FrameKind::PROTEST: return "PROTEST";
  }
  return "?";
}

const char* to_string(HopMode m) {
  switch (m) {
    case HopMode::GreedyDirect: return "GreedyDirect";
    case HopMode::GreedyCooperative: return "GreedyCooperative";
    case HopMode::GreedyDirectRetx: return "GreedyDirectRetx";
    case HopMode::Recovery: return "Recovery";
  }
  return "?";
}

}  // namespace coopgeo
