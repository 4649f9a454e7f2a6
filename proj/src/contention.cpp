#include "coopgeo/contention.hpp"

#include <algorithm>
#include <stdexcept>

namespace coopgeo {

void ContentionConfig::validate() const {
  if (!(t_max_us > 0)) throw std::invalid_argument("t_max_us must be > 0");
  if (!(collision_window_us >= 0)) throw std::invalid_argument("collision_window_us must be >= 0");
  if (nsa < 2 || nsa % 2 != 0) throw std::invalid_argument("nsa must be even and >= 2");
}

const char* to_string(ContentionResult::Outcome o) {
  switch (o) {
    case ContentionResult::Outcome::Winner: return "Winner";
    case ContentionResult::Outcome::Collision: return "Collision";
    case ContentionResult::Outcome::Silence: return "Silence";
  }
  return "?";
}

double t_cbf(int csa, const ContentionConfig& cfg, Rng& rng) {
  if (csa < 0 || csa >= cfg.nsa) throw std::invalid_argument("t_cbf: csa outside [0, nsa)");
  const double band = cfg.t_max_us / cfg.nsa;
  return csa * band + (cfg.jitter ? rng.uniform() * band : 0.0);
}

double t_bfp(double d_to_sender, double range, const ContentionConfig& cfg, Rng& rng) {
  if (!(d_to_sender >= 0 && d_to_sender <= range)) {
    throw std::invalid_argument("t_bfp: distance outside (0, range]");
  }
  const double base = cfg.t_max_us / 2 * (1 + d_to_sender / range);
  return base + (cfg.jitter ? rng.uniform() * cfg.t_max_us / (4.0 * cfg.nsa) : 0.0);
}

double t_bfp_max(const ContentionConfig& cfg) {
  return cfg.t_max_us + (cfg.jitter ? cfg.t_max_us / (4.0 * cfg.nsa) : 0.0);
}

double t_cbr(double mapped, const ContentionConfig& cfg, Rng& rng) {
  if (!(mapped >= 0 && mapped <= 1)) throw std::invalid_argument("t_cbr: mapped outside [0,1]");
  return cfg.t_max_us * mapped + (cfg.jitter ? rng.uniform() * 2 * cfg.t_max_us / cfg.nsa : 0.0);
}

double t_cbr_max(const ContentionConfig& cfg) {
  return cfg.t_max_us + (cfg.jitter ? 2 * cfg.t_max_us / cfg.nsa : 0.0);
}

ContentionResult resolve(const std::vector<Bid>& bids, const ContentionConfig& cfg) {
  ContentionResult result;
  if (bids.empty()) return result;

  std::vector<Bid> sorted = bids;
  std::sort(sorted.begin(), sorted.end(), [](const Bid& a, const Bid& b) {
    return a.fire_time != b.fire_time ? a.fire_time < b.fire_time : a.node < b.node;
  });
  const double t1 = sorted.front().fire_time;
  result.resolved_at = t1;
  for (const Bid& b : sorted) {
    if (b.fire_time - t1 > cfg.collision_window_us) break;
    result.nodes.push_back(b.node);
  }
  result.outcome = result.nodes.size() == 1 ? ContentionResult::Outcome::Winner
                                            : ContentionResult::Outcome::Collision;
  return result;
}

}  // namespace coopgeo
