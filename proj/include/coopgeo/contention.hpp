#pragma once
// Timer functions for the three contention processes (forwarder election,
// planarization responses, relay election) and the rule that turns a set of
// timer bids into a winner, a collision or silence.

#include <cstdint>
#include <vector>

#include "coopgeo/rng.hpp"

namespace coopgeo {

using NodeId = std::uint32_t;

struct ContentionConfig {
  double t_max_us{500.0};
  int nsa{4};
  // Two bids whose fire times differ by at most this much collide.
  double collision_window_us{0.0};
  // Disabling jitter makes every timer a deterministic function of its input.
  bool jitter{true};

  void validate() const;  // throws std::invalid_argument
};

enum class BidKind { CTF, CTR, PROTEST };

struct Bid {
  NodeId node{0};
  double fire_time{0.0};
  BidKind kind{BidKind::CTF};
};

struct ContentionResult {
  enum class Outcome { Winner, Collision, Silence };

  Outcome outcome{Outcome::Silence};
  std::vector<NodeId> nodes;  // one id for Winner, >= 2 for Collision
  double resolved_at{0.0};

  bool has_winner() const { return outcome == Outcome::Winner; }
  NodeId winner() const { return nodes.front(); }
};

const char* to_string(ContentionResult::Outcome o);

// csa * t_max/nsa + U[0, t_max/nsa).
double t_cbf(int csa, const ContentionConfig& cfg, Rng& rng);

// Recovery-phase response timer, nearest node first:
// t_max/2 * (1 + d/range) + U[0, t_max/(4 nsa)).
double t_bfp(double d_to_sender, double range, const ContentionConfig& cfg, Rng& rng);

// Upper bound of t_bfp over the whole range, including jitter.
double t_bfp_max(const ContentionConfig& cfg);

// t_max * mapped + U[0, 2 t_max/nsa).
double t_cbr(double mapped, const ContentionConfig& cfg, Rng& rng);

// Upper bound of t_cbr, i.e. how long a sender waits before declaring silence.
double t_cbr_max(const ContentionConfig& cfg);

// Earliest bid wins unless another bid fires within the collision window of
// it, in which case every bid inside that window collides. Ties between equal
// fire times are ordered by node id, so the result does not depend on the
// order of `bids`.
ContentionResult resolve(const std::vector<Bid>& bids, const ContentionConfig& cfg);

}  // namespace coopgeo
