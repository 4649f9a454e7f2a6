#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include "coopgeo/simcore.hpp"
#include "oracles.hpp"

using namespace coopgeo;

namespace {

class ConstantLink final : public LinkModel {
 public:
  explicit ConstantLink(double snr) : snr_(snr) {}
  double draw_snr(const Topology&, NodeId, NodeId, Rng&) const override { return snr_; }

 private:
  double snr_;
};

bool bfs_path(const Topology& topo, NodeId a, NodeId b) {
  std::vector<bool> seen(topo.size());
  std::deque<NodeId> q{a};
  seen[a] = true;
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop_front();
    if (u == b) return true;
    for (NodeId v = 0; v < topo.size(); ++v) {
      if (!seen[v] && distance(topo.position(u), topo.position(v)) <= topo.range()) {
        seen[v] = true;
        q.push_back(v);
      }
    }
  }
  return false;
}

SimConfig small(long reps) {
  SimConfig c;
  c.replications = reps;
  return c;
}

}  // namespace

TEST_CASE("per-hop topology") {
  Rng rng(1);
  const Topology t1 = gen_per_hop_topology(1, 2.5, rng);
  CHECK(t1.size() == 3);
  CHECK(t1.position(t1.source()) == Point2D{0, 0});
  CHECK(t1.position(t1.destination()) == Point2D{5.0, 0});
  for (int n : {1, 5, 20}) {
    const Topology t = gen_per_hop_topology(n, 2.5, rng);
    for (NodeId i = 2; i < t.size(); ++i) CHECK(t.adjacent(t.source(), i));
    CHECK_FALSE(t.adjacent(t.source(), t.destination()));
  }
  CHECK_THROWS(gen_per_hop_topology(0, 2.5, rng));
}

TEST_CASE("topology adjacency is the symmetric unit-disk relation") {
  Rng rng(2);
  const Topology t = gen_area_topology(60, 10, 2, rng, false);
  for (NodeId a = 0; a < t.size(); ++a) {
    for (NodeId b = 0; b < t.size(); ++b) {
      if (a == b) continue;
      CHECK(t.adjacent(a, b) == t.adjacent(b, a));
      CHECK(t.adjacent(a, b) == (distance(t.position(a), t.position(b)) <= 2.0));
    }
  }
}

TEST_CASE("per-hop neighbors are uniform over the disk (chi-square)") {
  // 4 equal-area rings x 8 sectors
  Rng rng(3);
  const int rings = 4, sectors = 8, cells = rings * sectors;
  std::vector<long> count(cells, 0);
  long total = 0;
  while (total < 100000) {
    const Topology t = gen_per_hop_topology(20, 2.0, rng);
    for (NodeId i = 2; i < t.size(); ++i) {
      const Point2D p = t.position(i);
      const double r2 = (p.x * p.x + p.y * p.y) / 4.0;
      double th = std::atan2(p.y, p.x);
      if (th < 0) th += 2 * std::numbers::pi;
      const int ring = std::min(rings - 1, static_cast<int>(r2 * rings));
      const int sec = std::min(sectors - 1, static_cast<int>(th / (2 * std::numbers::pi) * sectors));
      ++count[ring * sectors + sec];
      ++total;
    }
  }
  const double expected = static_cast<double>(total) / cells;
  double chi2 = 0;
  for (long c : count) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 44.985);  // 95th percentile, 31 degrees of freedom
}

TEST_CASE("area topology") {
  Rng rng(4);
  const Topology two = gen_area_topology(2, 10, 3, rng, false);
  CHECK(two.size() == 2);
  CHECK(two.source() != two.destination());
  for (int i = 0; i < 200; ++i) {
    const Topology t = gen_area_topology(30, 10, 2.5, rng, true);
    CHECK(bfs_path(t, t.source(), t.destination()));
    CHECK(t.connected(t.source(), t.destination()));
  }
  CHECK_THROWS(gen_area_topology(1, 10, 2, rng, false));
}

TEST_CASE("area topology density") {
  Rng rng(5);
  const int n = 50;
  const double side = 100, range = 2;
  double degree_sum = 0;
  long nodes = 0;
  for (int i = 0; i < 10000; ++i) {
    const Topology t = gen_area_topology(n, side, range, rng, false);
    for (NodeId a = 0; a < t.size(); ++a) degree_sum += t.neighbors(a).size();
    nodes += n;
  }
  const double expected = (n - 1) * std::numbers::pi * range * range / (side * side);
  CHECK(std::abs(degree_sum / nodes - expected) / expected < 0.05);
}

TEST_CASE("config validation names the key") {
  SimConfig c;
  CHECK_NOTHROW(c.validate());
  c.neighbor_count = 21;
  try {
    c.validate();
    FAIL("expected rejection");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("neighbor_count") != std::string::npos);
    CHECK(std::string(e.what()).find("[1, 20]") != std::string::npos);
  }
  c = {};
  c.replications = 0;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("replications"), std::invalid_argument);
  c = {};
  c.nsa = 3;
  CHECK_THROWS(c.validate());
  c = {};
  c.constellation = 32;
  CHECK_THROWS(c.validate());
}

TEST_CASE("ideal channel with one neighbor never fails") {
  SimConfig c = small(2000);
  c.channel_model = ChannelModel::Ideal;
  c.neighbor_count = 1;
  c.cooperative = false;
  const MetricsReport m = run_replications(c);
  CHECK(m.per == 0.0);
  CHECK(m.tx_error_prob == 0.0);
  CHECK(m.replications_used == 2000);
}

TEST_CASE("identical seeds give identical reports") {
  SimConfig c = small(3000);
  c.constellation = 16;
  const MetricsReport a = run_replications(c);
  const MetricsReport b = run_replications(c);
  CHECK(a.per == b.per);
  CHECK(a.tx_error_prob == b.tx_error_prob);
  CHECK(a.saturated_throughput_bps == b.saturated_throughput_bps);
  CHECK(a.saturated_throughput_ci95 == b.saturated_throughput_ci95);
  CHECK(a.collision_rate == b.collision_rate);
  c.seed = 2;
  const MetricsReport d = run_replications(c);
  CHECK(d.saturated_throughput_bps != a.saturated_throughput_bps);
}

TEST_CASE("replication tallies do not depend on evaluation order") {
  SimConfig c = small(50);
  const ReplicationTally t7 = run_replication(c, 7);
  for (std::uint64_t i = 0; i < 20; ++i) (void)run_replication(c, i);
  const ReplicationTally again = run_replication(c, 7);
  CHECK(t7.failures == again.failures);
  CHECK(t7.cycle_us == again.cycle_us);
}

TEST_CASE("metrics are probabilities with non-negative intervals") {
  for (bool coop : {false, true}) {
    for (TopologyMode mode : {TopologyMode::PerHopDisk, TopologyMode::MultiHopArea}) {
      SimConfig c = small(300);
      c.cooperative = coop;
      c.constellation = 16;
      c.topology_mode = mode;
      c.node_count = 40;
      c.area_side_m = 10;
      const MetricsReport m = run_replications(c);
      for (double p : {m.per, m.tx_error_prob, m.collision_rate, m.delivery_ratio}) {
        CHECK(p >= 0);
        CHECK(p <= 1);
      }
      for (double ci : {m.per_ci95, m.tx_error_prob_ci95, m.saturated_throughput_ci95, m.collision_rate_ci95}) {
        CHECK(ci >= 0);
      }
      CHECK(m.saturated_throughput_bps > 0);
    }
  }
}

TEST_CASE("one-neighbor hop PER matches the closed forms") {
  // neighbor at fixed position, non-cooperative: the hop fails iff the
  // payload is lost
  const Topology topo({{0, 0}, {5, 0}, {2, 0}}, 2.5, 0, 1);
  ProtocolConfig proto = SimConfig{}.protocol();
  proto.cooperative = false;
  const Modulation mod(4);
  const long n_sym = symbols_for(1538, mod);
  const int trials = 20000;

  SUBCASE("fixed SNR") {
    const double snr = 14.0;
    ConstantLink link(snr);
    const Radio radio = Radio::make(link, mod, 1538, 20, 22e6);
    Rng rng(6);
    int fails = 0;
    for (int i = 0; i < trials; ++i) {
      RoutingState st;
      if (run_hop(topo, 0, 1, proto, radio, rng, st).failed()) ++fails;
    }
    const double p = 1 - packet_success(ser_mqam(snr, mod), n_sym);
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(static_cast<double>(fails) / trials - p) < 3 * sigma);
  }

  SUBCASE("Rayleigh, integrated over the exponential density") {
    ChannelParams ch;
    RayleighLink link(ch);
    const Radio radio = Radio::make(link, mod, 1538, 20, 22e6);
    const double mean = mean_snr(2.0, ch);
    const double success = oracle::simpson(
        [&](double x) {
          const double s = 1 - 0.5 * std::erfc(std::sqrt(x / 2));  // QPSK: one axis errs with Q(sqrt(x))
          return std::exp(n_sym * std::log(std::max(s * s, 1e-300))) * std::exp(-x / mean) / mean;
        },
        0, 40 * mean, 400000);
    Rng rng(7);
    int fails = 0;
    for (int i = 0; i < trials; ++i) {
      RoutingState st;
      if (run_hop(topo, 0, 1, proto, radio, rng, st).failed()) ++fails;
    }
    const double p = 1 - success;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(static_cast<double>(fails) / trials - p) < 3 * sigma);
  }
}

TEST_CASE("saturated throughput accounting") {
  SimConfig c;
  c.constellation = 64;
  c.channel_model = ChannelModel::Ideal;
  HopOutcome direct;
  direct.forwarder = 2;
  direct.delivered = true;
  direct.contention_rounds = 1;
  direct.ctf_offset_us = 40;
  // DATA + contention period + CTF + SELECT at 64-QAM, 22 MHz
  CHECK(cycle_time_us(direct, c) == doctest::Approx(595.6363636363636));
  CHECK(saturated_throughput({direct}, c) == doctest::Approx(20656898.65689866).epsilon(1e-9));

  HopOutcome coop = direct;
  coop.relay = 3;
  coop.relay_transmitted = true;
  coop.cbr_elapsed_us = 100;
  CHECK(cycle_time_us(coop, c) > cycle_time_us(direct, c));

  HopOutcome lost = direct;
  lost.delivered = false;
  CHECK(saturated_throughput({lost}, c) == 0.0);
  CHECK(saturated_throughput({}, c) == 0.0);
}

TEST_CASE("confidence intervals shrink with the square root of replications") {
  SimConfig c = small(6000);
  c.constellation = 16;
  const MetricsReport a = run_replications(c);
  c.replications = 12000;
  const MetricsReport b = run_replications(c);
  const double r_per = b.per_ci95 / a.per_ci95;
  const double r_thr = b.saturated_throughput_ci95 / a.saturated_throughput_ci95;
  CHECK(std::abs(r_per - std::sqrt(0.5)) / std::sqrt(0.5) < 0.2);
  CHECK(std::abs(r_thr - std::sqrt(0.5)) / std::sqrt(0.5) < 0.2);
}

TEST_CASE("PER does not increase with transmit power") {
  for (bool coop : {false, true}) {
    SimConfig c = small(4000);
    c.constellation = 16;
    c.cooperative = coop;
    double prev = 1.0, prev_ci = 0.0;
    for (double tx : {10.0, 15.0, 20.0, 25.0, 30.0, 35.0}) {
      c.channel.tx_power_dbm = tx;
      const MetricsReport m = run_replications(c);
      CHECK(m.per <= prev + prev_ci + m.per_ci95);
      prev = m.per;
      prev_ci = m.per_ci95;
    }
  }
}
