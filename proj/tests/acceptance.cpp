// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Takes the path of the coopgeo binary as argv[1] (criterion 11).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coopgeo/simcore.hpp"
#include "oracles.hpp"

using namespace coopgeo;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass{false};
  std::string detail;
};

std::vector<Point2D> random_disk(Rng& rng, int n, double range) {
  std::vector<Point2D> pts;
  for (int i = 0; i < n; ++i) {
    const double r = range * std::sqrt(rng.uniform()), t = 2 * std::numbers::pi * rng.uniform();
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return pts;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// average ranks, ties shared
std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (i + j) / 2.0 + 1;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1) / 2;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxy / std::sqrt(sxx * syy);
}

// weighted pool-adjacent-violators fit, non-increasing
std::vector<double> isotonic_decreasing(const std::vector<double>& y, const std::vector<double>& w) {
  struct Block {
    double sum_wy, sum_w;
    std::size_t count;
  };
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < y.size(); ++i) {
    blocks.push_back({w[i] * y[i], w[i], 1});
    while (blocks.size() > 1) {
      const Block& b = blocks.back();
      const Block& a = blocks[blocks.size() - 2];
      if (a.sum_wy / a.sum_w >= b.sum_wy / b.sum_w) break;
      const Block merged{a.sum_wy + b.sum_wy, a.sum_w + b.sum_w, a.count + b.count};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> fit;
  for (const Block& b : blocks) fit.insert(fit.end(), b.count, b.sum_wy / b.sum_w);
  return fit;
}

struct Curve {
  std::vector<double> density;
  std::vector<MetricsReport> coop, direct;
};

Curve density_curve(int constellation) {
  Curve c;
  for (int n = 2; n <= 20; ++n) {
    SimConfig cfg;
    cfg.constellation = constellation;
    cfg.neighbor_count = n;
    cfg.replications = 20000;
    cfg.cooperative = true;
    c.coop.push_back(run_replications(cfg));
    cfg.cooperative = false;
    c.direct.push_back(run_replications(cfg));
    c.density.push_back(n);
  }
  return c;
}

Verdict per_trend(const Curve& c) {
  bool below = true;
  double best = 0;
  int best_n = 0;
  std::vector<double> ratio;
  for (std::size_t i = 0; i < c.density.size(); ++i) {
    below &= c.coop[i].per < c.direct[i].per;
    const double r = c.coop[i].per > 0 ? c.direct[i].per / c.coop[i].per : INFINITY;
    ratio.push_back(r);
    if (r > best) {
      best = r;
      best_n = static_cast<int>(c.density[i]);
    }
  }
  const double rho = spearman(c.density, ratio);
  std::ostringstream d;
  d << "coop<direct at all n: " << (below ? "yes" : "no") << ", best ratio " << fmt("%.2f", best) << " at n="
    << best_n << ", spearman " << fmt("%.3f", rho);
  return {below && best >= 2.0 && rho < 0, d.str()};
}

Verdict tx_error_trend(const Curve& c) {
  std::vector<double> y, w;
  for (const MetricsReport& m : c.coop) {
    const double se = std::max(m.tx_error_prob_ci95 / 1.96, 1e-9);
    y.push_back(m.tx_error_prob);
    w.push_back(1 / (se * se));
  }
  const std::vector<double> fit = isotonic_decreasing(y, w);
  double chi2 = 0;
  for (std::size_t i = 0; i < y.size(); ++i) chi2 += w[i] * (y[i] - fit[i]) * (y[i] - fit[i]);
  const double critical = 28.869;  // chi-square 95th percentile, 18 degrees of freedom
  std::ostringstream d;
  d << "tx error " << fmt("%.4f", y.front()) << " -> " << fmt("%.4f", y.back()) << ", residual chi2 "
    << fmt("%.3f", chi2) << " vs " << critical;
  return {chi2 <= critical, d.str()};
}

Verdict throughput_trend(const Curve& c) {
  bool ok = true;
  double worst = INFINITY;
  for (std::size_t i = 0; i < c.density.size(); ++i) {
    ok &= c.coop[i].saturated_throughput_bps >= c.direct[i].saturated_throughput_bps;
    worst = std::min(worst, c.coop[i].saturated_throughput_bps - c.direct[i].saturated_throughput_bps);
  }
  std::ostringstream d;
  d << "min(coop - direct) " << fmt("%.4g", worst / 1e6) << " Mbps, n=20: "
    << fmt("%.2f", c.coop.back().saturated_throughput_bps / 1e6) << " vs "
    << fmt("%.2f", c.direct.back().saturated_throughput_bps / 1e6);
  return {ok, d.str()};
}

ContentionConfig quiet_contention() {
  ContentionConfig c;
  c.collision_window_us = 0;
  return c;
}

Verdict bfp_gabriel() {
  Rng rng(101);
  const ContentionConfig cfg = quiet_contention();
  int mismatches = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Point2D> pts{{0, 0}};
    for (Point2D p : random_disk(rng, 5 + trial % 16, 1.0)) pts.push_back(p);
    const Topology topo(pts, 1.0, 0, 0);
    const BfpOutcome out = run_bfp(topo, 0, cfg, rng);
    std::vector<std::size_t> nbrs(topo.neighbors(0).begin(), topo.neighbors(0).end());
    if (std::set<std::size_t>(out.planar.edges.begin(), out.planar.edges.end()) !=
        oracle::gabriel_neighbors(pts, 0, nbrs)) {
      ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(trials - mismatches) + "/" + std::to_string(trials) + " match"};
}

Verdict delivery() {
  SimConfig sc;
  sc.channel_model = ChannelModel::Ideal;
  sc.collision_window_us = 0.0;
  sc.node_count = 50;
  const ProtocolConfig proto = sc.protocol();
  IdealLink link;
  const Radio radio = Radio::make(link, sc.modulation(), sc.packet_size_octets, sc.control_frame_octets,
                                  sc.channel.bandwidth_hz);
  Rng rng(202);
  int delivered = 0;
  long hops = 0, recovery = 0;
  const int trials = 500;
  for (int i = 0; i < trials; ++i) {
    const Topology topo = gen_area_topology(sc.node_count, sc.area_side_m, sc.range_m, rng, true);
    const DeliveryReport rep = run_route(topo, topo.source(), topo.destination(), proto, radio, rng);
    if (rep.delivered) ++delivered;
    for (const HopOutcome& h : rep.hops) {
      ++hops;
      if (h.mode == HopMode::Recovery) ++recovery;
    }
  }
  std::ostringstream d;
  d << delivered << "/" << trials << " delivered, " << recovery << " of " << hops << " hops in recovery";
  return {delivered == trials, d.str()};
}

Verdict relay_argmin() {
  SimConfig sc;
  sc.jitter = false;
  sc.collision_window_us = 0.0;
  sc.constellation = 16;
  const ProtocolConfig cfg = sc.protocol();
  Rng rng(303);
  int matches = 0, silent_ok = 0, bad = 0;
  const int trials = 10000;
  for (int trial = 0; trial < trials; ++trial) {
    const double hop = 0.3 + 0.7 * rng.uniform();
    const double ang = 2 * std::numbers::pi * rng.uniform();
    std::vector<Point2D> pts{{0, 0}, {hop * std::cos(ang), hop * std::sin(ang)}};
    for (Point2D p : random_disk(rng, 2 + trial % 18, 1.0)) pts.push_back(p);
    const Topology topo(pts, 1.0, 0, 1);
    Receptions rx(topo.size());
    for (NodeId n : topo.neighbors(0)) rx[n] = Reception{1e9, true, rng.uniform() < 0.7};

    const CbrRound r = run_cbr_round(topo, 0, 1, cfg, rx, rng);
    const ReuleauxRegion region = reuleaux_region(pts[0], pts[1], true);
    std::optional<NodeId> best;
    double best_f = INFINITY;
    for (NodeId n : topo.neighbors(0)) {
      if (n == 1 || !rx[n]->payload_ok || !topo.adjacent(n, 1) || !reuleaux_contains(region, pts[n])) continue;
      const double f = oracle::metric(pts[n], pts[0], pts[1], cfg.metric.a_squared, cfg.metric.b, cfg.metric.p);
      if (f < best_f) {
        best_f = f;
        best = n;
      }
    }
    if (!best) {
      (r.result.outcome == ContentionResult::Outcome::Silence ? silent_ok : bad)++;
    } else if (r.result.has_winner() && r.result.winner() == *best) {
      ++matches;
    } else {
      ++bad;
    }
  }
  std::ostringstream d;
  d << matches << " winners + " << silent_ok << " empty regions match, " << bad << " mismatches";
  return {bad == 0, d.str()};
}

Verdict closed_form() {
  Rng rng(404);
  double worst = 0;
  const int trials = 1000;
  for (int i = 0; i < trials; ++i) {
    const Point2D s{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const Point2D d{rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double a2 = rng.uniform(0.05, 2), b = rng.uniform(0.05, 2);
    const Point2D x = optimal_relay_point(s, d, {a2, b, 2});
    const Point2D ref = oracle::grid_refine_minimizer(s, d, a2, b, 2, 200);
    worst = std::max(worst, distance(x, ref));
  }
  return {worst <= 1e-6, "max distance " + fmt("%.3g", worst) + " over " + std::to_string(trials) + " cases"};
}

Verdict timer_partition() {
  const ContentionConfig cfg;
  Rng rng(505);
  long violations = 0, ppa = 0, npa = 0;
  const double half = cfg.t_max_us / 2, band = cfg.t_max_us / cfg.nsa, range = 1.0;
  const Point2D src{0, 0}, dst{3, 0};
  for (long i = 0; i < 1000000; ++i) {
    const double r = range * std::sqrt(rng.uniform()), t = 2 * std::numbers::pi * rng.uniform();
    const Point2D cand{r * std::cos(t), r * std::sin(t)};
    const Progress p = classify_progress(src, dst, cand, range);
    if (p == Progress::OutOfRange) continue;
    const int csa = csa_index(src, dst, cand, range, cfg.nsa);
    const double timer = t_cbf(csa, cfg, rng);
    if (timer < csa * band || timer >= (csa + 1) * band) ++violations;
    if (p == Progress::PPA) {
      ++ppa;
      if (!(timer < half)) ++violations;
    } else {
      ++npa;
      if (!(timer >= half)) ++violations;
    }
  }
  std::ostringstream d;
  d << violations << " violations (" << ppa << " PPA, " << npa << " NPA draws)";
  return {violations == 0, d.str()};
}

Verdict ser_monte_carlo() {
  int failures = 0;
  double worst = 0;
  std::uint64_t seed = 606;
  for (int m : {4, 16, 64}) {
    for (double db : {0.0, 5.0, 10.0, 15.0, 20.0}) {
      const double snr = db_to_linear(db);
      const long n = 10000000;
      const long errors = oracle::qam_symbol_errors(m, snr, n, seed++);
      const double p = ser_mqam(snr, Modulation(m));
      const double sigma = std::sqrt(p * (1 - p) / n);
      const double z = std::abs(static_cast<double>(errors) / n - p) / sigma;
      worst = std::max(worst, z);
      if (z > 3) ++failures;
    }
  }
  return {failures == 0, std::to_string(15 - failures) + "/15 points within 3 sigma, max |z| " + fmt("%.2f", worst)};
}

Verdict mrc_dominance() {
  Rng rng(707);
  long violations = 0;
  const ChannelParams ch;
  for (int i = 0; i < 100000; ++i) {
    const int m = std::vector<int>{4, 16, 64}[i % 3];
    const Modulation mod(m);
    const long n = symbols_for(1538, mod);
    const double d_sd = rng.uniform(1, 5), d_rd = rng.uniform(1, 5);
    const double direct = draw_rayleigh_snr(mean_snr(d_sd, ch), rng).instantaneous_snr;
    const double relay = draw_rayleigh_snr(mean_snr(d_rd, ch), rng).instantaneous_snr;
    if (packet_success(ser_mqam(mrc_combine(direct, relay), mod), n) < packet_success(ser_mqam(direct, mod), n)) {
      ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations over 100000 paired draws"};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict determinism(const std::string& binary) {
  const fs::path dir = fs::temp_directory_path() / "coopgeo_acceptance";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "run.cfg") << "replications = 2000\nconstellation = 16\nseed = 42\n";
    std::ofstream(dir / "sweep.cfg") << "replications = 500\nneighbor_count = 2,8,14\ncooperative = both\n";
    std::ofstream(dir / "trace.cfg") << "topology_mode = multi_hop_area\nconstellation = 16\nseed = 9\n";
  }
  struct Case {
    std::string cmd, cfg, fmt;
  };
  const std::vector<Case> cases{{"run", "run.cfg", "csv"},     {"run", "run.cfg", "json"},
                                {"sweep", "sweep.cfg", "csv"}, {"sweep", "sweep.cfg", "json"},
                                {"trace", "trace.cfg", "csv"}, {"trace", "trace.cfg", "json"}};
  int identical = 0;
  std::string problems;
  for (const Case& c : cases) {
    std::string outputs[2];
    for (int k = 0; k < 2; ++k) {
      const fs::path out = dir / (c.cmd + "_" + c.fmt + "_" + std::to_string(k));
      fs::remove(out);
      const std::string line = "\"" + binary + "\" " + c.cmd + " --config \"" + (dir / c.cfg).string() +
                               "\" --seed 7 --format " + c.fmt + " --out \"" + out.string() + "\"";
      if (std::system(line.c_str()) != 0) problems += " " + c.cmd + "/" + c.fmt + " exit!=0";
      outputs[k] = slurp(out);
    }
    if (!outputs[0].empty() && outputs[0] == outputs[1]) ++identical;
  }
  return {identical == static_cast<int>(cases.size()),
          std::to_string(identical) + "/" + std::to_string(cases.size()) + " outputs byte-identical" + problems};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <path to coopgeo binary>\n";
    return 2;
  }
  const std::string binary = argv[1];
  int failed = 0;
  const auto report = [&](int id, const std::string& name, const std::function<Verdict()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = check();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << v.detail << " ("
              << fmt("%.1f", secs) << " s)" << std::endl;
  };

  Curve qpsk, qam64;
  const auto t0 = std::chrono::steady_clock::now();
  qpsk = density_curve(4);
  qam64 = density_curve(64);
  std::cout << "density curves computed in "
            << fmt("%.1f", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) << " s"
            << std::endl;

  report(1, "PER: cooperative below direct, ratio >= 2, gap narrows with density", [&] { return per_trend(qpsk); });
  report(2, "cooperative transmission error non-increasing in density", [&] { return tx_error_trend(qpsk); });
  report(3, "64-QAM cooperative throughput >= direct at every density", [&] { return throughput_trend(qam64); });
  report(4, "planarization equals the Gabriel graph", bfp_gabriel);
  report(5, "delivery on connected topologies", delivery);
  report(6, "relay election picks the metric argmin", relay_argmin);
  report(7, "closed-form optimal relay point", closed_form);
  report(8, "forwarder timer partition", timer_partition);
  report(9, "symbol error rate against simulation", ser_monte_carlo);
  report(10, "combining never hurts", mrc_dominance);
  report(11, "same seed, same bytes", [&] { return determinism(binary); });

  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
