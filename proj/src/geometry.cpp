#include "coopgeo/geometry.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace coopgeo {

namespace {

constexpr double kGoldenRatio = 0.6180339887498949;

// Golden-section search for the extremum of a unimodal function on [lo, hi].
// `maximize` flips the comparison.
template <typename F>
double golden_section(F&& fn, double lo, double hi, double rel_tol, bool maximize) {
  const auto better = [maximize](double a, double b) { return maximize ? a > b : a < b; };
  double x1 = hi - kGoldenRatio * (hi - lo);
  double x2 = lo + kGoldenRatio * (hi - lo);
  double f1 = fn(x1);
  double f2 = fn(x2);
  const double width = hi - lo;
  for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(width, 1e-300); ++it) {
    if (better(f1, f2)) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kGoldenRatio * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kGoldenRatio * (hi - lo);
      f2 = fn(x2);
    }
  }
  return (lo + hi) / 2;
}

}  // namespace

const char* to_string(Progress p) {
  switch (p) {
    case Progress::PPA: return "PPA";
    case Progress::NPA: return "NPA";
    case Progress::OutOfRange: return "OutOfRange";
  }
  return "?";
}

Progress classify_progress(Point2D src, Point2D dst, Point2D cand, double range) {
  if (!(range > 0)) throw std::invalid_argument("classify_progress: range must be positive");
  if (distance(src, cand) > range + kGeomTol) return Progress::OutOfRange;
  return distance(cand, dst) < distance(src, dst) ? Progress::PPA : Progress::NPA;
}

int csa_index(Point2D src, Point2D dst, Point2D cand, double range, int nsa) {
  if (nsa <= 0) throw std::invalid_argument("csa_index: nsa must be positive");
  if (!(range > 0)) throw std::invalid_argument("csa_index: range must be positive");
  const double progress = distance(src, dst) - distance(cand, dst);
  int csa = static_cast<int>(std::floor(nsa * (range - progress) / (2 * range)));
  csa = std::clamp(csa, 0, nsa - 1);
  // Rounding can push a vanishingly small positive progress onto the NPA
  // boundary; keep the half-window split exact.
  if (progress > 0) csa = std::min(csa, (nsa + 1) / 2 - 1);
  return csa;
}

bool in_gabriel_region(Point2D a, Point2D b, Point2D q) {
  // q sees ab under an obtuse angle iff it is inside the diameter circle.
  return dot(q - a, q - b) < 0.0;
}

ReuleauxRegion reuleaux_region(Point2D src, Point2D nexthop, bool upper) {
  const double side = distance(src, nexthop);
  if (!(side > kGeomTol)) throw std::invalid_argument("reuleaux_region: coincident vertices");
  const Point2D dir = nexthop - src;
  const Point2D normal = upper ? Point2D{-dir.y, dir.x} : Point2D{dir.y, -dir.x};
  const Point2D apex = midpoint(src, nexthop) + normal * (std::numbers::sqrt3 / 2);
  return {src, nexthop, apex, side};
}

std::vector<ReuleauxRegion> relay_regions(Point2D src, Point2D nexthop, ReuleauxSide side) {
  switch (side) {
    case ReuleauxSide::Upper: return {reuleaux_region(src, nexthop, true)};
    case ReuleauxSide::Lower: return {reuleaux_region(src, nexthop, false)};
    case ReuleauxSide::Both:
      return {reuleaux_region(src, nexthop, true), reuleaux_region(src, nexthop, false)};
  }
  return {};
}

bool reuleaux_contains(const ReuleauxRegion& region, Point2D q) {
  const double r = region.side * (1 + 1e-9);
  return distance(q, region.v1) <= r && distance(q, region.v2) <= r && distance(q, region.v3) <= r;
}

bool regions_contain(const std::vector<ReuleauxRegion>& regions, Point2D q) {
  return std::any_of(regions.begin(), regions.end(),
                     [q](const ReuleauxRegion& r) { return reuleaux_contains(r, q); });
}

void RelayMetricParams::validate() const {
  if (!(a_squared > 0)) throw std::invalid_argument("relay metric: a_squared must be > 0");
  if (!(b > 0)) throw std::invalid_argument("relay metric: b must be > 0");
  if (!(p >= 2)) throw std::invalid_argument("relay metric: p must be >= 2");
}

double relay_metric(Point2D x, Point2D src, Point2D dst, const RelayMetricParams& params) {
  if (params.p == 2.0) {
    return params.a_squared * distance_squared(x, src) + params.b * distance_squared(x, dst);
  }
  return params.a_squared * std::pow(distance(x, src), params.p) +
         params.b * std::pow(distance(x, dst), params.p);
}

Point2D optimal_relay_point(Point2D src, Point2D dst, const RelayMetricParams& params) {
  params.validate();
  if (params.p != 2.0) {
    throw std::invalid_argument("optimal_relay_point: closed form requires p = 2, got p = " +
                                std::to_string(params.p));
  }
  const double w = params.a_squared + params.b;
  return (params.a_squared * src + params.b * dst) * (1.0 / w);
}

Point2D minimize_relay_metric(Point2D src, Point2D dst, const RelayMetricParams& params) {
  if (params.p == 2.0) return optimal_relay_point(src, dst, params);
  params.validate();
  const auto along = [&](double t) { return src + (dst - src) * t; };
  const double t = golden_section(
      [&](double s) { return relay_metric(along(s), src, dst, params); }, 0.0, 1.0, 1e-12, false);
  return along(t);
}

double map_metric(double f_val, double f_star, double f_max) {
  const double span = f_max - f_star;
  if (!(span > 1e-12 * std::max(1.0, std::abs(f_max)))) {
    throw std::invalid_argument("map_metric: degenerate region (f_max <= f_star)");
  }
  return std::clamp((f_val - f_star) / span, 0.0, 1.0);
}

double f_max_over_region(const ReuleauxRegion& region, Point2D src, Point2D dst,
                         const RelayMetricParams& params) {
  const auto f = [&](Point2D x) { return relay_metric(x, src, dst, params); };
  double best = std::max({f(region.v1), f(region.v2), f(region.v3)});

  // Each arc is centred on one vertex and joins the other two.
  const Point2D verts[3] = {region.v1, region.v2, region.v3};
  constexpr int kSamples = 1000;
  for (int i = 0; i < 3; ++i) {
    const Point2D c = verts[i];
    const Point2D a = verts[(i + 1) % 3];
    const Point2D b = verts[(i + 2) % 3];
    double theta0 = std::atan2(a.y - c.y, a.x - c.x);
    double theta1 = std::atan2(b.y - c.y, b.x - c.x);
    double sweep = theta1 - theta0;
    while (sweep > std::numbers::pi) sweep -= 2 * std::numbers::pi;
    while (sweep < -std::numbers::pi) sweep += 2 * std::numbers::pi;
    const auto on_arc = [&](double t) {
      const double th = theta0 + sweep * t;
      return Point2D{c.x + region.side * std::cos(th), c.y + region.side * std::sin(th)};
    };
    int arg = 0;
    double arc_best = -1.0;
    for (int k = 0; k <= kSamples; ++k) {
      const double v = f(on_arc(static_cast<double>(k) / kSamples));
      if (v > arc_best) {
        arc_best = v;
        arg = k;
      }
    }
    const double lo = std::max(0, arg - 1) / static_cast<double>(kSamples);
    const double hi = std::min(kSamples, arg + 1) / static_cast<double>(kSamples);
    const double t = golden_section([&](double s) { return f(on_arc(s)); }, lo, hi, 1e-9, true);
    best = std::max({best, arc_best, f(on_arc(t))});
  }
  return best;
}

}  // namespace coopgeo
