#pragma once
// Planar geometry used by the forwarding and relaying layers: distances,
// progress classification, Gabriel proximity tests, Reuleaux relay regions
// and the geographic relay metric.

#include <cmath>
#include <vector>

namespace coopgeo {

// Absolute tolerance for geometric comparisons, in meters.
inline constexpr double kGeomTol = 1e-9;

struct Point2D {
  double x{0.0};
  double y{0.0};

  constexpr Point2D() = default;
  constexpr Point2D(double x_, double y_) : x(x_), y(y_) {}

  constexpr Point2D operator+(Point2D o) const { return {x + o.x, y + o.y}; }
  constexpr Point2D operator-(Point2D o) const { return {x - o.x, y - o.y}; }
  constexpr Point2D operator*(double s) const { return {x * s, y * s}; }
  constexpr bool operator==(const Point2D&) const = default;

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

constexpr Point2D operator*(double s, Point2D p) { return p * s; }
constexpr double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2D a, Point2D b) { return a.x * b.y - a.y * b.x; }
constexpr Point2D midpoint(Point2D a, Point2D b) { return {(a.x + b.x) / 2, (a.y + b.y) / 2}; }

inline double distance(Point2D a, Point2D b) { return std::hypot(a.x - b.x, a.y - b.y); }
inline double distance_squared(Point2D a, Point2D b) {
  const Point2D d = a - b;
  return dot(d, d);
}

enum class Progress { PPA, NPA, OutOfRange };

const char* to_string(Progress p);

// OutOfRange when the candidate lies beyond `range` of the sender; otherwise
// PPA iff the candidate is strictly closer to the destination.
Progress classify_progress(Point2D src, Point2D dst, Point2D cand, double range);

// Common sub-area index of a candidate: 0 is the band of maximal progress,
// nsa-1 the band farthest from the destination. PPA candidates always land in
// the lower half of the index range and NPA candidates in the upper half.
int csa_index(Point2D src, Point2D dst, Point2D cand, double range, int nsa);

// True iff q lies strictly inside the circle with diameter ab.
bool in_gabriel_region(Point2D a, Point2D b, Point2D q);

// Which side(s) of the directed segment src->nexthop host the relay region.
enum class ReuleauxSide { Upper, Lower, Both };

struct ReuleauxRegion {
  Point2D v1;  // sender
  Point2D v2;  // next hop
  Point2D v3;  // apex of the equilateral triangle
  double side{0.0};
};

// Equilateral construction on src->nexthop; `upper` puts the apex on the
// counter-clockwise side. Throws std::invalid_argument on coincident points.
ReuleauxRegion reuleaux_region(Point2D src, Point2D nexthop, bool upper);

// One region for Upper/Lower, two for Both.
std::vector<ReuleauxRegion> relay_regions(Point2D src, Point2D nexthop, ReuleauxSide side);

// Membership in the intersection of the three vertex disks of radius `side`,
// with a 1e-9 relative tolerance on the radius.
bool reuleaux_contains(const ReuleauxRegion& region, Point2D q);
bool regions_contain(const std::vector<ReuleauxRegion>& regions, Point2D q);

// Weights of the relay metric f(x) = a_squared*|x-src|^p + b*|x-dst|^p.
struct RelayMetricParams {
  double a_squared{1.0};
  double b{1.0};
  double p{2.0};

  void validate() const;  // throws std::invalid_argument
};

double relay_metric(Point2D x, Point2D src, Point2D dst, const RelayMetricParams& params);

// Unconstrained minimizer of the relay metric. Only defined for p == 2.
Point2D optimal_relay_point(Point2D src, Point2D dst, const RelayMetricParams& params);

// Minimizer of the relay metric for any p >= 2. The minimizer of a positive
// combination of distance powers lies on segment src-dst, so this is a 1-D
// golden-section search there; for p == 2 it returns the closed form.
Point2D minimize_relay_metric(Point2D src, Point2D dst, const RelayMetricParams& params);

// Affine rescaling of a metric value onto [0,1]. Throws std::invalid_argument
// when f_max does not exceed f_star. Values marginally outside
// [f_star, f_max] are clamped.
double map_metric(double f_val, double f_star, double f_max);

// Maximum of the relay metric over a Reuleaux region. The metric is convex,
// so the maximum sits on one of the three boundary arcs; each arc is sampled
// at 1e-3 of its length and the best sample is refined by golden section.
double f_max_over_region(const ReuleauxRegion& region, Point2D src, Point2D dst,
                         const RelayMetricParams& params);

}  // namespace coopgeo
