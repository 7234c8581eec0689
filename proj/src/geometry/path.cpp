#include "streetlab/geometry/path.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace streetlab::geometry {

double length(Vec2 v) { return std::hypot(v.x, v.y); }

double distance(Vec2 a, Vec2 b) { return length(b - a); }

double heading_of(Vec2 v) { return std::atan2(v.y, v.x); }

Vec2 unit_from_heading(double heading) { return {std::cos(heading), std::sin(heading)}; }

Vec2 cell_center(int row, int col, double cell_size) {
  return {(col + 0.5) * cell_size, (row + 0.5) * cell_size};
}

namespace {

Vec2 bernstein(const CubicSegment& s, double t) {
  const double u = 1.0 - t;
  const double b0 = u * u * u;
  const double b1 = 3.0 * u * u * t;
  const double b2 = 3.0 * u * t * t;
  const double b3 = t * t * t;
  return {b0 * s.p0.x + b1 * s.c1.x + b2 * s.c2.x + b3 * s.p3.x,
          b0 * s.p0.y + b1 * s.c1.y + b2 * s.c2.y + b3 * s.p3.y};
}

bool finite(Vec2 v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

Vec2 derivative_at(const CubicSegment& s, double t) {
  const double u = 1.0 - t;
  return (s.c1 - s.p0) * (3.0 * u * u) + (s.c2 - s.c1) * (6.0 * u * t) + (s.p3 - s.c2) * (3.0 * t * t);
}

PointSample point_at(const CubicSegment& segment, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::out_of_range("bezier parameter outside [0, 1]");
  PointSample out;
  // exact endpoints regardless of rounding in the polynomial
  if (t == 0.0) {
    out.point = segment.p0;
  } else if (t == 1.0) {
    out.point = segment.p3;
  } else {
    out.point = bernstein(segment, t);
  }
  const Vec2 d = derivative_at(segment, t);
  out.heading = length(d) > 1e-12 ? heading_of(d) : heading_of(segment.p3 - segment.p0);
  return out;
}

PathGeometry PathGeometry::build(std::span<const Vec2> pts, double tension) {
  if (pts.size() < 2) throw std::invalid_argument("path needs at least two waypoints");
  if (!(tension >= 0.0 && tension <= 1.0)) throw std::invalid_argument("tension outside [0, 1]");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!finite(pts[i])) throw std::invalid_argument("non-finite waypoint");
    if (i > 0 && pts[i] == pts[i - 1])
      throw std::invalid_argument("consecutive duplicate waypoints at index " + std::to_string(i));
  }

  const std::size_t n = pts.size();
  auto at = [&](std::ptrdiff_t i) -> Vec2 {
    if (i < 0) return pts[0] * 2.0 - pts[1];
    if (i >= static_cast<std::ptrdiff_t>(n)) return pts[n - 1] * 2.0 - pts[n - 2];
    return pts[static_cast<std::size_t>(i)];
  };

  PathGeometry g;
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto i = static_cast<std::ptrdiff_t>(k);
    CubicSegment s;
    s.p0 = pts[k];
    s.p3 = pts[k + 1];
    s.c1 = s.p0 + (at(i + 1) - at(i - 1)) * (tension / 6.0);
    s.c2 = s.p3 - (at(i + 2) - at(i)) * (tension / 6.0);

    std::vector<double> lut(kLutSamples + 1, 0.0);
    Vec2 prev = s.p0;
    for (int j = 1; j <= kLutSamples; ++j) {
      const Vec2 p = j == kLutSamples ? s.p3 : bernstein(s, static_cast<double>(j) / kLutSamples);
      lut[j] = lut[j - 1] + distance(prev, p);
      prev = p;
    }
    total += lut.back();
    g.segments_.push_back(s);
    g.cumulative_.push_back(total);
    g.luts_.push_back(std::move(lut));
  }
  return g;
}

std::pair<std::size_t, double> PathGeometry::locate(double s) const {
  s = std::clamp(s, 0.0, total_length());
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), s);
  std::size_t seg = it == cumulative_.end() ? cumulative_.size() - 1
                                            : static_cast<std::size_t>(it - cumulative_.begin());
  const double start = seg == 0 ? 0.0 : cumulative_[seg - 1];
  const double local = s - start;
  const auto& lut = luts_[seg];
  if (local >= lut.back()) return {seg, 1.0};
  if (local <= 0.0) return {seg, 0.0};
  auto hi = std::upper_bound(lut.begin(), lut.end(), local);
  const auto j = static_cast<std::size_t>(hi - lut.begin());
  const double l0 = lut[j - 1];
  const double l1 = lut[j];
  const double frac = l1 > l0 ? (local - l0) / (l1 - l0) : 0.0;
  const double t = (static_cast<double>(j - 1) + frac) / kLutSamples;
  return {seg, std::clamp(t, 0.0, 1.0)};
}

PointSample PathGeometry::at_arc(double s) const {
  if (s >= total_length()) return point_at(segments_.back(), 1.0);
  if (s <= 0.0) return point_at(segments_.front(), 0.0);
  const auto [seg, t] = locate(s);
  return point_at(segments_[seg], t);
}

Advance advance(const PathCursor& cursor, double ds) {
  Advance out;
  out.cursor = cursor;
  const PathGeometry& g = *cursor.geometry;
  const double total = g.total_length();
  const double next = cursor.arc + std::max(ds, 0.0);
  out.at_end = next >= total;
  out.cursor.arc = std::min(next, total);
  const PointSample p = g.at_arc(out.cursor.arc);
  out.position = p.point;
  out.heading = p.heading;
  return out;
}

}  // namespace streetlab::geometry
