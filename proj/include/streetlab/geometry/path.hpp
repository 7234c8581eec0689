#pragma once

#include <memory>
#include <span>
#include <vector>

namespace streetlab::geometry {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  bool operator==(const Vec2&) const = default;
};

double length(Vec2 v);
double distance(Vec2 a, Vec2 b);
/// Heading in radians, atan2(y, x).
double heading_of(Vec2 v);
Vec2 unit_from_heading(double heading);

/// Center of a grid cell; x grows with columns, y with rows.
Vec2 cell_center(int row, int col, double cell_size);

struct CubicSegment {
  Vec2 p0, c1, c2, p3;
  bool operator==(const CubicSegment&) const = default;
};

struct PointSample {
  Vec2 point;
  double heading = 0.0;
};

/// Bernstein evaluation. Throws std::out_of_range for t outside [0, 1].
/// Where the derivative vanishes the heading is the chord direction p3 - p0.
PointSample point_at(const CubicSegment& segment, double t);
Vec2 derivative_at(const CubicSegment& segment, double t);

constexpr double kDefaultTension = 1.0;
constexpr int kLutSamples = 256;

/// Chain of cubic segments through waypoints with an arc-length table per
/// segment. Immutable once built.
class PathGeometry {
 public:
  /// One segment per consecutive pair. Control points follow the
  /// Catmull-Rom rule scaled by tension, with reflected phantom points at
  /// both ends. Throws std::invalid_argument for fewer than two waypoints,
  /// consecutive duplicates, non-finite input or tension outside [0, 1].
  static PathGeometry build(std::span<const Vec2> waypoints, double tension = kDefaultTension);

  const std::vector<CubicSegment>& segments() const { return segments_; }
  /// Arc length at the end of each segment (strictly increasing).
  const std::vector<double>& cumulative_lengths() const { return cumulative_; }
  double total_length() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  double segment_length(std::size_t i) const { return luts_.at(i).back(); }

  /// Position and heading at arc length s (clamped to [0, total_length]).
  PointSample at_arc(double s) const;
  /// Segment index and local parameter for arc length s.
  std::pair<std::size_t, double> locate(double s) const;

 private:
  std::vector<CubicSegment> segments_;
  std::vector<double> cumulative_;
  std::vector<std::vector<double>> luts_;
};

struct PathCursor {
  std::shared_ptr<const PathGeometry> geometry;
  double arc = 0.0;
};

struct Advance {
  PathCursor cursor;
  Vec2 position;
  double heading = 0.0;
  bool at_end = false;
};

/// Moves the cursor forward by ds (negative ds is treated as 0).
Advance advance(const PathCursor& cursor, double ds);

}  // namespace streetlab::geometry
