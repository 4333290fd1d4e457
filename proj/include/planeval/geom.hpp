#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace planeval::geom {

/// Default occupancy-grid cell size in meters.
inline constexpr double kDefaultResolution = 0.1;

/// Waypoint displacements below this length (meters) are treated as
/// stationary when estimating headings.
inline constexpr double kMinSegmentLength = 1e-3;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

struct Vec2 {
  double x{0.0};
  double y{0.0};

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;

  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double squared_norm() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 rotate(Vec2 v, double cos_a, double sin_a) {
  return {cos_a * v.x - sin_a * v.y, sin_a * v.x + cos_a * v.y};
}

inline Vec2 rotate(Vec2 v, double angle) {
  return rotate(v, std::cos(angle), std::sin(angle));
}

/// SE(2) pose. Yaw is wrapped to (-pi, pi] on construction.
struct Pose2D {
  double x{0.0};
  double y{0.0};
  double yaw{0.0};

  Pose2D() = default;
  Pose2D(double x_, double y_, double yaw_);

  Vec2 position() const { return {x, y}; }
  bool operator==(const Pose2D&) const = default;
};

/// Rectangle posed in SE(2); length runs along the heading.
class OrientedBox {
 public:
  /// Throws std::invalid_argument unless length > 0 and width > 0.
  OrientedBox(Pose2D center, double length, double width);

  const Pose2D& center() const { return center_; }
  double length() const { return length_; }
  double width() const { return width_; }
  double half_length() const { return half_length_; }
  double half_width() const { return half_width_; }
  double cos_yaw() const { return cos_yaw_; }
  double sin_yaw() const { return sin_yaw_; }

  /// Inclusive point containment (boundary counts).
  bool contains(Vec2 p) const {
    const double dx = p.x - center_.x;
    const double dy = p.y - center_.y;
    const double u = dx * cos_yaw_ + dy * sin_yaw_;
    const double v = -dx * sin_yaw_ + dy * cos_yaw_;
    return std::abs(u) <= half_length_ && std::abs(v) <= half_width_;
  }

  /// Corners in CCW order starting front-left.
  std::array<Vec2, 4> corners() const;

  void axis_aligned_bounds(Vec2& lo, Vec2& hi) const;

 private:
  Pose2D center_;
  double length_;
  double width_;
  double half_length_;
  double half_width_;
  double cos_yaw_;
  double sin_yaw_;
};

/// Open polygonal chain in the global frame.
struct Polyline {
  std::vector<Vec2> points;

  /// Throws std::invalid_argument unless there are >= 2 points and
  /// consecutive points are distinct.
  explicit Polyline(std::vector<Vec2> pts);
};

/// Row-major bit grid. Cell (0,0) has its lower-left corner at `origin`.
class OccupancyGrid {
 public:
  OccupancyGrid(Vec2 origin, double resolution, int rows, int cols);

  /// Square window of the given half-extent centered on a point.
  static OccupancyGrid window(Vec2 center, double half_extent, double resolution);

  Vec2 origin() const { return origin_; }
  double resolution() const { return resolution_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < rows_ && col >= 0 && col < cols_;
  }
  void set(int row, int col) {
    const std::size_t i = static_cast<std::size_t>(row) * cols_ + col;
    blocks_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  bool test(int row, int col) const {
    const std::size_t i = static_cast<std::size_t>(row) * cols_ + col;
    return (blocks_[i >> 6] >> (i & 63)) & 1;
  }

  int col_of(double x) const {
    return static_cast<int>(std::floor((x - origin_.x) / resolution_));
  }
  int row_of(double y) const {
    return static_cast<int>(std::floor((y - origin_.y) / resolution_));
  }
  Vec2 cell_center(int row, int col) const {
    return {origin_.x + (col + 0.5) * resolution_, origin_.y + (row + 0.5) * resolution_};
  }

  void clear();
  /// Clears and moves the window; shape is unchanged.
  void reset(Vec2 origin);

  std::size_t set_count() const;
  bool any_set() const;

 private:
  Vec2 origin_;
  double resolution_;
  int rows_;
  int cols_;
  std::vector<std::uint64_t> blocks_;
};

/// Per-waypoint headings from consecutive displacements. The yaw at
/// waypoint i is the direction of the segment leaving it; the last
/// waypoint reuses the preceding segment; segments shorter than
/// kMinSegmentLength inherit the previous yaw (initial_yaw at the start).
/// Throws std::invalid_argument on an empty list.
std::vector<double> estimate_yaws(std::span<const Vec2> waypoints, double initial_yaw);

/// Box of the given dims centered at `point` with heading `yaw`.
OrientedBox make_footprint(Vec2 point, double yaw, double length, double width);

/// Sets every cell whose center lies inside the box (boundary inclusive).
/// Cells outside the grid extent are ignored.
void rasterize_box(OccupancyGrid& grid, const OrientedBox& box);

/// Conservative supercover traversal of one segment: every cell the
/// segment passes through is set, clipped at the grid extent.
void rasterize_segment(OccupancyGrid& grid, Vec2 a, Vec2 b);

void rasterize_polyline(OccupancyGrid& grid, const Polyline& line);

/// True iff some set cell has its center inside the box.
bool box_hits_grid(const OccupancyGrid& grid, const OrientedBox& box);

/// Separating-axis test over the four edge normals; touching counts.
bool exact_box_box_intersect(const OrientedBox& a, const OrientedBox& b);

/// Proper or touching intersection, collinear overlap included.
bool exact_segment_segment_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2);

/// True iff the segment intersects the box or lies inside it.
bool exact_box_segment_intersect(const OrientedBox& box, Vec2 a, Vec2 b);

/// True iff any polyline segment intersects or lies inside the box.
bool exact_box_polyline_intersect(const OrientedBox& box, const Polyline& line);

/// p_global = R(ego.yaw) * p + (ego.x, ego.y)
Vec2 to_global(const Pose2D& ego, Vec2 p);
std::vector<Vec2> to_global(const Pose2D& ego, std::span<const Vec2> pts);

/// Inverse of to_global.
Vec2 to_ego_frame(const Pose2D& ego, Vec2 p_global);

}  // namespace planeval::geom
