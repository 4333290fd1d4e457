#include "planeval/geom.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace planeval::geom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Corner-crossing tolerance for grid traversal, in segment parameter units.
constexpr double kTraversalEps = 1e-12;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

}  // namespace

double wrap_angle(double a) {
  double r = std::fmod(a + kPi, kTwoPi);
  if (r <= 0.0) {
    r += kTwoPi;
  }
  return r - kPi;
}

Pose2D::Pose2D(double x_, double y_, double yaw_) : x(x_), y(y_), yaw(wrap_angle(yaw_)) {
  require_finite(x_, "Pose2D.x");
  require_finite(y_, "Pose2D.y");
  require_finite(yaw_, "Pose2D.yaw");
}

OrientedBox::OrientedBox(Pose2D center, double length, double width)
    : center_(center),
      length_(length),
      width_(width),
      half_length_(length / 2.0),
      half_width_(width / 2.0),
      cos_yaw_(std::cos(center.yaw)),
      sin_yaw_(std::sin(center.yaw)) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("OrientedBox: length must be positive");
  }
  if (!(width > 0.0) || !std::isfinite(width)) {
    throw std::invalid_argument("OrientedBox: width must be positive");
  }
}

std::array<Vec2, 4> OrientedBox::corners() const {
  const Vec2 c{center_.x, center_.y};
  const Vec2 du{cos_yaw_ * half_length_, sin_yaw_ * half_length_};
  const Vec2 dv{-sin_yaw_ * half_width_, cos_yaw_ * half_width_};
  return {c + du + dv, c - du + dv, c - du - dv, c + du - dv};
}

void OrientedBox::axis_aligned_bounds(Vec2& lo, Vec2& hi) const {
  const double ex = std::abs(cos_yaw_) * half_length_ + std::abs(sin_yaw_) * half_width_;
  const double ey = std::abs(sin_yaw_) * half_length_ + std::abs(cos_yaw_) * half_width_;
  lo = {center_.x - ex, center_.y - ey};
  hi = {center_.x + ex, center_.y + ey};
}

Polyline::Polyline(std::vector<Vec2> pts) : points(std::move(pts)) {
  if (points.size() < 2) {
    throw std::invalid_argument("Polyline: needs at least 2 points");
  }
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i] == points[i + 1]) {
      throw std::invalid_argument("Polyline: consecutive points must be distinct");
    }
  }
}

OccupancyGrid::OccupancyGrid(Vec2 origin, double resolution, int rows, int cols)
    : origin_(origin), resolution_(resolution), rows_(rows), cols_(cols) {
  if (!(resolution > 0.0)) {
    throw std::invalid_argument("OccupancyGrid: resolution must be positive");
  }
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("OccupancyGrid: rows and cols must be positive");
  }
  const std::size_t bits = static_cast<std::size_t>(rows) * cols;
  blocks_.assign((bits + 63) / 64, 0);
}

OccupancyGrid OccupancyGrid::window(Vec2 center, double half_extent, double resolution) {
  if (!(half_extent > 0.0)) {
    throw std::invalid_argument("OccupancyGrid: half_extent must be positive");
  }
  const int cells = static_cast<int>(std::llround(2.0 * half_extent / resolution));
  const Vec2 origin{center.x - half_extent, center.y - half_extent};
  return OccupancyGrid(origin, resolution, cells, cells);
}

void OccupancyGrid::clear() {
  std::fill(blocks_.begin(), blocks_.end(), 0);
}

void OccupancyGrid::reset(Vec2 origin) {
  origin_ = origin;
  clear();
}

std::size_t OccupancyGrid::set_count() const {
  std::size_t n = 0;
  for (const std::uint64_t b : blocks_) {
    n += static_cast<std::size_t>(std::popcount(b));
  }
  return n;
}

bool OccupancyGrid::any_set() const {
  return std::any_of(blocks_.begin(), blocks_.end(), [](std::uint64_t b) { return b != 0; });
}

std::vector<double> estimate_yaws(std::span<const Vec2> waypoints, double initial_yaw) {
  if (waypoints.empty()) {
    throw std::invalid_argument("estimate_yaws: empty waypoint list");
  }
  std::vector<double> yaws(waypoints.size());
  double prev = wrap_angle(initial_yaw);
  for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
    const Vec2 d = waypoints[i + 1] - waypoints[i];
    if (d.norm() >= kMinSegmentLength) {
      prev = wrap_angle(std::atan2(d.y, d.x));
    }
    yaws[i] = prev;
  }
  yaws.back() = prev;
  return yaws;
}

OrientedBox make_footprint(Vec2 point, double yaw, double length, double width) {
  return OrientedBox(Pose2D(point.x, point.y, yaw), length, width);
}

void rasterize_box(OccupancyGrid& grid, const OrientedBox& box) {
  Vec2 lo;
  Vec2 hi;
  box.axis_aligned_bounds(lo, hi);
  const int r0 = std::max(grid.row_of(lo.y), 0);
  const int r1 = std::min(grid.row_of(hi.y), grid.rows() - 1);
  const int c0 = std::max(grid.col_of(lo.x), 0);
  const int c1 = std::min(grid.col_of(hi.x), grid.cols() - 1);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (box.contains(grid.cell_center(r, c))) {
        grid.set(r, c);
      }
    }
  }
}

namespace {

void mark_clipped(OccupancyGrid& grid, int row, int col) {
  if (grid.in_bounds(row, col)) {
    grid.set(row, col);
  }
}

}  // namespace

void rasterize_segment(OccupancyGrid& grid, Vec2 a, Vec2 b) {
  // Work in cell units so step sizes are scale free.
  const double u0 = (a.x - grid.origin().x) / grid.resolution();
  const double v0 = (a.y - grid.origin().y) / grid.resolution();
  const double u1 = (b.x - grid.origin().x) / grid.resolution();
  const double v1 = (b.y - grid.origin().y) / grid.resolution();

  // Quick reject when the segment cannot touch the window.
  const double margin = 1.0;
  if ((u0 < -margin && u1 < -margin) || (u0 > grid.cols() + margin && u1 > grid.cols() + margin) ||
      (v0 < -margin && v1 < -margin) || (v0 > grid.rows() + margin && v1 > grid.rows() + margin)) {
    return;
  }

  const double du = u1 - u0;
  const double dv = v1 - v0;
  int col = static_cast<int>(std::floor(u0));
  int row = static_cast<int>(std::floor(v0));
  const int col_end = static_cast<int>(std::floor(u1));
  const int row_end = static_cast<int>(std::floor(v1));
  mark_clipped(grid, row, col);

  const int step_col = du > 0.0 ? 1 : -1;
  const int step_row = dv > 0.0 ? 1 : -1;
  double t_max_u = std::numeric_limits<double>::infinity();
  double t_max_v = std::numeric_limits<double>::infinity();
  double t_delta_u = std::numeric_limits<double>::infinity();
  double t_delta_v = std::numeric_limits<double>::infinity();
  if (du != 0.0) {
    const double next_u = du > 0.0 ? col + 1.0 : col;
    t_max_u = (next_u - u0) / du;
    t_delta_u = 1.0 / std::abs(du);
  }
  if (dv != 0.0) {
    const double next_v = dv > 0.0 ? row + 1.0 : row;
    t_max_v = (next_v - v0) / dv;
    t_delta_v = 1.0 / std::abs(dv);
  }

  // Guard against degenerate floating loops: the cell walk can take at most
  // the Manhattan distance between end cells plus slack.
  long remaining = std::labs(col_end - col) + std::labs(row_end - row) + 4;
  while ((col != col_end || row != row_end) && remaining-- > 0) {
    if (std::min(t_max_u, t_max_v) > 1.0 + kTraversalEps) {
      break;
    }
    if (std::abs(t_max_u - t_max_v) < kTraversalEps) {
      // Exact corner crossing: include both side cells so no touched cell
      // is skipped, then step diagonally.
      mark_clipped(grid, row, col + step_col);
      mark_clipped(grid, row + step_row, col);
      col += step_col;
      row += step_row;
      t_max_u += t_delta_u;
      t_max_v += t_delta_v;
    } else if (t_max_u < t_max_v) {
      col += step_col;
      t_max_u += t_delta_u;
    } else {
      row += step_row;
      t_max_v += t_delta_v;
    }
    mark_clipped(grid, row, col);
  }
  mark_clipped(grid, row_end, col_end);
}

void rasterize_polyline(OccupancyGrid& grid, const Polyline& line) {
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    rasterize_segment(grid, line.points[i], line.points[i + 1]);
  }
}

bool box_hits_grid(const OccupancyGrid& grid, const OrientedBox& box) {
  Vec2 lo;
  Vec2 hi;
  box.axis_aligned_bounds(lo, hi);
  const int r0 = std::max(grid.row_of(lo.y), 0);
  const int r1 = std::min(grid.row_of(hi.y), grid.rows() - 1);
  const int c0 = std::max(grid.col_of(lo.x), 0);
  const int c1 = std::min(grid.col_of(hi.x), grid.cols() - 1);
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      if (grid.test(r, c) && box.contains(grid.cell_center(r, c))) {
        return true;
      }
    }
  }
  return false;
}

namespace {

// Half projection radius of `b` onto a unit axis given by (cos, sin).
double projected_radius(const OrientedBox& b, double axis_x, double axis_y) {
  const double along = std::abs(axis_x * b.cos_yaw() + axis_y * b.sin_yaw()) * b.half_length();
  const double across = std::abs(-axis_x * b.sin_yaw() + axis_y * b.cos_yaw()) * b.half_width();
  return along + across;
}

bool separated_on_axes_of(const OrientedBox& ref, const OrientedBox& other) {
  const double sx = other.center().x - ref.center().x;
  const double sy = other.center().y - ref.center().y;
  const double gap_u = std::abs(sx * ref.cos_yaw() + sy * ref.sin_yaw()) -
                       (ref.half_length() + projected_radius(other, ref.cos_yaw(), ref.sin_yaw()));
  if (gap_u > 0.0) {
    return true;
  }
  const double gap_v = std::abs(-sx * ref.sin_yaw() + sy * ref.cos_yaw()) -
                       (ref.half_width() + projected_radius(other, -ref.sin_yaw(), ref.cos_yaw()));
  return gap_v > 0.0;
}

bool on_segment_collinear(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool exact_box_box_intersect(const OrientedBox& a, const OrientedBox& b) {
  return !separated_on_axes_of(a, b) && !separated_on_axes_of(b, a);
}

bool exact_segment_segment_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const auto orient = [](Vec2 a, Vec2 b, Vec2 c) { return (b - a).cross(c - a); };
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
      ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))) {
    return true;
  }
  if (d1 == 0.0 && on_segment_collinear(q1, q2, p1)) return true;
  if (d2 == 0.0 && on_segment_collinear(q1, q2, p2)) return true;
  if (d3 == 0.0 && on_segment_collinear(p1, p2, q1)) return true;
  if (d4 == 0.0 && on_segment_collinear(p1, p2, q2)) return true;
  return false;
}

bool exact_box_segment_intersect(const OrientedBox& box, Vec2 a, Vec2 b) {
  if (box.contains(a) || box.contains(b)) {
    return true;
  }
  const auto c = box.corners();
  for (int i = 0; i < 4; ++i) {
    if (exact_segment_segment_intersect(a, b, c[i], c[(i + 1) % 4])) {
      return true;
    }
  }
  return false;
}

bool exact_box_polyline_intersect(const OrientedBox& box, const Polyline& line) {
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    if (exact_box_segment_intersect(box, line.points[i], line.points[i + 1])) {
      return true;
    }
  }
  return false;
}

Vec2 to_global(const Pose2D& ego, Vec2 p) {
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  return {c * p.x - s * p.y + ego.x, s * p.x + c * p.y + ego.y};
}

std::vector<Vec2> to_global(const Pose2D& ego, std::span<const Vec2> pts) {
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  std::vector<Vec2> out;
  out.reserve(pts.size());
  for (const Vec2 p : pts) {
    out.push_back({c * p.x - s * p.y + ego.x, s * p.x + c * p.y + ego.y});
  }
  return out;
}

Vec2 to_ego_frame(const Pose2D& ego, Vec2 p_global) {
  const double c = std::cos(ego.yaw);
  const double s = std::sin(ego.yaw);
  const double dx = p_global.x - ego.x;
  const double dy = p_global.y - ego.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

}  // namespace planeval::geom
