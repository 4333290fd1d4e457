// Exact-geometry measures used by the grid-tolerance band checks and the
// rasterization properties. Test-only: independent of the raster path they
// validate.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "planeval/geom.hpp"

namespace planeval::testsupport {

using geom::OrientedBox;
using geom::Vec2;

// Platform-stable uniform draws for reproducible test corpora.
class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool coin() { return (engine_() & 1) != 0; }

 private:
  std::mt19937_64 engine_;
};

inline double segment_point_distance(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 d = b - a;
  const double len2 = d.squared_norm();
  if (len2 == 0.0) {
    return (p - a).norm();
  }
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return (p - (a + d * t)).norm();
}

inline double segment_segment_distance(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  if (geom::exact_segment_segment_intersect(p1, p2, q1, q2)) {
    return 0.0;
  }
  return std::min(std::min(segment_point_distance(q1, q2, p1), segment_point_distance(q1, q2, p2)),
                  std::min(segment_point_distance(p1, p2, q1), segment_point_distance(p1, p2, q2)));
}

// Euclidean separation between two boxes; 0 when they intersect.
inline double box_box_gap(const OrientedBox& a, const OrientedBox& b) {
  if (geom::exact_box_box_intersect(a, b)) {
    return 0.0;
  }
  const auto ca = a.corners();
  const auto cb = b.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      best = std::min(best, segment_segment_distance(ca[i], ca[(i + 1) % 4], cb[j],
                                                     cb[(j + 1) % 4]));
    }
  }
  return best;
}

// Minimum translation distance separating two intersecting boxes. For convex
// polygons the translation normal is an edge normal, so the four box axes
// are exhaustive.
inline double box_box_penetration(const OrientedBox& a, const OrientedBox& b) {
  if (!geom::exact_box_box_intersect(a, b)) {
    return 0.0;
  }
  const double sx = b.center().x - a.center().x;
  const double sy = b.center().y - a.center().y;
  const auto radius = [](const OrientedBox& box, double ux, double uy) {
    return std::abs(ux * box.cos_yaw() + uy * box.sin_yaw()) * box.half_length() +
           std::abs(-ux * box.sin_yaw() + uy * box.cos_yaw()) * box.half_width();
  };
  const std::array<std::array<double, 2>, 4> axes = {{{a.cos_yaw(), a.sin_yaw()},
                                                      {-a.sin_yaw(), a.cos_yaw()},
                                                      {b.cos_yaw(), b.sin_yaw()},
                                                      {-b.sin_yaw(), b.cos_yaw()}}};
  double depth = std::numeric_limits<double>::infinity();
  for (const auto& [ux, uy] : axes) {
    const double overlap = radius(a, ux, uy) + radius(b, ux, uy) - std::abs(sx * ux + sy * uy);
    depth = std::min(depth, overlap);
  }
  return std::max(depth, 0.0);
}

// Distance from a segment to a box; 0 when they intersect.
inline double box_segment_distance(const OrientedBox& box, Vec2 a, Vec2 b) {
  if (geom::exact_box_segment_intersect(box, a, b)) {
    return 0.0;
  }
  const auto c = box.corners();
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    best = std::min(best, segment_segment_distance(a, b, c[i], c[(i + 1) % 4]));
  }
  return best;
}

// Deepest interior excursion of a segment through a box: the maximum over
// the segment of the margin to the nearest box side. The margin along the
// segment is a concave piecewise-linear function, so the maximum sits at an
// endpoint or at a crossing of two of the four side margins.
inline double box_segment_penetration(const OrientedBox& box, Vec2 a, Vec2 b) {
  const auto to_frame = [&](Vec2 p) {
    const double dx = p.x - box.center().x;
    const double dy = p.y - box.center().y;
    return Vec2{dx * box.cos_yaw() + dy * box.sin_yaw(),
                -dx * box.sin_yaw() + dy * box.cos_yaw()};
  };
  const Vec2 fa = to_frame(a);
  const Vec2 fb = to_frame(b);
  // Side margins as linear functions m_i(t) = c_i + s_i * t.
  const std::array<std::array<double, 2>, 4> margins = {{
      {box.half_length() - fa.x, -(fb.x - fa.x)},
      {box.half_length() + fa.x, fb.x - fa.x},
      {box.half_width() - fa.y, -(fb.y - fa.y)},
      {box.half_width() + fa.y, fb.y - fa.y},
  }};
  std::vector<double> candidates = {0.0, 1.0};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const double dc = margins[i][0] - margins[j][0];
      const double ds = margins[j][1] - margins[i][1];
      if (ds != 0.0) {
        const double t = dc / ds;
        if (t > 0.0 && t < 1.0) {
          candidates.push_back(t);
        }
      }
    }
  }
  double best = 0.0;
  for (const double t : candidates) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& [c, s] : margins) {
      m = std::min(m, c + s * t);
    }
    best = std::max(best, m);
  }
  return best;
}

// Band measure for the raster-vs-exact comparisons: penetration depth when
// intersecting, Euclidean gap otherwise.
inline double box_box_band_measure(const OrientedBox& a, const OrientedBox& b) {
  const double depth = box_box_penetration(a, b);
  return depth > 0.0 ? depth : box_box_gap(a, b);
}

inline double box_segment_band_measure(const OrientedBox& box, Vec2 a, Vec2 b) {
  if (geom::exact_box_segment_intersect(box, a, b)) {
    return box_segment_penetration(box, a, b);
  }
  return box_segment_distance(box, a, b);
}

inline double box_polyline_band_measure(const OrientedBox& box, const geom::Polyline& line) {
  bool any_hit = false;
  double max_depth = 0.0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
    const Vec2 a = line.points[i];
    const Vec2 b = line.points[i + 1];
    if (geom::exact_box_segment_intersect(box, a, b)) {
      any_hit = true;
      max_depth = std::max(max_depth, box_segment_penetration(box, a, b));
    } else {
      min_gap = std::min(min_gap, box_segment_distance(box, a, b));
    }
  }
  return any_hit ? max_depth : min_gap;
}

// Liang-Barsky clip of [a, b] to the rect [lo, hi]; false when disjoint.
inline bool clip_segment_to_rect(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const std::array<std::array<double, 2>, 4> pq = {{
      {-dx, a.x - lo.x},
      {dx, hi.x - a.x},
      {-dy, a.y - lo.y},
      {dy, hi.y - a.y},
  }};
  for (const auto& [p, q] : pq) {
    if (p == 0.0) {
      if (q < 0.0) {
        return false;
      }
      continue;
    }
    const double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      t0 = std::max(t0, r);
    } else {
      if (r < t0) return false;
      t1 = std::min(t1, r);
    }
  }
  return t0 <= t1;
}

// Whether the segment crosses the open interior of the cell (pure corner or
// edge touches do not count).
inline bool segment_crosses_cell_interior(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi) {
  double t0 = 0.0;
  double t1 = 0.0;
  if (!clip_segment_to_rect(a, b, lo, hi, t0, t1)) {
    return false;
  }
  if (t1 - t0 < 1e-12) {
    return false;
  }
  const Vec2 mid = a + (b - a) * ((t0 + t1) / 2.0);
  return lo.x < mid.x && mid.x < hi.x && lo.y < mid.y && mid.y < hi.y;
}

// Distance from a segment to the closed cell rect; 0 when they touch.
inline double segment_cell_distance(Vec2 a, Vec2 b, Vec2 lo, Vec2 hi) {
  double t0 = 0.0;
  double t1 = 0.0;
  if (clip_segment_to_rect(a, b, lo, hi, t0, t1)) {
    return 0.0;
  }
  const std::array<Vec2, 4> corners = {Vec2{lo.x, lo.y}, Vec2{hi.x, lo.y}, Vec2{hi.x, hi.y},
                                       Vec2{lo.x, hi.y}};
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    best = std::min(best,
                    segment_segment_distance(a, b, corners[i], corners[(i + 1) % 4]));
  }
  return best;
}

inline OrientedBox random_box(TestRng& rng, double center_range, double dim_min,
                              double dim_max) {
  return OrientedBox(geom::Pose2D(rng.uniform(-center_range, center_range),
                                  rng.uniform(-center_range, center_range),
                                  rng.uniform(-3.2, 3.2)),
                     rng.uniform(dim_min, dim_max), rng.uniform(dim_min, dim_max));
}

}  // namespace planeval::testsupport
