#include "planeval/geom.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support/oracles.hpp"

using namespace planeval;
using geom::OccupancyGrid;
using geom::OrientedBox;
using geom::Polyline;
using geom::Pose2D;
using geom::Vec2;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("wrap_angle maps to (-pi, pi]") {
  CHECK(geom::wrap_angle(0.0) == doctest::Approx(0.0));
  CHECK(geom::wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(geom::wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(geom::wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(geom::wrap_angle(2.5 * kPi) == doctest::Approx(0.5 * kPi));
  CHECK(geom::wrap_angle(-2.5 * kPi) == doctest::Approx(-0.5 * kPi));
  for (double a = -20.0; a <= 20.0; a += 0.37) {
    const double w = geom::wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::remainder(w - a, 2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-9));
  }
}

TEST_CASE("estimate_yaws: straight-line motion has zero heading change") {
  const std::vector<Vec2> pts = {{2.5, 0.0}, {5.0, 0.0}, {7.5, 0.0}};
  const auto yaws = geom::estimate_yaws(pts, 0.0);
  REQUIRE(yaws.size() == 3);
  for (const double y : yaws) {
    CHECK(y == doctest::Approx(0.0));
  }
}

TEST_CASE("estimate_yaws: stationary trajectory keeps the initial yaw") {
  const std::vector<Vec2> pts = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
  const auto yaws = geom::estimate_yaws(pts, 0.3);
  REQUIRE(yaws.size() == 3);
  for (const double y : yaws) {
    CHECK(y == doctest::Approx(0.3));
  }
}

TEST_CASE("estimate_yaws: arc waypoints match the chord-tangent closed form") {
  // Radius-10 arc sampled every 0.25 rad: the chord from theta_i to
  // theta_i+1 points along theta_i + dtheta/2.
  const double radius = 10.0;
  const double dtheta = 0.25;
  std::vector<Vec2> pts;
  for (int i = 0; i < 6; ++i) {
    const double theta = i * dtheta;
    pts.push_back({radius * std::sin(theta), radius * (1.0 - std::cos(theta))});
  }
  const auto yaws = geom::estimate_yaws(pts, 0.0);
  REQUIRE(yaws.size() == 6);
  for (int i = 0; i < 5; ++i) {
    CHECK(yaws[i] == doctest::Approx(i * dtheta + dtheta / 2.0).epsilon(1e-9));
  }
  CHECK(yaws[5] == doctest::Approx(4 * dtheta + dtheta / 2.0).epsilon(1e-9));
}

TEST_CASE("estimate_yaws: sub-millimeter segments inherit the previous yaw") {
  const std::vector<Vec2> pts = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0 + 5e-4}, {2.0, 2.0}};
  const auto yaws = geom::estimate_yaws(pts, 0.0);
  CHECK(yaws[0] == doctest::Approx(kPi / 4.0));
  CHECK(yaws[1] == doctest::Approx(kPi / 4.0));  // 0.5 mm step ignored
  CHECK(yaws[2] == doctest::Approx(std::atan2(1.0 - 5e-4, 1.0)));
}

TEST_CASE("estimate_yaws: errors and length/normalization properties") {
  CHECK_THROWS_AS(geom::estimate_yaws({}, 0.0), std::invalid_argument);
  testsupport::TestRng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec2> pts;
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 8.0));
    for (int i = 0; i < n; ++i) {
      pts.push_back({rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0)});
    }
    const auto yaws = geom::estimate_yaws(pts, rng.uniform(-10.0, 10.0));
    REQUIRE(yaws.size() == pts.size());
    for (const double y : yaws) {
      CHECK(y > -kPi);
      CHECK(y <= kPi);
    }
  }
}

TEST_CASE("make_footprint corners") {
  SUBCASE("axis-aligned rectangle") {
    const auto box = geom::make_footprint({0.0, 0.0}, 0.0, 4.0, 2.0);
    for (const Vec2 c : box.corners()) {
      CHECK(std::abs(c.x) == doctest::Approx(2.0));
      CHECK(std::abs(c.y) == doctest::Approx(1.0));
    }
  }
  SUBCASE("90 degree rotation swaps extents") {
    const auto box = geom::make_footprint({1.0, 1.0}, kPi / 2.0, 4.0, 2.0);
    for (const Vec2 c : box.corners()) {
      CHECK(std::abs(c.x - 1.0) == doctest::Approx(1.0));
      CHECK(std::abs(c.y - 1.0) == doctest::Approx(2.0));
    }
  }
  SUBCASE("general pose matches direct rotation") {
    const double yaw = 0.7;
    const auto box = geom::make_footprint({3.0, -2.0}, yaw, 4.08, 1.73);
    const auto corners = box.corners();
    const double c = std::cos(yaw);
    const double s = std::sin(yaw);
    bool found = false;
    for (const Vec2 corner : corners) {
      const double ex = 3.0 + c * 2.04 - s * 0.865;
      const double ey = -2.0 + s * 2.04 + c * 0.865;
      if (std::abs(corner.x - ex) < 1e-12 && std::abs(corner.y - ey) < 1e-12) {
        found = true;
      }
    }
    CHECK(found);
  }
  SUBCASE("non-positive dims rejected") {
    CHECK_THROWS_AS(geom::make_footprint({0.0, 0.0}, 0.0, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(geom::make_footprint({0.0, 0.0}, 0.0, 4.0, -1.0), std::invalid_argument);
  }
}

TEST_CASE("rasterize_box: cell-center containment") {
  SUBCASE("1x1 m box on a 0.1 m grid covers exactly 100 cells") {
    OccupancyGrid grid({-0.5, -0.5}, 0.1, 20, 20);
    geom::rasterize_box(grid, geom::make_footprint({0.5, 0.5}, 0.0, 1.0, 1.0));
    CHECK(grid.set_count() == 100);
  }
  SUBCASE("no overlap with the window leaves the grid unchanged") {
    OccupancyGrid grid({0.0, 0.0}, 0.1, 10, 10);
    geom::rasterize_box(grid, geom::make_footprint({50.0, 50.0}, 0.3, 2.0, 2.0));
    CHECK(grid.set_count() == 0);
  }
  SUBCASE("yaw + pi marks the identical cell set") {
    testsupport::TestRng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      OccupancyGrid a({-5.0, -5.0}, 0.1, 100, 100);
      OccupancyGrid b({-5.0, -5.0}, 0.1, 100, 100);
      const double yaw = rng.uniform(-3.0, 3.0);
      const Vec2 center{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
      const double length = rng.uniform(0.5, 4.0);
      const double width = rng.uniform(0.5, 2.0);
      geom::rasterize_box(a, geom::make_footprint(center, yaw, length, width));
      geom::rasterize_box(b, geom::make_footprint(center, yaw + kPi, length, width));
      REQUIRE(a.set_count() == b.set_count());
      bool equal = true;
      for (int r = 0; r < a.rows() && equal; ++r) {
        for (int c = 0; c < a.cols(); ++c) {
          if (a.test(r, c) != b.test(r, c)) {
            equal = false;
            break;
          }
        }
      }
      CHECK(equal);
    }
  }
}

TEST_CASE("rasterize_polyline: supercover examples") {
  SUBCASE("mid-row horizontal segment sets 10 or 11 cells in one row") {
    OccupancyGrid grid({0.0, -0.05}, 0.1, 3, 20);  // y = 0 runs mid-row 0
    geom::rasterize_segment(grid, {0.0, 0.0}, {1.0, 0.0});
    const std::size_t count = grid.set_count();
    CHECK(count >= 10);
    CHECK(count <= 11);
    for (int c = 0; c < grid.cols(); ++c) {
      CHECK_FALSE(grid.test(1, c));
      CHECK_FALSE(grid.test(2, c));
    }
  }
  SUBCASE("diagonal marks >= 10 cells, all touching the segment") {
    OccupancyGrid grid({0.0, 0.0}, 0.1, 20, 20);
    const Vec2 a{0.0, 0.0};
    const Vec2 b{1.0, 1.0};
    geom::rasterize_segment(grid, a, b);
    CHECK(grid.set_count() >= 10);
    for (int r = 0; r < grid.rows(); ++r) {
      for (int c = 0; c < grid.cols(); ++c) {
        if (grid.test(r, c)) {
          const Vec2 lo{c * 0.1, r * 0.1};
          const Vec2 hi{(c + 1) * 0.1, (r + 1) * 0.1};
          CHECK(testsupport::segment_cell_distance(a, b, lo, hi) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("rasterize_polyline: conservative against the exact cell oracle") {
  testsupport::TestRng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    OccupancyGrid grid({-4.0, -4.0}, 0.1, 80, 80);
    const Vec2 a{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    const Vec2 b{rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    if (a == b) {
      continue;
    }
    geom::rasterize_segment(grid, a, b);
    for (int r = 0; r < grid.rows(); ++r) {
      for (int c = 0; c < grid.cols(); ++c) {
        const Vec2 lo{-4.0 + c * 0.1, -4.0 + r * 0.1};
        const Vec2 hi{-4.0 + (c + 1) * 0.1, -4.0 + (r + 1) * 0.1};
        if (testsupport::segment_crosses_cell_interior(a, b, lo, hi)) {
          // Every interior crossing must be marked.
          REQUIRE(grid.test(r, c));
        } else if (grid.test(r, c)) {
          // Anything marked must at least touch the segment.
          REQUIRE(testsupport::segment_cell_distance(a, b, lo, hi) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("box_hits_grid") {
  OccupancyGrid grid({0.0, 0.0}, 0.1, 40, 40);
  const auto box = geom::make_footprint({2.0, 2.0}, 0.4, 1.0, 0.5);
  SUBCASE("empty grid misses") { CHECK_FALSE(geom::box_hits_grid(grid, box)); }
  SUBCASE("box covering a set cell hits") {
    grid.set(20, 20);  // center (2.05, 2.05)
    CHECK(geom::box_hits_grid(grid, box));
  }
  SUBCASE("far-away set cells miss") {
    grid.set(0, 0);
    grid.set(39, 39);
    CHECK_FALSE(geom::box_hits_grid(grid, box));
  }
}

TEST_CASE("exact_box_box_intersect: SAT examples") {
  const auto unit_at = [](double x, double y, double yaw) {
    return geom::make_footprint({x, y}, yaw, 1.0, 1.0);
  };
  CHECK(geom::exact_box_box_intersect(unit_at(0, 0, 0), unit_at(0, 0, 0)));
  CHECK_FALSE(geom::exact_box_box_intersect(unit_at(0, 0, 0), unit_at(10, 0, 0)));
  // Centers 1.2 apart: half extent 0.5 plus rotated half diagonal ~0.707
  // exceeds the gap, so SAT reports overlap.
  CHECK(geom::exact_box_box_intersect(unit_at(0, 0, 0), unit_at(1.2, 0, kPi / 4.0)));
  // Touching counts: unit boxes exactly 1.0 apart share an edge.
  CHECK(geom::exact_box_box_intersect(unit_at(0, 0, 0), unit_at(1.0, 0, 0)));
}

TEST_CASE("exact_box_polyline_intersect") {
  const auto box = geom::make_footprint({0.0, 0.0}, 0.3, 4.0, 2.0);
  SUBCASE("segment through the center hits") {
    const Polyline line({{-5.0, 0.0}, {5.0, 0.0}});
    CHECK(geom::exact_box_polyline_intersect(box, line));
  }
  SUBCASE("segment fully left of the box misses") {
    const Polyline line({{-10.0, -5.0}, {-10.0, 5.0}});
    CHECK_FALSE(geom::exact_box_polyline_intersect(box, line));
  }
  SUBCASE("segment inside the box hits") {
    const Polyline line({{-0.2, 0.0}, {0.2, 0.0}});
    CHECK(geom::exact_box_polyline_intersect(box, line));
  }
  SUBCASE("tangent along a rotated edge counts as touching") {
    const auto corners = box.corners();
    // Collinear extension of the edge from corner 0 to corner 1.
    const Vec2 d = corners[1] - corners[0];
    const Vec2 a = corners[0] - d * 0.5;
    const Vec2 b = corners[1] + d * 0.5;
    CHECK(geom::exact_box_polyline_intersect(box, Polyline({a, b})));
  }
}

TEST_CASE("to_global") {
  SUBCASE("identity pose is the identity map") {
    const std::vector<Vec2> pts = {{1.0, 2.0}, {-3.0, 0.5}};
    const auto out = geom::to_global(Pose2D(0, 0, 0), pts);
    REQUIRE(out.size() == 2);
    CHECK(out[0].x == doctest::Approx(1.0));
    CHECK(out[0].y == doctest::Approx(2.0));
    CHECK(out[1].x == doctest::Approx(-3.0));
    CHECK(out[1].y == doctest::Approx(0.5));
  }
  SUBCASE("quarter turn") {
    const Vec2 out = geom::to_global(Pose2D(1, 2, kPi / 2.0), Vec2{3.0, 0.0});
    CHECK(out.x == doctest::Approx(1.0));
    CHECK(out.y == doctest::Approx(5.0));
  }
  SUBCASE("general pose matches direct evaluation") {
    const Pose2D ego(-4.0, 7.0, 0.3);
    const Vec2 out = geom::to_global(ego, Vec2{2.0, -1.0});
    CHECK(out.x == doctest::Approx(std::cos(0.3) * 2.0 - std::sin(0.3) * -1.0 - 4.0));
    CHECK(out.y == doctest::Approx(std::sin(0.3) * 2.0 + std::cos(0.3) * -1.0 + 7.0));
  }
  SUBCASE("to_ego_frame inverts to_global") {
    testsupport::TestRng rng(3);
    for (int i = 0; i < 100; ++i) {
      const Pose2D ego(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-3, 3));
      const Vec2 p{rng.uniform(-20, 20), rng.uniform(-20, 20)};
      const Vec2 round = geom::to_ego_frame(ego, geom::to_global(ego, p));
      CHECK(round.x == doctest::Approx(p.x).epsilon(1e-12));
      CHECK(round.y == doctest::Approx(p.y).epsilon(1e-12));
    }
  }
}

TEST_CASE("raster collision agrees with the SAT oracle outside the band") {
  // Smaller sibling of the acceptance criterion for fast feedback.
  testsupport::TestRng rng(101);
  const double resolution = 0.1;
  const double band = 2.0 * resolution;
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = testsupport::random_box(rng, 4.0, 0.8, 5.0);
    const auto b = testsupport::random_box(rng, 4.0, 0.8, 5.0);
    OccupancyGrid grid = OccupancyGrid::window({0.0, 0.0}, 12.0, resolution);
    geom::rasterize_box(grid, a);
    const bool raster = geom::box_hits_grid(grid, b);
    const bool exact = geom::exact_box_box_intersect(a, b);
    if (raster != exact) {
      CHECK(testsupport::box_box_band_measure(a, b) < band);
    } else {
      ++checked;
    }
  }
  CHECK(checked > 900);  // disagreements are confined to near-tangency
}

TEST_CASE("polyline invariants") {
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Polyline({{0.0, 0.0}, {0.0, 0.0}}), std::invalid_argument);
  CHECK_NOTHROW(Polyline({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}));
}

TEST_CASE("occupancy grid window geometry") {
  const OccupancyGrid grid = OccupancyGrid::window({10.0, -5.0}, 55.0, 0.1);
  CHECK(grid.rows() == 1100);
  CHECK(grid.cols() == 1100);
  CHECK(grid.origin().x == doctest::Approx(-45.0));
  CHECK(grid.origin().y == doctest::Approx(-60.0));
  CHECK(grid.row_of(-5.0) == 550);
  CHECK(grid.col_of(10.0) == 550);
}
