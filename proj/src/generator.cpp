#include "planeval/generator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace planeval::scene {

namespace {

constexpr double kPi = std::numbers::pi;

// Deterministic uniform draws on top of mt19937_64; the std distributions
// are implementation-defined, which would break byte-identical corpora.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  bool bernoulli(double p) { return uniform() < p; }

  int poisson(double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

 private:
  std::mt19937_64 engine_;
};

// Lane-centerline path: straight line or circular arc, with exact constant
// lateral offsets (offset arcs stay circular).
struct LanePath {
  bool is_arc{false};
  geom::Vec2 start{};
  double heading{0.0};
  geom::Vec2 center{};
  double radius{0.0};
  double phi0{0.0};
  int dir{1};  // +1 turns left, -1 turns right

  static LanePath straight(geom::Vec2 start, double heading) {
    LanePath p;
    p.is_arc = false;
    p.start = start;
    p.heading = heading;
    return p;
  }

  static LanePath arc(geom::Vec2 start, double heading, double radius, int dir) {
    LanePath p;
    p.is_arc = true;
    p.start = start;
    p.heading = heading;
    p.radius = radius;
    p.dir = dir;
    const geom::Vec2 left_normal{-std::sin(heading), std::cos(heading)};
    p.center = start + left_normal * (dir * radius);
    p.phi0 = std::atan2(start.y - p.center.y, start.x - p.center.x);
    return p;
  }

  geom::Pose2D pose_at(double s, double lateral) const {
    if (!is_arc) {
      const geom::Vec2 tangent{std::cos(heading), std::sin(heading)};
      const geom::Vec2 left{-tangent.y, tangent.x};
      const geom::Vec2 p = start + tangent * s + left * lateral;
      return geom::Pose2D(p.x, p.y, heading);
    }
    const double phi = phi0 + dir * s / radius;
    const double r = radius - dir * lateral;
    return geom::Pose2D(center.x + r * std::cos(phi), center.y + r * std::sin(phi),
                        phi + dir * kPi / 2.0);
  }

  double yaw_rate(double speed) const { return is_arc ? dir * speed / radius : 0.0; }

  geom::Polyline offset_polyline(double lateral, double s0, double s1) const {
    std::vector<geom::Vec2> pts;
    if (!is_arc) {
      pts.push_back(pose_at(s0, lateral).position());
      pts.push_back(pose_at(s1, lateral).position());
    } else {
      // ~1 m chords keep the sagitta well under the grid resolution.
      const int n = std::max(2, static_cast<int>(std::ceil(s1 - s0)));
      pts.reserve(n + 1);
      for (int i = 0; i <= n; ++i) {
        pts.push_back(pose_at(s0 + (s1 - s0) * i / n, lateral).position());
      }
    }
    return geom::Polyline(std::move(pts));
  }
};

struct Agent {
  double s0{0.0};
  double lateral{0.0};
  double speed{0.0};  // signed along the lane; negative is oncoming
  double length{0.0};
  double width{0.0};
  std::string id;
};

geom::OrientedBox agent_box_at(const LanePath& path, const Agent& a, double t) {
  const geom::Pose2D p = path.pose_at(a.s0 + a.speed * t, a.lateral);
  const double yaw = a.speed < 0.0 ? geom::wrap_angle(p.yaw + kPi) : p.yaw;
  return geom::OrientedBox(geom::Pose2D(p.x, p.y, yaw), a.length, a.width);
}

void check_field(bool ok, const char* field) {
  if (!ok) {
    throw std::invalid_argument(std::string("GeneratorConfig: invalid ") + field);
  }
}

}  // namespace

void GeneratorConfig::validate() const {
  check_field(num_scenes >= 0, "num_scenes");
  check_field(straight_fraction >= 0.0 && straight_fraction <= 1.0, "straight_fraction");
  check_field(turn_fraction >= 0.0 && turn_fraction <= 1.0, "turn_fraction");
  check_field(std::abs(straight_fraction + turn_fraction - 1.0) <= 1e-9,
              "straight_fraction + turn_fraction (must sum to 1)");
  check_field(duration_s > 0.0, "duration_s");
  check_field(speed_min >= 0.0, "speed_min");
  check_field(speed_max >= speed_min, "speed_max");
  check_field(radius_min > 0.0, "radius_min");
  check_field(radius_max >= radius_min, "radius_max");
  check_field(road_half_width > 0.0, "road_half_width");
  check_field(mean_agents >= 0.0, "mean_agents");
}

std::vector<Scene> gen_synthetic(const GeneratorConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::vector<Scene> scenes;
  scenes.reserve(config.num_scenes);

  const int n_samples = std::max(1, static_cast<int>(std::llround(config.duration_s / kStepSeconds)));

  for (int scene_idx = 0; scene_idx < config.num_scenes; ++scene_idx) {
    Scene scene;
    {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "scene-%06d", scene_idx);
      scene.scene_id = buf;
    }

    const bool is_straight = rng.bernoulli(config.straight_fraction);
    const geom::Vec2 start{rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0)};
    const double heading = rng.uniform(-kPi, kPi);

    LanePath path;
    double speed = 0.0;
    if (is_straight) {
      path = LanePath::straight(start, heading);
      speed = rng.uniform(config.speed_min, config.speed_max);
    } else {
      const double radius = rng.uniform(config.radius_min, config.radius_max);
      const int dir = rng.bernoulli(0.5) ? 1 : -1;
      path = LanePath::arc(start, heading, radius, dir);
      // Keep the 3 s heading change comfortably above the command threshold
      // and the lateral acceleration plausible.
      const double lo = std::max(config.speed_min, radius / 12.0);
      const double hi = std::max(lo, std::min(config.speed_max, std::sqrt(4.5 * radius)));
      speed = rng.uniform(lo, hi);
    }
    const double omega = path.yaw_rate(speed);

    // Road geometry covering the driven span with margin on both ends.
    const double s_lo = -30.0;
    const double s_hi = speed * config.duration_s + 30.0;
    scene.boundaries.push_back(path.offset_polyline(config.road_half_width, s_lo, s_hi));
    scene.boundary_traversable.push_back(false);
    scene.boundaries.push_back(path.offset_polyline(-config.road_half_width, s_lo, s_hi));
    scene.boundary_traversable.push_back(false);
    if (config.lane_divider) {
      scene.boundaries.push_back(path.offset_polyline(0.0, s_lo, s_hi));
      scene.boundary_traversable.push_back(true);
    }

    // Agent traffic on side lanes, sampled with rejection so no agent ever
    // overlaps the ego GT footprint at a shared timestep.
    const double lat_min = kDefaultEgoWidth / 2.0 + 1.05 + 0.35;
    const double lat_max = config.road_half_width - 1.05 - 0.05;
    std::vector<Agent> agents;
    if (lat_max > lat_min && config.mean_agents > 0.0) {
      const double t_end = (n_samples - 1 + kFutureSteps) * kStepSeconds;
      const int want = rng.poisson(config.mean_agents);
      for (int j = 0; j < want; ++j) {
        for (int attempt = 0; attempt < 20; ++attempt) {
          Agent a;
          a.s0 = rng.uniform(-20.0, speed * config.duration_s + 30.0);
          a.lateral = (rng.bernoulli(0.5) ? 1.0 : -1.0) * rng.uniform(lat_min, lat_max);
          const double mag = rng.uniform(0.3, 1.2) * std::max(speed, 1.0);
          a.speed = rng.bernoulli(0.8) ? mag : -mag;
          a.length = rng.uniform(3.8, 5.2);
          a.width = rng.uniform(1.7, 2.1);
          a.id = "a" + std::to_string(j);

          bool clear = true;
          for (int m = 0; m <= static_cast<int>(std::llround(t_end / kStepSeconds)); ++m) {
            const double t = m * kStepSeconds;
            const geom::Pose2D ego = path.pose_at(speed * t, 0.0);
            const geom::OrientedBox inflated(ego, kDefaultEgoLength + 0.8,
                                             kDefaultEgoWidth + 0.8);
            if (geom::exact_box_box_intersect(inflated, agent_box_at(path, a, t))) {
              clear = false;
              break;
            }
          }
          if (clear) {
            agents.push_back(std::move(a));
            break;
          }
        }
      }
    }

    scene.samples.reserve(n_samples);
    for (int k = 0; k < n_samples; ++k) {
      Sample sample;
      {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%s/%03d", scene.scene_id.c_str(), k);
        sample.sample_id = buf;
      }
      sample.t = k * kStepSeconds;
      sample.ego_pose = path.pose_at(speed * sample.t, 0.0);
      sample.status.speed = speed;
      sample.status.accel = 0.0;
      sample.status.yaw_rate = omega;
      const double heading_change_3s = omega * kFutureSteps * kStepSeconds;
      if (std::abs(heading_change_3s) < kCommandThreshold) {
        sample.status.command = Command::kStraight;
      } else {
        sample.status.command = heading_change_3s > 0.0 ? Command::kLeft : Command::kRight;
      }
      for (int i = 0; i < kFutureSteps; ++i) {
        const double tau = sample.t + (i + 1) * kStepSeconds;
        for (const Agent& a : agents) {
          sample.agents_future[i].push_back({a.id, agent_box_at(path, a, tau)});
        }
      }
      scene.samples.push_back(std::move(sample));
    }

    derive_gt_future(scene);
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

}  // namespace planeval::scene
