#pragma once

#include <optional>
#include <string>

#include "planeval/formats.hpp"
#include "planeval/scene.hpp"

namespace planeval::planners {

/// Yaw rates below this magnitude (rad/s) roll out as straight motion to
/// avoid cancellation in the turning radius v / omega.
inline constexpr double kMinYawRate = 1e-4;

/// Ego-status noise model: scale the speed or replace it outright.
struct Perturbation {
  enum class Kind { kVelocityScale, kVelocityOverride };

  Kind kind{Kind::kVelocityScale};
  double value{1.0};

  static Perturbation velocity_scale(double factor);
  static Perturbation velocity_override(double speed);
};

/// Continues at the current speed along the current heading:
/// waypoint i = (0.5 * (i + 1) * speed, 0) in the ego frame.
scene::Trajectory plan_go_straight(const scene::EgoStatus& status);

/// Unicycle rollout at constant speed and yaw rate.
scene::Trajectory plan_constant_turn(const scene::EgoStatus& status);

/// Pure: returns a copy with the speed scaled or overridden.
scene::EgoStatus perturb(const scene::EgoStatus& status, const Perturbation& p);

enum class PlannerId { kGoStraight, kConstantTurn };

std::string to_string(PlannerId id);
/// Throws std::invalid_argument on an unknown id.
PlannerId planner_from_string(const std::string& name);

/// One trajectory per valid sample from the (optionally perturbed) status.
scene::PredictionMap run_planner(PlannerId id, const scene::Scene& scene,
                                 const std::optional<Perturbation>& perturbation = std::nullopt);

}  // namespace planeval::planners
