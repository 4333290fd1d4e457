#include "planeval/planners.hpp"

#include <cmath>
#include <stdexcept>

namespace planeval::planners {

Perturbation Perturbation::velocity_scale(double factor) {
  if (!(factor >= 0.0) || !std::isfinite(factor)) {
    throw std::invalid_argument("Perturbation: scale factor must be >= 0");
  }
  return {Kind::kVelocityScale, factor};
}

Perturbation Perturbation::velocity_override(double speed) {
  if (!(speed >= 0.0) || !std::isfinite(speed)) {
    throw std::invalid_argument("Perturbation: override speed must be >= 0");
  }
  return {Kind::kVelocityOverride, speed};
}

scene::Trajectory plan_go_straight(const scene::EgoStatus& status) {
  scene::Trajectory traj;
  for (int i = 0; i < scene::kFutureSteps; ++i) {
    traj.waypoints[i] = {status.speed * scene::kStepSeconds * (i + 1), 0.0};
  }
  return traj;
}

scene::Trajectory plan_constant_turn(const scene::EgoStatus& status) {
  if (std::abs(status.yaw_rate) <= kMinYawRate) {
    return plan_go_straight(status);
  }
  const double radius = status.speed / status.yaw_rate;
  scene::Trajectory traj;
  for (int i = 0; i < scene::kFutureSteps; ++i) {
    const double theta = status.yaw_rate * scene::kStepSeconds * (i + 1);
    traj.waypoints[i] = {radius * std::sin(theta), radius * (1.0 - std::cos(theta))};
  }
  return traj;
}

scene::EgoStatus perturb(const scene::EgoStatus& status, const Perturbation& p) {
  scene::EgoStatus out = status;
  switch (p.kind) {
    case Perturbation::Kind::kVelocityScale:
      out.speed = status.speed * p.value;
      break;
    case Perturbation::Kind::kVelocityOverride:
      out.speed = p.value;
      break;
  }
  return out;
}

std::string to_string(PlannerId id) {
  switch (id) {
    case PlannerId::kGoStraight:
      return "go_straight";
    case PlannerId::kConstantTurn:
      return "constant_turn";
  }
  throw std::logic_error("unreachable planner id");
}

PlannerId planner_from_string(const std::string& name) {
  if (name == "go_straight") return PlannerId::kGoStraight;
  if (name == "constant_turn") return PlannerId::kConstantTurn;
  throw std::invalid_argument("unknown planner_id: " + name);
}

scene::PredictionMap run_planner(PlannerId id, const scene::Scene& scene,
                                 const std::optional<Perturbation>& perturbation) {
  scene::PredictionMap out;
  for (const scene::Sample& sample : scene.samples) {
    if (!sample.valid) {
      continue;
    }
    scene::EgoStatus status = sample.status;
    if (perturbation.has_value()) {
      status = perturb(status, *perturbation);
    }
    switch (id) {
      case PlannerId::kGoStraight:
        out.emplace(sample.sample_id, plan_go_straight(status));
        break;
      case PlannerId::kConstantTurn:
        out.emplace(sample.sample_id, plan_constant_turn(status));
        break;
    }
  }
  return out;
}

}  // namespace planeval::planners
