#include "planeval/scene.hpp"

#include <stdexcept>

namespace planeval::scene {

std::string to_string(Command command) {
  switch (command) {
    case Command::kStraight:
      return "straight";
    case Command::kLeft:
      return "left";
    case Command::kRight:
      return "right";
  }
  throw std::logic_error("unreachable command");
}

Command command_from_string(const std::string& name) {
  if (name == "straight") return Command::kStraight;
  if (name == "left") return Command::kLeft;
  if (name == "right") return Command::kRight;
  throw std::invalid_argument("unknown command: " + name);
}

void derive_gt_future(Scene& scene) {
  const std::size_t n = scene.samples.size();
  for (std::size_t k = 0; k < n; ++k) {
    Sample& sample = scene.samples[k];
    if (k + kFutureSteps < n) {
      std::array<geom::Pose2D, kFutureSteps> future;
      for (int i = 0; i < kFutureSteps; ++i) {
        future[i] = scene.samples[k + 1 + i].ego_pose;
      }
      sample.gt_future = future;
      sample.valid = true;
    } else {
      sample.gt_future.reset();
      sample.valid = false;
    }
  }
}

Command derive_command(const Sample& sample, double threshold) {
  if (!sample.valid || !sample.gt_future.has_value()) {
    throw std::invalid_argument("derive_command: sample " + sample.sample_id +
                                " has no complete GT future");
  }
  const double delta =
      geom::wrap_angle(sample.gt_future->back().yaw - sample.ego_pose.yaw);
  if (std::abs(delta) < threshold) {
    return Command::kStraight;
  }
  return delta > 0.0 ? Command::kLeft : Command::kRight;
}

}  // namespace planeval::scene
