#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "planeval/geom.hpp"

namespace planeval::scene {

/// Sampling period of log-replay frames (2 Hz) and of trajectory waypoints.
inline constexpr double kStepSeconds = 0.5;

/// Waypoints per trajectory: a 3 s horizon at 0.5 s spacing.
inline constexpr int kFutureSteps = 6;

/// Default ego footprint, meters. Overridable per corpus.
inline constexpr double kDefaultEgoLength = 4.08;
inline constexpr double kDefaultEgoWidth = 1.73;

/// Heading-change threshold (rad over the 3 s horizon) separating straight
/// driving from turns when commands are derived geometrically.
inline constexpr double kCommandThreshold = 0.17;

enum class Command { kStraight, kLeft, kRight };

std::string to_string(Command command);
Command command_from_string(const std::string& name);

struct EgoStatus {
  double speed{0.0};      // m/s, >= 0
  double accel{0.0};      // m/s^2, signed along heading
  double yaw_rate{0.0};   // rad/s
  Command command{Command::kStraight};
};

struct AgentState {
  std::string agent_id;
  geom::OrientedBox box;  // global frame
};

/// Six ego-frame waypoints at horizons 0.5 s * (i + 1).
struct Trajectory {
  std::array<geom::Vec2, kFutureSteps> waypoints{};
};

struct Sample {
  std::string sample_id;
  double t{0.0};  // seconds, scene-relative
  geom::Pose2D ego_pose;
  EgoStatus status;
  /// Agent boxes at t + 0.5 * (i + 1) for step slot i; slots may be empty.
  std::array<std::vector<AgentState>, kFutureSteps> agents_future{};
  /// Ego poses at t + 0.5 * (i + 1); present iff derivable in-scene.
  std::optional<std::array<geom::Pose2D, kFutureSteps>> gt_future;
  bool valid{false};
};

struct Scene {
  std::string scene_id;
  std::vector<Sample> samples;  // strictly increasing t at 0.5 s spacing
  std::vector<geom::Polyline> boundaries;
  std::vector<bool> boundary_traversable;  // parallel to boundaries
};

/// Fills gt_future and valid for every sample: sample k takes the ego poses
/// of samples k+1..k+6; it is valid iff all six exist. Idempotent.
void derive_gt_future(Scene& scene);

/// Command from the total heading change between the sample pose and the
/// end of its GT future. Throws std::invalid_argument on invalid samples.
Command derive_command(const Sample& sample, double threshold = kCommandThreshold);

}  // namespace planeval::scene
