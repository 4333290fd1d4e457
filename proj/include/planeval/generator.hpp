#pragma once

#include <cstdint>
#include <vector>

#include "planeval/scene.hpp"

namespace planeval::scene {

/// Synthetic log-replay corpus configuration. Scenes are straight-road or
/// arc-road drives with curb polylines at +/- road_half_width around the
/// lane centerline and constant-speed agent traffic.
struct GeneratorConfig {
  int num_scenes{100};
  double straight_fraction{0.739};
  double turn_fraction{0.261};
  double duration_s{20.0};        // 2 Hz sampling -> 40 samples for 20 s
  double speed_min{2.0};          // m/s
  double speed_max{14.0};         // m/s
  double radius_min{15.0};        // m, arc scenes
  double radius_max{40.0};        // m
  double road_half_width{3.5};    // m, curb offset from centerline
  double mean_agents{3.0};        // Poisson mean per scene
  bool lane_divider{true};        // emit a traversable centerline polyline

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Deterministic for a fixed (config, seed): two calls produce identical
/// corpora byte for byte once serialized.
std::vector<Scene> gen_synthetic(const GeneratorConfig& config, std::uint64_t seed);

}  // namespace planeval::scene
