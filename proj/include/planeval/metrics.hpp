#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "planeval/formats.hpp"
#include "planeval/scene.hpp"

namespace planeval::metrics {

/// Values at the 1 s / 2 s / 3 s horizons plus their mean, matching the
/// benchmark table convention.
struct HorizonMetrics {
  double at_1s{0.0};
  double at_2s{0.0};
  double at_3s{0.0};
  double avg{0.0};

  static HorizonMetrics from(const std::array<double, 3>& h) {
    return {h[0], h[1], h[2], (h[0] + h[1] + h[2]) / 3.0};
  }
};

enum class L2Mode { kCumulative, kEndpoint };
enum class CollisionBackend { kRaster, kExact };
/// kFixedAtEgoYaw reproduces the legacy checks that keep the footprint at
/// the prediction-time heading; kEstimated orients it along the trajectory.
enum class YawMode { kEstimated, kFixedAtEgoYaw };

struct EgoDims {
  double length{scene::kDefaultEgoLength};
  double width{scene::kDefaultEgoWidth};
};

struct CollisionOptions {
  double grid_resolution{geom::kDefaultResolution};
  double grid_half_extent{55.0};
  CollisionBackend backend{CollisionBackend::kRaster};
  YawMode yaw_mode{YawMode::kEstimated};
};

struct EvalConfig {
  double grid_resolution{geom::kDefaultResolution};
  double grid_half_extent{55.0};
  EgoDims ego_dims{};
  L2Mode l2_mode{L2Mode::kCumulative};
  CollisionBackend backend{CollisionBackend::kRaster};
  YawMode yaw_mode{YawMode::kEstimated};
  bool strict_missing{true};
  bool derive_commands{false};
  double command_threshold{scene::kCommandThreshold};
  int workers{1};
};

struct SampleVerdict {
  std::string sample_id;
  scene::Command command{scene::Command::kStraight};
  std::array<double, 3> l2{};
  std::array<double, 3> coll_legacy{};
  std::array<bool, 3> coll{};
  std::array<bool, 3> ccr{};
  std::array<bool, 6> steps_hit_agent{};
  std::array<bool, 6> steps_hit_curb{};
};

struct MetricTable {
  HorizonMetrics l2{};                // meters
  HorizonMetrics collision{};         // percent of samples, OR rule
  HorizonMetrics collision_legacy{};  // percent, per-step fraction rule
  HorizonMetrics ccr{};               // percent of samples, OR rule
  std::size_t count{0};
};

struct BenchmarkReport {
  MetricTable overall;
  MetricTable straight;  // -ST split
  MetricTable turn;      // -LR split
  std::optional<HorizonMetrics> sigma_wd;  // m^2
  std::size_t sample_count{0};
  std::size_t valid_count{0};
  std::size_t evaluated_count{0};
  std::size_t missing_count{0};
};

struct SmoothnessReport {
  HorizonMetrics sigma_wd{};  // m^2
};

/// Heatmap of GT future waypoints in the ego frame plus command fractions.
struct DatasetStats {
  double straight_fraction{0.0};
  double turn_fraction{0.0};
  std::size_t valid_count{0};
  geom::Vec2 heatmap_origin{};
  double heatmap_resolution{0.5};
  int heatmap_rows{0};
  int heatmap_cols{0};
  std::vector<std::uint64_t> heatmap;  // row-major counts
};

class MissingPredictionsError : public std::runtime_error {
 public:
  explicit MissingPredictionsError(std::vector<std::string> ids);
  const std::vector<std::string>& sample_ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

class EmptyInputError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class UndefinedMetricError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mean displacement between predicted and GT positions over the waypoints
/// up to each horizon (or the endpoint displacement in kEndpoint mode).
std::array<double, 3> l2_metric(const scene::Trajectory& pred,
                                const std::array<geom::Pose2D, scene::kFutureSteps>& gt_future,
                                const geom::Pose2D& ego_pose, L2Mode mode = L2Mode::kCumulative);

/// Per-step agent overlap indicators I_i for the ego footprint swept along
/// the predicted trajectory. Throws std::invalid_argument on invalid samples.
std::array<bool, scene::kFutureSteps> step_collisions(const scene::Trajectory& pred,
                                                      const scene::Sample& sample,
                                                      const EgoDims& dims,
                                                      const CollisionOptions& options = {});

/// Per-step overlap with the non-traversable boundary raster.
std::array<bool, scene::kFutureSteps> curb_collisions(
    const scene::Trajectory& pred, const scene::Sample& sample,
    const std::vector<geom::Polyline>& boundaries, const std::vector<bool>& traversable,
    const EgoDims& dims, const CollisionOptions& options = {});

/// Fraction of colliding steps within the horizon (the legacy definition).
/// t_seconds must be 1, 2 or 3.
double collision_rate_legacy(const std::array<bool, scene::kFutureSteps>& steps,
                             double t_seconds);

/// Whether any step within the horizon collides (the corrected definition).
bool collision_rate(const std::array<bool, scene::kFutureSteps>& steps, double t_seconds);

/// Squared deviation of the global-frame waypoints that successive samples
/// assign to the same absolute instant, grouped by lead time.
/// Throws UndefinedMetricError when no instant receives two predictions.
SmoothnessReport smoothness(const scene::Scene& scene, const scene::PredictionMap& predictions);

/// Full verdict for one sample/prediction pair.
SampleVerdict evaluate_sample(const scene::Sample& sample, const scene::Trajectory& pred,
                              const scene::Scene& host, const EvalConfig& config);

/// Benchmark over a corpus. Per-sample verdicts land in `verdicts` when
/// non-null, ordered as in the input files regardless of worker count.
BenchmarkReport evaluate(std::span<const scene::Scene> scenes,
                         const scene::PredictionMap& predictions, const EvalConfig& config,
                         std::vector<SampleVerdict>* verdicts = nullptr);

/// Command fractions and ego-frame GT heatmap over valid samples.
/// Throws EmptyInputError when there is nothing to count.
DatasetStats dataset_stats(std::span<const scene::Scene> scenes);

namespace detail {

/// Smoothness sums/counts per horizon, exposed for corpus-level pooling.
struct SmoothnessAccum {
  std::array<double, 3> sum{};
  std::array<std::size_t, 3> count{};
  std::size_t instants_with_spread{0};
};

void accumulate_smoothness(const scene::Scene& scene, const scene::PredictionMap& predictions,
                           SmoothnessAccum& accum);

/// Global-frame footprints along the prediction.
std::array<geom::OrientedBox, scene::kFutureSteps> footprints(const scene::Trajectory& pred,
                                                              const geom::Pose2D& ego_pose,
                                                              const EgoDims& dims,
                                                              YawMode yaw_mode);

}  // namespace detail

}  // namespace planeval::metrics
