#include "planeval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace planeval::metrics {

namespace {

int horizon_steps(double t_seconds) {
  for (int k = 1; k <= 3; ++k) {
    if (std::abs(t_seconds - k) < 1e-9) {
      return 2 * k;
    }
  }
  throw std::invalid_argument("horizon must be 1, 2 or 3 seconds");
}

void require_valid(const scene::Sample& sample) {
  if (!sample.valid || !sample.gt_future.has_value()) {
    throw std::invalid_argument("sample " + sample.sample_id + " is not valid for evaluation");
  }
}

}  // namespace

MissingPredictionsError::MissingPredictionsError(std::vector<std::string> ids)
    : std::runtime_error("missing predictions for " + std::to_string(ids.size()) + " samples"),
      ids_(std::move(ids)) {}

std::array<double, 3> l2_metric(const scene::Trajectory& pred,
                                const std::array<geom::Pose2D, scene::kFutureSteps>& gt_future,
                                const geom::Pose2D& ego_pose, L2Mode mode) {
  const std::vector<geom::Vec2> global = geom::to_global(ego_pose, pred.waypoints);
  std::array<double, scene::kFutureSteps> dist;
  for (int i = 0; i < scene::kFutureSteps; ++i) {
    dist[i] = (global[i] - gt_future[i].position()).norm();
  }
  std::array<double, 3> out{};
  for (int h = 0; h < 3; ++h) {
    const int n = 2 * (h + 1);
    if (mode == L2Mode::kEndpoint) {
      out[h] = dist[n - 1];
    } else {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += dist[i];
      }
      out[h] = sum / n;
    }
  }
  return out;
}

namespace detail {

std::array<geom::OrientedBox, scene::kFutureSteps> footprints(const scene::Trajectory& pred,
                                                              const geom::Pose2D& ego_pose,
                                                              const EgoDims& dims,
                                                              YawMode yaw_mode) {
  const std::vector<geom::Vec2> global = geom::to_global(ego_pose, pred.waypoints);
  std::vector<double> yaws;
  if (yaw_mode == YawMode::kEstimated) {
    yaws = geom::estimate_yaws(global, ego_pose.yaw);
  } else {
    yaws.assign(global.size(), ego_pose.yaw);
  }
  auto box_at = [&](int i) {
    return geom::make_footprint(global[i], yaws[i], dims.length, dims.width);
  };
  return {box_at(0), box_at(1), box_at(2), box_at(3), box_at(4), box_at(5)};
}

}  // namespace detail

std::array<bool, scene::kFutureSteps> step_collisions(const scene::Trajectory& pred,
                                                      const scene::Sample& sample,
                                                      const EgoDims& dims,
                                                      const CollisionOptions& options) {
  require_valid(sample);
  const auto boxes = detail::footprints(pred, sample.ego_pose, dims, options.yaw_mode);
  std::array<bool, scene::kFutureSteps> hits{};

  if (options.backend == CollisionBackend::kExact) {
    for (int i = 0; i < scene::kFutureSteps; ++i) {
      for (const scene::AgentState& agent : sample.agents_future[i]) {
        if (geom::exact_box_box_intersect(boxes[i], agent.box)) {
          hits[i] = true;
          break;
        }
      }
    }
    return hits;
  }

  geom::OccupancyGrid grid = geom::OccupancyGrid::window(
      sample.ego_pose.position(), options.grid_half_extent, options.grid_resolution);
  for (int i = 0; i < scene::kFutureSteps; ++i) {
    if (sample.agents_future[i].empty()) {
      continue;
    }
    if (i > 0) {
      grid.clear();
    }
    for (const scene::AgentState& agent : sample.agents_future[i]) {
      geom::rasterize_box(grid, agent.box);
    }
    hits[i] = geom::box_hits_grid(grid, boxes[i]);
  }
  return hits;
}

std::array<bool, scene::kFutureSteps> curb_collisions(
    const scene::Trajectory& pred, const scene::Sample& sample,
    const std::vector<geom::Polyline>& boundaries, const std::vector<bool>& traversable,
    const EgoDims& dims, const CollisionOptions& options) {
  require_valid(sample);
  if (boundaries.size() != traversable.size()) {
    throw std::invalid_argument("boundary flags must parallel boundaries");
  }
  const auto boxes = detail::footprints(pred, sample.ego_pose, dims, options.yaw_mode);
  std::array<bool, scene::kFutureSteps> hits{};

  if (options.backend == CollisionBackend::kExact) {
    for (int i = 0; i < scene::kFutureSteps; ++i) {
      for (std::size_t b = 0; b < boundaries.size() && !hits[i]; ++b) {
        if (!traversable[b] && geom::exact_box_polyline_intersect(boxes[i], boundaries[b])) {
          hits[i] = true;
        }
      }
    }
    return hits;
  }

  geom::OccupancyGrid grid = geom::OccupancyGrid::window(
      sample.ego_pose.position(), options.grid_half_extent, options.grid_resolution);
  for (std::size_t b = 0; b < boundaries.size(); ++b) {
    if (!traversable[b]) {
      geom::rasterize_polyline(grid, boundaries[b]);
    }
  }
  for (int i = 0; i < scene::kFutureSteps; ++i) {
    hits[i] = geom::box_hits_grid(grid, boxes[i]);
  }
  return hits;
}

double collision_rate_legacy(const std::array<bool, scene::kFutureSteps>& steps,
                             double t_seconds) {
  const int n = horizon_steps(t_seconds);
  int count = 0;
  for (int i = 0; i < n; ++i) {
    count += steps[i] ? 1 : 0;
  }
  return static_cast<double>(count) / n;
}

bool collision_rate(const std::array<bool, scene::kFutureSteps>& steps, double t_seconds) {
  const int n = horizon_steps(t_seconds);
  for (int i = 0; i < n; ++i) {
    if (steps[i]) {
      return true;
    }
  }
  return false;
}

namespace detail {

void accumulate_smoothness(const scene::Scene& scene, const scene::PredictionMap& predictions,
                           SmoothnessAccum& accum) {
  const int n = static_cast<int>(scene.samples.size());
  std::vector<std::optional<std::vector<geom::Vec2>>> global(n);
  for (int k = 0; k < n; ++k) {
    const scene::Sample& sample = scene.samples[k];
    if (!sample.valid) {
      continue;
    }
    const auto it = predictions.find(sample.sample_id);
    if (it == predictions.end()) {
      continue;
    }
    global[k] = geom::to_global(sample.ego_pose, it->second.waypoints);
  }

  // Absolute step index m collects the lead-j waypoint of sample m - j.
  for (int m = 1; m < n + scene::kFutureSteps; ++m) {
    geom::Vec2 sum{};
    int count = 0;
    std::array<std::optional<geom::Vec2>, scene::kFutureSteps> by_lead;
    for (int j = 1; j <= scene::kFutureSteps; ++j) {
      const int k = m - j;
      if (k < 0 || k >= n || !global[k].has_value()) {
        continue;
      }
      const geom::Vec2 p = (*global[k])[j - 1];
      by_lead[j - 1] = p;
      sum = sum + p;
      ++count;
    }
    if (count < 2) {
      continue;
    }
    ++accum.instants_with_spread;
    const geom::Vec2 centroid = sum * (1.0 / count);
    for (int h = 0; h < 3; ++h) {
      const int lead = 2 * (h + 1);
      if (by_lead[lead - 1].has_value()) {
        accum.sum[h] += (*by_lead[lead - 1] - centroid).squared_norm();
        accum.count[h] += 1;
      }
    }
  }
}

}  // namespace detail

SmoothnessReport smoothness(const scene::Scene& scene, const scene::PredictionMap& predictions) {
  detail::SmoothnessAccum accum;
  detail::accumulate_smoothness(scene, predictions, accum);
  if (accum.instants_with_spread == 0) {
    throw UndefinedMetricError("smoothness undefined: no instant receives two predictions in scene " +
                               scene.scene_id);
  }
  std::array<double, 3> sigma{};
  for (int h = 0; h < 3; ++h) {
    sigma[h] = accum.count[h] > 0 ? accum.sum[h] / accum.count[h]
                                  : std::numeric_limits<double>::quiet_NaN();
  }
  return {HorizonMetrics::from(sigma)};
}

SampleVerdict evaluate_sample(const scene::Sample& sample, const scene::Trajectory& pred,
                              const scene::Scene& host, const EvalConfig& config) {
  require_valid(sample);
  SampleVerdict verdict;
  verdict.sample_id = sample.sample_id;
  verdict.command = config.derive_commands
                        ? scene::derive_command(sample, config.command_threshold)
                        : sample.status.command;
  verdict.l2 = l2_metric(pred, *sample.gt_future, sample.ego_pose, config.l2_mode);

  const CollisionOptions options{config.grid_resolution, config.grid_half_extent, config.backend,
                                 config.yaw_mode};
  verdict.steps_hit_agent = step_collisions(pred, sample, config.ego_dims, options);
  verdict.steps_hit_curb = curb_collisions(pred, sample, host.boundaries,
                                           host.boundary_traversable, config.ego_dims, options);
  for (int h = 0; h < 3; ++h) {
    const double t = h + 1.0;
    verdict.coll_legacy[h] = collision_rate_legacy(verdict.steps_hit_agent, t);
    verdict.coll[h] = collision_rate(verdict.steps_hit_agent, t);
    verdict.ccr[h] = collision_rate(verdict.steps_hit_curb, t);
  }
  return verdict;
}

namespace {

struct GroupAccum {
  std::array<double, 3> l2_sum{};
  std::array<double, 3> legacy_sum{};
  std::array<std::size_t, 3> coll_count{};
  std::array<std::size_t, 3> ccr_count{};
  std::size_t count{0};

  void add(const SampleVerdict& v) {
    for (int h = 0; h < 3; ++h) {
      l2_sum[h] += v.l2[h];
      legacy_sum[h] += v.coll_legacy[h];
      coll_count[h] += v.coll[h] ? 1 : 0;
      ccr_count[h] += v.ccr[h] ? 1 : 0;
    }
    ++count;
  }

  MetricTable table() const {
    MetricTable t;
    t.count = count;
    if (count == 0) {
      return t;
    }
    std::array<double, 3> l2{};
    std::array<double, 3> legacy{};
    std::array<double, 3> coll{};
    std::array<double, 3> ccr{};
    for (int h = 0; h < 3; ++h) {
      l2[h] = l2_sum[h] / count;
      legacy[h] = 100.0 * legacy_sum[h] / count;
      coll[h] = 100.0 * coll_count[h] / count;
      ccr[h] = 100.0 * ccr_count[h] / count;
    }
    t.l2 = HorizonMetrics::from(l2);
    t.collision_legacy = HorizonMetrics::from(legacy);
    t.collision = HorizonMetrics::from(coll);
    t.ccr = HorizonMetrics::from(ccr);
    return t;
  }
};

}  // namespace

BenchmarkReport evaluate(std::span<const scene::Scene> scenes,
                         const scene::PredictionMap& predictions, const EvalConfig& config,
                         std::vector<SampleVerdict>* verdicts) {
  struct Task {
    const scene::Scene* scene;
    const scene::Sample* sample;
    const scene::Trajectory* pred;
  };

  BenchmarkReport report;
  std::vector<Task> tasks;
  std::vector<std::string> missing;
  for (const scene::Scene& sc : scenes) {
    for (const scene::Sample& sample : sc.samples) {
      ++report.sample_count;
      if (!sample.valid) {
        continue;
      }
      ++report.valid_count;
      const auto it = predictions.find(sample.sample_id);
      if (it == predictions.end()) {
        missing.push_back(sample.sample_id);
        continue;
      }
      tasks.push_back({&sc, &sample, &it->second});
    }
  }
  report.missing_count = missing.size();
  if (!missing.empty() && config.strict_missing) {
    throw MissingPredictionsError(std::move(missing));
  }

  std::vector<SampleVerdict> results(tasks.size());
  const int workers = std::clamp(
      config.workers, 1, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      results[i] = evaluate_sample(*tasks[i].sample, *tasks[i].pred, *tasks[i].scene, config);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (std::size_t i = w; i < tasks.size(); i += workers) {
            results[i] =
                evaluate_sample(*tasks[i].sample, *tasks[i].pred, *tasks[i].scene, config);
          }
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) {
            first_error = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) {
      t.join();
    }
    if (first_error) {
      std::rethrow_exception(first_error);
    }
  }

  // Order-independent reduction: verdicts are accumulated in input order.
  GroupAccum overall;
  GroupAccum straight;
  GroupAccum turn;
  for (const SampleVerdict& v : results) {
    overall.add(v);
    if (v.command == scene::Command::kStraight) {
      straight.add(v);
    } else {
      turn.add(v);
    }
  }
  report.evaluated_count = overall.count;
  report.overall = overall.table();
  report.straight = straight.table();
  report.turn = turn.table();

  detail::SmoothnessAccum sigma;
  for (const scene::Scene& sc : scenes) {
    detail::accumulate_smoothness(sc, predictions, sigma);
  }
  if (sigma.count[0] + sigma.count[1] + sigma.count[2] > 0) {
    std::array<double, 3> s{};
    for (int h = 0; h < 3; ++h) {
      s[h] = sigma.count[h] > 0 ? sigma.sum[h] / sigma.count[h]
                                : std::numeric_limits<double>::quiet_NaN();
    }
    report.sigma_wd = HorizonMetrics::from(s);
  }

  if (verdicts != nullptr) {
    *verdicts = std::move(results);
  }
  return report;
}

DatasetStats dataset_stats(std::span<const scene::Scene> scenes) {
  if (scenes.empty()) {
    throw EmptyInputError("no scenes");
  }
  DatasetStats stats;
  std::size_t straight = 0;
  std::size_t turn = 0;
  std::vector<geom::Vec2> points;
  for (const scene::Scene& sc : scenes) {
    for (const scene::Sample& sample : sc.samples) {
      if (!sample.valid) {
        continue;
      }
      ++stats.valid_count;
      if (scene::derive_command(sample) == scene::Command::kStraight) {
        ++straight;
      } else {
        ++turn;
      }
      for (const geom::Pose2D& p : *sample.gt_future) {
        points.push_back(geom::to_ego_frame(sample.ego_pose, p.position()));
      }
    }
  }
  if (stats.valid_count == 0) {
    throw EmptyInputError("no valid samples");
  }
  stats.straight_fraction = static_cast<double>(straight) / stats.valid_count;
  stats.turn_fraction = static_cast<double>(turn) / stats.valid_count;

  geom::Vec2 lo = points.front();
  geom::Vec2 hi = points.front();
  for (const geom::Vec2 p : points) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  const double res = stats.heatmap_resolution;
  stats.heatmap_origin = {std::floor(lo.x / res) * res, std::floor(lo.y / res) * res};
  stats.heatmap_cols =
      static_cast<int>(std::floor((hi.x - stats.heatmap_origin.x) / res)) + 1;
  stats.heatmap_rows =
      static_cast<int>(std::floor((hi.y - stats.heatmap_origin.y) / res)) + 1;
  stats.heatmap.assign(static_cast<std::size_t>(stats.heatmap_rows) * stats.heatmap_cols, 0);
  for (const geom::Vec2 p : points) {
    const int col = std::min(
        static_cast<int>(std::floor((p.x - stats.heatmap_origin.x) / res)), stats.heatmap_cols - 1);
    const int row = std::min(
        static_cast<int>(std::floor((p.y - stats.heatmap_origin.y) / res)), stats.heatmap_rows - 1);
    ++stats.heatmap[static_cast<std::size_t>(row) * stats.heatmap_cols + col];
  }
  return stats;
}

}  // namespace planeval::metrics
