#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "planeval/formats.hpp"
#include "planeval/generator.hpp"
#include "planeval/geom.hpp"
#include "planeval/metrics.hpp"
#include "planeval/planners.hpp"
#include "planeval/report.hpp"
#include "planeval/scene.hpp"
#include "planeval/version.hpp"

namespace py = pybind11;
using namespace planeval;

namespace {

scene::Trajectory trajectory_from_list(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() != static_cast<std::size_t>(scene::kFutureSteps)) {
    throw std::invalid_argument("trajectory needs exactly 6 waypoints");
  }
  scene::Trajectory traj;
  for (int i = 0; i < scene::kFutureSteps; ++i) {
    traj.waypoints[i] = {pts[i].first, pts[i].second};
  }
  return traj;
}

std::vector<std::pair<double, double>> trajectory_to_list(const scene::Trajectory& traj) {
  std::vector<std::pair<double, double>> out;
  out.reserve(scene::kFutureSteps);
  for (const geom::Vec2 w : traj.waypoints) {
    out.emplace_back(w.x, w.y);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Open-loop trajectory planning evaluation toolkit";
  m.attr("__version__") = std::string(kToolVersion);
  m.attr("STEP_SECONDS") = scene::kStepSeconds;
  m.attr("FUTURE_STEPS") = scene::kFutureSteps;

  // --- geometry -----------------------------------------------------------
  py::class_<geom::Vec2>(m, "Vec2")
      .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &geom::Vec2::x)
      .def_readwrite("y", &geom::Vec2::y)
      .def("__repr__", [](const geom::Vec2& v) {
        return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
      });

  py::class_<geom::Pose2D>(m, "Pose2D")
      .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("yaw"))
      .def_readonly("x", &geom::Pose2D::x)
      .def_readonly("y", &geom::Pose2D::y)
      .def_readonly("yaw", &geom::Pose2D::yaw)
      .def("__repr__", [](const geom::Pose2D& p) {
        return "Pose2D(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
               std::to_string(p.yaw) + ")";
      });

  py::class_<geom::OrientedBox>(m, "OrientedBox")
      .def(py::init<geom::Pose2D, double, double>(), py::arg("center"), py::arg("length"),
           py::arg("width"))
      .def_property_readonly("center", &geom::OrientedBox::center)
      .def_property_readonly("length", &geom::OrientedBox::length)
      .def_property_readonly("width", &geom::OrientedBox::width)
      .def("contains", &geom::OrientedBox::contains)
      .def("corners", [](const geom::OrientedBox& b) {
        std::vector<std::pair<double, double>> out;
        for (const geom::Vec2 c : b.corners()) {
          out.emplace_back(c.x, c.y);
        }
        return out;
      });

  py::class_<geom::Polyline>(m, "Polyline")
      .def(py::init([](const std::vector<std::pair<double, double>>& pts) {
             std::vector<geom::Vec2> points;
             points.reserve(pts.size());
             for (const auto& [x, y] : pts) {
               points.push_back({x, y});
             }
             return geom::Polyline(std::move(points));
           }),
           py::arg("points"))
      .def_property_readonly("points", [](const geom::Polyline& line) {
        std::vector<std::pair<double, double>> out;
        for (const geom::Vec2 p : line.points) {
          out.emplace_back(p.x, p.y);
        }
        return out;
      });

  m.def("wrap_angle", &geom::wrap_angle, py::arg("angle"));
  m.def(
      "estimate_yaws",
      [](const std::vector<std::pair<double, double>>& pts, double initial_yaw) {
        std::vector<geom::Vec2> points;
        points.reserve(pts.size());
        for (const auto& [x, y] : pts) {
          points.push_back({x, y});
        }
        return geom::estimate_yaws(points, initial_yaw);
      },
      py::arg("waypoints"), py::arg("initial_yaw"));
  m.def(
      "make_footprint",
      [](std::pair<double, double> point, double yaw, double length, double width) {
        return geom::make_footprint({point.first, point.second}, yaw, length, width);
      },
      py::arg("point"), py::arg("yaw"), py::arg("length"), py::arg("width"));
  m.def("exact_box_box_intersect", &geom::exact_box_box_intersect, py::arg("a"), py::arg("b"));
  m.def("exact_box_polyline_intersect", &geom::exact_box_polyline_intersect, py::arg("box"),
        py::arg("line"));
  m.def(
      "to_global",
      [](const geom::Pose2D& ego, const std::vector<std::pair<double, double>>& pts) {
        std::vector<std::pair<double, double>> out;
        out.reserve(pts.size());
        for (const auto& [x, y] : pts) {
          const geom::Vec2 g = geom::to_global(ego, geom::Vec2{x, y});
          out.emplace_back(g.x, g.y);
        }
        return out;
      },
      py::arg("ego_pose"), py::arg("points"));

  // --- scenes -------------------------------------------------------------
  py::enum_<scene::Command>(m, "Command")
      .value("STRAIGHT", scene::Command::kStraight)
      .value("LEFT", scene::Command::kLeft)
      .value("RIGHT", scene::Command::kRight);

  py::class_<scene::EgoStatus>(m, "EgoStatus")
      .def(py::init([](double speed, double accel, double yaw_rate, scene::Command command) {
             return scene::EgoStatus{speed, accel, yaw_rate, command};
           }),
           py::arg("speed"), py::arg("accel") = 0.0, py::arg("yaw_rate") = 0.0,
           py::arg("command") = scene::Command::kStraight)
      .def_readwrite("speed", &scene::EgoStatus::speed)
      .def_readwrite("accel", &scene::EgoStatus::accel)
      .def_readwrite("yaw_rate", &scene::EgoStatus::yaw_rate)
      .def_readwrite("command", &scene::EgoStatus::command);

  py::class_<scene::Trajectory>(m, "Trajectory")
      .def(py::init(&trajectory_from_list), py::arg("waypoints"))
      .def_property_readonly("waypoints", &trajectory_to_list);

  py::class_<scene::AgentState>(m, "AgentState")
      .def_readonly("agent_id", &scene::AgentState::agent_id)
      .def_readonly("box", &scene::AgentState::box);

  py::class_<scene::Sample>(m, "Sample")
      .def_readonly("sample_id", &scene::Sample::sample_id)
      .def_readonly("t", &scene::Sample::t)
      .def_readonly("ego_pose", &scene::Sample::ego_pose)
      .def_readonly("status", &scene::Sample::status)
      .def_readonly("valid", &scene::Sample::valid)
      .def_property_readonly("gt_future", [](const scene::Sample& s) -> py::object {
        if (!s.gt_future.has_value()) {
          return py::none();
        }
        return py::cast(std::vector<geom::Pose2D>(s.gt_future->begin(), s.gt_future->end()));
      });

  py::class_<scene::Scene>(m, "Scene")
      .def_readonly("scene_id", &scene::Scene::scene_id)
      .def_readonly("samples", &scene::Scene::samples)
      .def_readonly("boundaries", &scene::Scene::boundaries)
      .def_readonly("boundary_traversable", &scene::Scene::boundary_traversable);

  py::class_<scene::GeneratorConfig>(m, "GeneratorConfig")
      .def(py::init<>())
      .def_readwrite("num_scenes", &scene::GeneratorConfig::num_scenes)
      .def_readwrite("straight_fraction", &scene::GeneratorConfig::straight_fraction)
      .def_readwrite("turn_fraction", &scene::GeneratorConfig::turn_fraction)
      .def_readwrite("duration_s", &scene::GeneratorConfig::duration_s)
      .def_readwrite("speed_min", &scene::GeneratorConfig::speed_min)
      .def_readwrite("speed_max", &scene::GeneratorConfig::speed_max)
      .def_readwrite("radius_min", &scene::GeneratorConfig::radius_min)
      .def_readwrite("radius_max", &scene::GeneratorConfig::radius_max)
      .def_readwrite("road_half_width", &scene::GeneratorConfig::road_half_width)
      .def_readwrite("mean_agents", &scene::GeneratorConfig::mean_agents)
      .def_readwrite("lane_divider", &scene::GeneratorConfig::lane_divider);

  m.def("gen_synthetic", &scene::gen_synthetic, py::arg("config"), py::arg("seed"));
  m.def("load_scenes", &scene::load_scenes, py::arg("path"));
  m.def(
      "save_scenes",
      [](const std::vector<scene::Scene>& scenes, const std::filesystem::path& path) {
        scene::save_scenes(scenes, path);
      },
      py::arg("scenes"), py::arg("path"));
  m.def("load_predictions", &scene::load_predictions, py::arg("path"));
  m.def("save_predictions", &scene::save_predictions, py::arg("predictions"), py::arg("path"));
  m.def("derive_command", &scene::derive_command, py::arg("sample"),
        py::arg("threshold") = scene::kCommandThreshold);

  // --- planners -----------------------------------------------------------
  py::class_<planners::Perturbation>(m, "Perturbation")
      .def_static("velocity_scale", &planners::Perturbation::velocity_scale, py::arg("factor"))
      .def_static("velocity_override", &planners::Perturbation::velocity_override,
                  py::arg("speed"));

  m.def("plan_go_straight", &planners::plan_go_straight, py::arg("status"));
  m.def("plan_constant_turn", &planners::plan_constant_turn, py::arg("status"));
  m.def("perturb", &planners::perturb, py::arg("status"), py::arg("perturbation"));
  m.def(
      "run_planner",
      [](const std::string& planner_id, const scene::Scene& sc,
         const std::optional<planners::Perturbation>& perturbation) {
        return planners::run_planner(planners::planner_from_string(planner_id), sc,
                                     perturbation);
      },
      py::arg("planner_id"), py::arg("scene"), py::arg("perturbation") = py::none());

  // --- metrics ------------------------------------------------------------
  py::class_<metrics::HorizonMetrics>(m, "HorizonMetrics")
      .def_readonly("at_1s", &metrics::HorizonMetrics::at_1s)
      .def_readonly("at_2s", &metrics::HorizonMetrics::at_2s)
      .def_readonly("at_3s", &metrics::HorizonMetrics::at_3s)
      .def_readonly("avg", &metrics::HorizonMetrics::avg);

  py::class_<metrics::MetricTable>(m, "MetricTable")
      .def_readonly("l2", &metrics::MetricTable::l2)
      .def_readonly("collision", &metrics::MetricTable::collision)
      .def_readonly("collision_legacy", &metrics::MetricTable::collision_legacy)
      .def_readonly("ccr", &metrics::MetricTable::ccr)
      .def_readonly("count", &metrics::MetricTable::count);

  py::class_<metrics::BenchmarkReport>(m, "BenchmarkReport")
      .def_readonly("overall", &metrics::BenchmarkReport::overall)
      .def_readonly("straight", &metrics::BenchmarkReport::straight)
      .def_readonly("turn", &metrics::BenchmarkReport::turn)
      .def_readonly("sigma_wd", &metrics::BenchmarkReport::sigma_wd)
      .def_readonly("sample_count", &metrics::BenchmarkReport::sample_count)
      .def_readonly("valid_count", &metrics::BenchmarkReport::valid_count)
      .def_readonly("evaluated_count", &metrics::BenchmarkReport::evaluated_count)
      .def_readonly("missing_count", &metrics::BenchmarkReport::missing_count);

  py::class_<metrics::SampleVerdict>(m, "SampleVerdict")
      .def_readonly("sample_id", &metrics::SampleVerdict::sample_id)
      .def_readonly("command", &metrics::SampleVerdict::command)
      .def_readonly("l2", &metrics::SampleVerdict::l2)
      .def_readonly("coll_legacy", &metrics::SampleVerdict::coll_legacy)
      .def_readonly("coll", &metrics::SampleVerdict::coll)
      .def_readonly("ccr", &metrics::SampleVerdict::ccr)
      .def_readonly("steps_hit_agent", &metrics::SampleVerdict::steps_hit_agent)
      .def_readonly("steps_hit_curb", &metrics::SampleVerdict::steps_hit_curb);

  py::class_<metrics::EvalConfig>(m, "EvalConfig")
      .def(py::init<>())
      .def_readwrite("grid_resolution", &metrics::EvalConfig::grid_resolution)
      .def_readwrite("grid_half_extent", &metrics::EvalConfig::grid_half_extent)
      .def_readwrite("strict_missing", &metrics::EvalConfig::strict_missing)
      .def_readwrite("derive_commands", &metrics::EvalConfig::derive_commands)
      .def_readwrite("command_threshold", &metrics::EvalConfig::command_threshold)
      .def_readwrite("workers", &metrics::EvalConfig::workers)
      .def_property(
          "l2_mode",
          [](const metrics::EvalConfig& c) {
            return c.l2_mode == metrics::L2Mode::kCumulative ? "cumulative" : "endpoint";
          },
          [](metrics::EvalConfig& c, const std::string& mode) {
            if (mode == "cumulative") {
              c.l2_mode = metrics::L2Mode::kCumulative;
            } else if (mode == "endpoint") {
              c.l2_mode = metrics::L2Mode::kEndpoint;
            } else {
              throw std::invalid_argument("l2_mode must be 'cumulative' or 'endpoint'");
            }
          })
      .def_property(
          "ego_dims",
          [](const metrics::EvalConfig& c) {
            return std::make_pair(c.ego_dims.length, c.ego_dims.width);
          },
          [](metrics::EvalConfig& c, std::pair<double, double> dims) {
            c.ego_dims = {dims.first, dims.second};
          });

  m.def("collision_rate", &metrics::collision_rate, py::arg("steps"), py::arg("t_seconds"));
  m.def("collision_rate_legacy", &metrics::collision_rate_legacy, py::arg("steps"),
        py::arg("t_seconds"));
  m.def(
      "evaluate",
      [](const std::vector<scene::Scene>& scenes, const scene::PredictionMap& predictions,
         const metrics::EvalConfig& config) {
        std::vector<metrics::SampleVerdict> verdicts;
        metrics::BenchmarkReport report =
            metrics::evaluate(scenes, predictions, config, &verdicts);
        return std::make_pair(std::move(report), std::move(verdicts));
      },
      py::arg("scenes"), py::arg("predictions"), py::arg("config") = metrics::EvalConfig{});
  m.def(
      "dataset_stats",
      [](const std::vector<scene::Scene>& scenes) { return metrics::dataset_stats(scenes); },
      py::arg("scenes"));

  py::class_<metrics::DatasetStats>(m, "DatasetStats")
      .def_readonly("straight_fraction", &metrics::DatasetStats::straight_fraction)
      .def_readonly("turn_fraction", &metrics::DatasetStats::turn_fraction)
      .def_readonly("valid_count", &metrics::DatasetStats::valid_count)
      .def_readonly("heatmap_rows", &metrics::DatasetStats::heatmap_rows)
      .def_readonly("heatmap_cols", &metrics::DatasetStats::heatmap_cols)
      .def_readonly("heatmap", &metrics::DatasetStats::heatmap);

  py::register_exception<scene::SchemaError>(m, "SchemaError");
  py::register_exception<metrics::MissingPredictionsError>(m, "MissingPredictionsError");
  py::register_exception<metrics::EmptyInputError>(m, "EmptyInputError");
  py::register_exception<metrics::UndefinedMetricError>(m, "UndefinedMetricError");
}
