#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "planeval/formats.hpp"
#include "planeval/generator.hpp"
#include "planeval/metrics.hpp"
#include "planeval/planners.hpp"
#include "planeval/report.hpp"
#include "planeval/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace planeval;

// Exit code taxonomy, stable for CI.
constexpr int kExitUsage = 2;
constexpr int kExitMissingPredictions = 3;
constexpr int kExitSchema = 4;
constexpr int kExitEmptyInput = 5;

fs::path resolve_out_dir(const std::string& flag_value, const char* fallback) {
  if (!flag_value.empty()) {
    return flag_value;
  }
  if (const char* env = std::getenv("PLANEVAL_OUTPUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return fallback;
}

struct GenArgs {
  std::string out;
  std::uint64_t seed{0};
  scene::GeneratorConfig config;
};

struct PlanArgs {
  std::string scenes;
  std::string planner;
  std::string out;
  double perturb_scale{-1.0};
  double perturb_override{-1.0};
};

struct EvalArgs {
  std::string scenes;
  std::string preds;
  std::string planner;
  std::string out;
  double perturb_scale{-1.0};
  double perturb_override{-1.0};
  metrics::EvalConfig config;
  std::string l2_mode{"cumulative"};
  std::string backend{"raster"};
  std::string yaw_mode{"estimated"};
};

struct StatsArgs {
  std::string scenes;
  std::string out;
};

std::optional<planners::Perturbation> make_perturbation(double scale, double override_speed) {
  if (scale >= 0.0 && override_speed >= 0.0) {
    throw CLI::ValidationError("perturbation",
                               "--perturb-scale and --perturb-override are exclusive");
  }
  if (scale >= 0.0) {
    return planners::Perturbation::velocity_scale(scale);
  }
  if (override_speed >= 0.0) {
    return planners::Perturbation::velocity_override(override_speed);
  }
  return std::nullopt;
}

int run_gen(const GenArgs& args) {
  const fs::path out_dir = resolve_out_dir(args.out, "corpus");
  fs::create_directories(out_dir);
  const std::vector<scene::Scene> scenes = scene::gen_synthetic(args.config, args.seed);
  scene::save_scenes(scenes, out_dir / "corpus.scenes");

  std::size_t samples = 0;
  std::size_t valid = 0;
  std::size_t straight_scenes = 0;
  for (const scene::Scene& sc : scenes) {
    samples += sc.samples.size();
    for (const scene::Sample& s : sc.samples) {
      valid += s.valid ? 1 : 0;
    }
    if (!sc.samples.empty() && sc.samples.front().status.yaw_rate == 0.0) {
      ++straight_scenes;
    }
  }

  nlohmann::json config_j;
  config_j["num_scenes"] = args.config.num_scenes;
  config_j["straight_fraction"] = args.config.straight_fraction;
  config_j["turn_fraction"] = args.config.turn_fraction;
  config_j["duration_s"] = args.config.duration_s;
  config_j["speed_min"] = args.config.speed_min;
  config_j["speed_max"] = args.config.speed_max;
  config_j["radius_min"] = args.config.radius_min;
  config_j["radius_max"] = args.config.radius_max;
  config_j["road_half_width"] = args.config.road_half_width;
  config_j["mean_agents"] = args.config.mean_agents;
  config_j["lane_divider"] = args.config.lane_divider;

  nlohmann::json manifest;
  manifest["tool"] = std::string(kToolName);
  manifest["version"] = std::string(kToolVersion);
  manifest["seed"] = args.seed;
  manifest["config"] = config_j;
  manifest["config_hash"] = report::hex64(report::fnv1a64(config_j.dump()));
  manifest["counts"] = {{"scenes", scenes.size()},
                        {"straight_scenes", straight_scenes},
                        {"turn_scenes", scenes.size() - straight_scenes},
                        {"samples", samples},
                        {"valid_samples", valid}};
  report::write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "wrote " << scenes.size() << " scenes (" << valid << "/" << samples
            << " valid samples) to " << (out_dir / "corpus.scenes").string() << "\n";
  return 0;
}

int run_plan(const PlanArgs& args) {
  const planners::PlannerId planner = planners::planner_from_string(args.planner);
  const auto perturbation = make_perturbation(args.perturb_scale, args.perturb_override);
  const std::vector<scene::Scene> scenes = scene::load_scenes(args.scenes);
  if (scenes.empty()) {
    throw metrics::EmptyInputError("no scenes in " + args.scenes);
  }
  scene::PredictionMap predictions;
  for (const scene::Scene& sc : scenes) {
    scene::PredictionMap part = planners::run_planner(planner, sc, perturbation);
    predictions.merge(part);
  }
  const fs::path out =
      args.out.empty() ? fs::path(planners::to_string(planner) + ".preds") : fs::path(args.out);
  if (out.has_parent_path()) {
    fs::create_directories(out.parent_path());
  }
  scene::save_predictions(predictions, out);
  std::cout << "wrote " << predictions.size() << " predictions to " << out.string() << "\n";
  return 0;
}

int run_eval(EvalArgs& args) {
  if (args.preds.empty() == args.planner.empty()) {
    throw CLI::ValidationError("inputs", "exactly one of --preds / --planner must be given");
  }
  args.config.l2_mode =
      args.l2_mode == "endpoint" ? metrics::L2Mode::kEndpoint : metrics::L2Mode::kCumulative;
  args.config.backend = args.backend == "exact" ? metrics::CollisionBackend::kExact
                                                : metrics::CollisionBackend::kRaster;
  args.config.yaw_mode = args.yaw_mode == "fixed" ? metrics::YawMode::kFixedAtEgoYaw
                                                  : metrics::YawMode::kEstimated;

  const std::vector<scene::Scene> scenes = scene::load_scenes(args.scenes);
  if (scenes.empty()) {
    throw metrics::EmptyInputError("no scenes in " + args.scenes);
  }

  scene::PredictionMap predictions;
  std::string method;
  if (!args.preds.empty()) {
    predictions = scene::load_predictions(args.preds);
    method = "predictions:" + fs::path(args.preds).filename().string();
  } else {
    const planners::PlannerId planner = planners::planner_from_string(args.planner);
    const auto perturbation = make_perturbation(args.perturb_scale, args.perturb_override);
    for (const scene::Scene& sc : scenes) {
      scene::PredictionMap part = planners::run_planner(planner, sc, perturbation);
      predictions.merge(part);
    }
    method = planners::to_string(planner);
    if (perturbation.has_value()) {
      method += perturbation->kind == planners::Perturbation::Kind::kVelocityScale
                    ? " (v x " + std::to_string(perturbation->value) + ")"
                    : " (v = " + std::to_string(perturbation->value) + " m/s)";
    }
  }

  std::vector<metrics::SampleVerdict> verdicts;
  const metrics::BenchmarkReport result =
      metrics::evaluate(scenes, predictions, args.config, &verdicts);

  const fs::path out_dir = resolve_out_dir(args.out, "report");
  fs::create_directories(out_dir);
  report::write_text(out_dir / "report.json",
                     report::report_json(result, args.config, method).dump(2) + "\n");
  const std::string markdown = report::report_markdown(result, args.config, method);
  report::write_text(out_dir / "report.md", markdown);
  report::write_text(out_dir / "verdicts.ndjson", report::verdicts_ndjson(verdicts));

  std::cout << markdown;
  return 0;
}

int run_stats(const StatsArgs& args) {
  const std::vector<scene::Scene> scenes = scene::load_scenes(args.scenes);
  const metrics::DatasetStats stats = metrics::dataset_stats(scenes);
  const fs::path out_dir = resolve_out_dir(args.out, "stats");
  fs::create_directories(out_dir);
  report::write_text(out_dir / "stats.json", report::stats_json(stats).dump(2) + "\n");
  report::write_text(out_dir / "heatmap.txt", report::heatmap_matrix(stats));
  char line[128];
  std::snprintf(line, sizeof(line), "straight_fraction %.3f\nturn_fraction %.3f\n",
                stats.straight_fraction, stats.turn_fraction);
  std::cout << line;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) + " " + std::string(kToolVersion) +
               " - open-loop trajectory planning evaluation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  // Key=value config file with one [section] per subcommand; explicit
  // command-line flags win over file values.
  app.set_config("--config", "", "read options from a key=value config file");

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene corpus");
  gen->fallthrough();
  gen->add_option("--out", gen_args.out, "output directory");
  gen->add_option("--scenes", gen_args.config.num_scenes, "number of scenes")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--straight", gen_args.config.straight_fraction, "fraction of straight scenes")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--turn", gen_args.config.turn_fraction, "fraction of turning scenes")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_args.seed, "corpus seed");
  gen->add_option("--duration", gen_args.config.duration_s, "scene duration in seconds")
      ->check(CLI::PositiveNumber);
  gen->add_option("--speed-min", gen_args.config.speed_min, "minimum ego speed (m/s)");
  gen->add_option("--speed-max", gen_args.config.speed_max, "maximum ego speed (m/s)");
  gen->add_option("--radius-min", gen_args.config.radius_min, "minimum turn radius (m)");
  gen->add_option("--radius-max", gen_args.config.radius_max, "maximum turn radius (m)");
  gen->add_option("--road-half-width", gen_args.config.road_half_width,
                  "curb offset from the lane centerline (m)");
  gen->add_option("--mean-agents", gen_args.config.mean_agents, "Poisson mean agents per scene");
  gen->add_flag("--lane-divider,!--no-lane-divider", gen_args.config.lane_divider,
                "emit a traversable centerline polyline");

  PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand("plan", "run a baseline planner into a prediction file");
  plan->fallthrough();
  plan->add_option("--scenes", plan_args.scenes, "scene corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  plan->add_option("--planner", plan_args.planner, "go_straight | constant_turn")->required();
  plan->add_option("--out", plan_args.out, "output prediction file");
  plan->add_option("--perturb-scale", plan_args.perturb_scale, "scale the ego speed");
  plan->add_option("--perturb-override", plan_args.perturb_override, "replace the ego speed (m/s)");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate predictions against a corpus");
  eval->fallthrough();
  eval->add_option("--scenes", eval_args.scenes, "scene corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--preds", eval_args.preds, "prediction file")->check(CLI::ExistingFile);
  eval->add_option("--planner", eval_args.planner, "evaluate a baseline planner instead");
  eval->add_option("--perturb-scale", eval_args.perturb_scale, "scale the ego speed");
  eval->add_option("--perturb-override", eval_args.perturb_override,
                   "replace the ego speed (m/s)");
  eval->add_option("--out", eval_args.out, "output directory");
  eval->add_option("--grid-resolution", eval_args.config.grid_resolution,
                   "raster resolution (m)")
      ->check(CLI::PositiveNumber);
  eval->add_option("--half-extent", eval_args.config.grid_half_extent,
                   "raster window half extent (m)")
      ->check(CLI::PositiveNumber);
  eval->add_option("--ego-length", eval_args.config.ego_dims.length, "ego footprint length (m)")
      ->check(CLI::PositiveNumber);
  eval->add_option("--ego-width", eval_args.config.ego_dims.width, "ego footprint width (m)")
      ->check(CLI::PositiveNumber);
  eval->add_option("--l2-mode", eval_args.l2_mode, "cumulative | endpoint")
      ->check(CLI::IsMember({"cumulative", "endpoint"}));
  eval->add_option("--backend", eval_args.backend, "raster | exact")
      ->check(CLI::IsMember({"raster", "exact"}));
  eval->add_option("--yaw-mode", eval_args.yaw_mode, "estimated | fixed")
      ->check(CLI::IsMember({"estimated", "fixed"}));
  eval->add_flag("--strict,!--no-strict", eval_args.config.strict_missing,
                 "fail when a valid sample lacks a prediction");
  eval->add_flag("--derive-commands", eval_args.config.derive_commands,
                 "derive driving commands from GT geometry instead of stored values");
  eval->add_option("--command-threshold", eval_args.config.command_threshold,
                   "heading-change threshold (rad over 3 s)")
      ->check(CLI::PositiveNumber);
  eval->add_option("--workers", eval_args.config.workers, "parallel evaluation workers")
      ->check(CLI::PositiveNumber);

  StatsArgs stats_args;
  CLI::App* stats = app.add_subcommand("stats", "corpus statistics and GT heatmap");
  stats->fallthrough();
  stats->add_option("--scenes", stats_args.scenes, "scene corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--out", stats_args.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return run_gen(gen_args);
    }
    if (plan->parsed()) {
      return run_plan(plan_args);
    }
    if (eval->parsed()) {
      return run_eval(eval_args);
    }
    if (stats->parsed()) {
      return run_stats(stats_args);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const metrics::MissingPredictionsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    for (const std::string& id : e.sample_ids()) {
      std::cerr << "  missing: " << id << "\n";
    }
    return kExitMissingPredictions;
  } catch (const scene::SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const metrics::EmptyInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEmptyInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
