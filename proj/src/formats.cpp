#include "planeval/formats.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace planeval::scene {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& locus) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw SchemaError(std::string("missing field '") + key + "'", locus);
  }
  return *it;
}

double finite_number(const json& v, const char* what, const std::string& locus) {
  if (!v.is_number()) {
    throw SchemaError(std::string(what) + " must be a number", locus);
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw SchemaError(std::string(what) + " must be finite", locus);
  }
  return d;
}

geom::Vec2 parse_vec2(const json& v, const char* what, const std::string& locus) {
  if (!v.is_array() || v.size() != 2) {
    throw SchemaError(std::string(what) + " must be [x, y]", locus);
  }
  return {finite_number(v[0], what, locus), finite_number(v[1], what, locus)};
}

geom::Pose2D parse_pose(const json& v, const char* what, const std::string& locus) {
  if (!v.is_array() || v.size() != 3) {
    throw SchemaError(std::string(what) + " must be [x, y, yaw]", locus);
  }
  return geom::Pose2D(finite_number(v[0], what, locus), finite_number(v[1], what, locus),
                      finite_number(v[2], what, locus));
}

json pose_json(const geom::Pose2D& p) { return json::array({p.x, p.y, p.yaw}); }

json box_json(const geom::OrientedBox& b) {
  return json::array({b.center().x, b.center().y, b.center().yaw, b.length(), b.width()});
}

geom::OrientedBox parse_box(const json& v, const std::string& locus) {
  if (!v.is_array() || v.size() != 5) {
    throw SchemaError("agent box must be [x, y, yaw, length, width]", locus);
  }
  try {
    return geom::OrientedBox(
        geom::Pose2D(finite_number(v[0], "box.x", locus), finite_number(v[1], "box.y", locus),
                     finite_number(v[2], "box.yaw", locus)),
        finite_number(v[3], "box.length", locus), finite_number(v[4], "box.width", locus));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what(), locus);
  }
}

void check_version(const json& rec, const std::string& locus) {
  const json& v = require(rec, "format_version", locus);
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion) {
    throw SchemaError("unsupported format_version (expected " +
                          std::to_string(kFormatVersion) + ")",
                      locus);
  }
}

Sample parse_sample(const json& rec, const std::string& locus_base) {
  Sample sample;
  sample.sample_id = require(rec, "sample_id", locus_base).get<std::string>();
  const std::string locus = locus_base + " (sample " + sample.sample_id + ")";
  sample.t = finite_number(require(rec, "t", locus), "t", locus);
  sample.ego_pose = parse_pose(require(rec, "ego_pose", locus), "ego_pose", locus);

  const json& status = require(rec, "status", locus);
  sample.status.speed = finite_number(require(status, "speed", locus), "status.speed", locus);
  if (sample.status.speed < 0.0) {
    throw SchemaError("status.speed must be >= 0", locus);
  }
  sample.status.accel = finite_number(require(status, "accel", locus), "status.accel", locus);
  sample.status.yaw_rate =
      finite_number(require(status, "yaw_rate", locus), "status.yaw_rate", locus);
  try {
    sample.status.command =
        command_from_string(require(status, "command", locus).get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what(), locus);
  }

  const json& agents = require(rec, "agents_future", locus);
  if (!agents.is_array() || agents.size() != kFutureSteps) {
    throw SchemaError("agents_future must have exactly " + std::to_string(kFutureSteps) +
                          " step slots",
                      locus);
  }
  for (int i = 0; i < kFutureSteps; ++i) {
    for (const json& a : agents[i]) {
      AgentState state{require(a, "id", locus).get<std::string>(),
                       parse_box(require(a, "box", locus), locus)};
      sample.agents_future[i].push_back(std::move(state));
    }
  }

  sample.valid = require(rec, "valid", locus).get<bool>();
  if (const auto it = rec.find("gt_future"); it != rec.end() && !it->is_null()) {
    if (!it->is_array() || it->size() != kFutureSteps) {
      throw SchemaError("gt_future must have exactly " + std::to_string(kFutureSteps) +
                            " poses",
                        locus);
    }
    std::array<geom::Pose2D, kFutureSteps> future;
    for (int i = 0; i < kFutureSteps; ++i) {
      future[i] = parse_pose((*it)[i], "gt_future pose", locus);
    }
    sample.gt_future = future;
  }
  if (sample.valid && !sample.gt_future.has_value()) {
    throw SchemaError("valid sample without gt_future", locus);
  }
  return sample;
}

json sample_json(const Sample& sample) {
  json rec;
  rec["sample_id"] = sample.sample_id;
  rec["t"] = sample.t;
  rec["ego_pose"] = pose_json(sample.ego_pose);
  rec["status"] = {{"speed", sample.status.speed},
                   {"accel", sample.status.accel},
                   {"yaw_rate", sample.status.yaw_rate},
                   {"command", to_string(sample.status.command)}};
  json agents = json::array();
  for (const auto& slot : sample.agents_future) {
    json slot_json = json::array();
    for (const AgentState& a : slot) {
      slot_json.push_back({{"id", a.agent_id}, {"box", box_json(a.box)}});
    }
    agents.push_back(std::move(slot_json));
  }
  rec["agents_future"] = std::move(agents);
  if (sample.gt_future.has_value()) {
    json gt = json::array();
    for (const geom::Pose2D& p : *sample.gt_future) {
      gt.push_back(pose_json(p));
    }
    rec["gt_future"] = std::move(gt);
  }
  rec["valid"] = sample.valid;
  return rec;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

}  // namespace

Scene scene_from_record(const std::string& line, const std::string& locus) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what(), locus);
  }
  check_version(rec, locus);

  Scene scene;
  scene.scene_id = require(rec, "scene_id", locus).get<std::string>();
  const std::string scene_locus = locus + " (scene " + scene.scene_id + ")";

  for (const json& b : require(rec, "boundaries", scene_locus)) {
    const json& pts = require(b, "points", scene_locus);
    std::vector<geom::Vec2> points;
    points.reserve(pts.size());
    for (const json& p : pts) {
      points.push_back(parse_vec2(p, "boundary point", scene_locus));
    }
    try {
      scene.boundaries.emplace_back(std::move(points));
    } catch (const std::invalid_argument& e) {
      throw SchemaError(e.what(), scene_locus);
    }
    // Boundaries are hard curbs unless marked traversable.
    const auto trav = b.find("traversable");
    scene.boundary_traversable.push_back(trav != b.end() && trav->get<bool>());
  }

  double prev_t = 0.0;
  bool first = true;
  for (const json& s : require(rec, "samples", scene_locus)) {
    Sample sample = parse_sample(s, scene_locus);
    if (!first && std::abs(sample.t - prev_t - kStepSeconds) > 1e-6) {
      throw SchemaError("sample timestamps must advance by " + std::to_string(kStepSeconds) +
                            " s",
                        scene_locus + " (sample " + sample.sample_id + ")");
    }
    prev_t = sample.t;
    first = false;
    scene.samples.push_back(std::move(sample));
  }
  return scene;
}

std::string scene_to_record(const Scene& scene) {
  if (scene.boundaries.size() != scene.boundary_traversable.size()) {
    throw std::logic_error("scene " + scene.scene_id +
                           ": boundary_traversable must parallel boundaries");
  }
  json rec;
  rec["format_version"] = kFormatVersion;
  rec["scene_id"] = scene.scene_id;
  json bounds = json::array();
  for (std::size_t i = 0; i < scene.boundaries.size(); ++i) {
    json pts = json::array();
    for (const geom::Vec2 p : scene.boundaries[i].points) {
      pts.push_back(json::array({p.x, p.y}));
    }
    bounds.push_back(
        {{"points", std::move(pts)}, {"traversable", bool(scene.boundary_traversable[i])}});
  }
  rec["boundaries"] = std::move(bounds);
  json samples = json::array();
  for (const Sample& s : scene.samples) {
    samples.push_back(sample_json(s));
  }
  rec["samples"] = std::move(samples);
  return rec.dump();
}

std::vector<Scene> load_scenes(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<Scene> scenes;
  std::set<std::string> seen_samples;
  std::set<std::string> seen_scenes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const std::string locus = path.string() + ":" + std::to_string(line_no);
    Scene scene = scene_from_record(line, locus);
    if (!seen_scenes.insert(scene.scene_id).second) {
      throw SchemaError("duplicate scene_id " + scene.scene_id, locus);
    }
    for (const Sample& s : scene.samples) {
      if (!seen_samples.insert(s.sample_id).second) {
        throw SchemaError("duplicate sample_id " + s.sample_id, locus);
      }
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

void save_scenes(std::span<const Scene> scenes, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (const Scene& scene : scenes) {
    out << scene_to_record(scene) << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

PredictionMap load_predictions(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  PredictionMap predictions;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    const std::string locus = path.string() + ":" + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("invalid JSON: ") + e.what(), locus);
    }
    check_version(rec, locus);
    const std::string sample_id = require(rec, "sample_id", locus).get<std::string>();
    const std::string rec_locus = locus + " (prediction " + sample_id + ")";
    const json& wps = require(rec, "waypoints", rec_locus);
    if (!wps.is_array() || wps.size() != kFutureSteps) {
      throw SchemaError("prediction must have exactly " + std::to_string(kFutureSteps) +
                            " waypoints, got " + std::to_string(wps.size()),
                        rec_locus);
    }
    Trajectory traj;
    for (int i = 0; i < kFutureSteps; ++i) {
      traj.waypoints[i] = parse_vec2(wps[i], "waypoint", rec_locus);
    }
    if (!predictions.emplace(sample_id, traj).second) {
      throw SchemaError("duplicate sample_id " + sample_id, rec_locus);
    }
  }
  return predictions;
}

void save_predictions(const PredictionMap& predictions, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (const auto& [sample_id, traj] : predictions) {
    json rec;
    rec["format_version"] = kFormatVersion;
    rec["sample_id"] = sample_id;
    json wps = json::array();
    for (const geom::Vec2 w : traj.waypoints) {
      wps.push_back(json::array({w.x, w.y}));
    }
    rec["waypoints"] = std::move(wps);
    out << rec.dump() << '\n';
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace planeval::scene
