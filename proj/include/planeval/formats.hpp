#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "planeval/scene.hpp"

namespace planeval::scene {

/// Version stamped into every record of the interchange files.
inline constexpr int kFormatVersion = 1;

/// A record failed validation. `locus` names the offending file, line and
/// record id so corpora can be fixed by hand.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& message, std::string locus)
      : std::runtime_error(locus.empty() ? message : locus + ": " + message),
        locus_(std::move(locus)) {}

  const std::string& locus() const { return locus_; }

 private:
  std::string locus_;
};

using PredictionMap = std::map<std::string, Trajectory>;

/// `.scenes` corpus: one scene per line, JSON records. Unknown fields are
/// ignored. Throws SchemaError on malformed records and std::runtime_error
/// on I/O failure.
std::vector<Scene> load_scenes(const std::filesystem::path& path);
void save_scenes(std::span<const Scene> scenes, const std::filesystem::path& path);

/// `.preds` file: one prediction per line keyed by sample_id. A record must
/// carry exactly kFutureSteps waypoints; duplicate ids are rejected.
PredictionMap load_predictions(const std::filesystem::path& path);
void save_predictions(const PredictionMap& predictions, const std::filesystem::path& path);

/// Single-record codecs used by the loaders and by round-trip tests.
std::string scene_to_record(const Scene& scene);
Scene scene_from_record(const std::string& line, const std::string& locus);

}  // namespace planeval::scene
