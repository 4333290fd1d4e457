#include "planeval/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "planeval/version.hpp"

namespace planeval::report {

namespace {

using nlohmann::json;

const char* l2_mode_name(metrics::L2Mode mode) {
  return mode == metrics::L2Mode::kCumulative ? "cumulative" : "endpoint";
}

const char* backend_name(metrics::CollisionBackend backend) {
  return backend == metrics::CollisionBackend::kRaster ? "raster" : "exact";
}

const char* yaw_mode_name(metrics::YawMode mode) {
  return mode == metrics::YawMode::kEstimated ? "estimated" : "fixed";
}

std::string fmt2(double v) {
  if (std::isnan(v)) {
    return "n/a";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void append_horizons(std::string& row, const metrics::HorizonMetrics& h) {
  row += " " + fmt2(h.at_1s) + " | " + fmt2(h.at_2s) + " | " + fmt2(h.at_3s) + " | " +
         fmt2(h.avg) + " |";
}

json optional_horizons(const std::optional<metrics::HorizonMetrics>& h) {
  return h.has_value() ? horizon_json(*h) : json(nullptr);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

json config_json(const metrics::EvalConfig& config) {
  json j;
  j["grid_resolution"] = config.grid_resolution;
  j["grid_half_extent"] = config.grid_half_extent;
  j["ego_length"] = config.ego_dims.length;
  j["ego_width"] = config.ego_dims.width;
  j["l2_mode"] = l2_mode_name(config.l2_mode);
  j["backend"] = backend_name(config.backend);
  j["yaw_mode"] = yaw_mode_name(config.yaw_mode);
  j["strict_missing"] = config.strict_missing;
  j["derive_commands"] = config.derive_commands;
  j["command_threshold"] = config.command_threshold;
  return j;
}

std::string config_hash(const metrics::EvalConfig& config) {
  return hex64(fnv1a64(config_json(config).dump()));
}

json horizon_json(const metrics::HorizonMetrics& h) {
  const auto value = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
  return {{"1s", value(h.at_1s)}, {"2s", value(h.at_2s)}, {"3s", value(h.at_3s)},
          {"avg", value(h.avg)}};
}

json table_json(const metrics::MetricTable& table) {
  return {{"l2_m", horizon_json(table.l2)},
          {"collision_pct", horizon_json(table.collision)},
          {"collision_legacy_pct", horizon_json(table.collision_legacy)},
          {"ccr_pct", horizon_json(table.ccr)},
          {"count", table.count}};
}

json report_json(const metrics::BenchmarkReport& report, const metrics::EvalConfig& config,
                 const std::string& method) {
  json j;
  j["tool"] = std::string(kToolName);
  j["version"] = std::string(kToolVersion);
  j["config"] = config_json(config);
  j["config_hash"] = config_hash(config);
  j["method"] = method;
  j["counts"] = {{"samples", report.sample_count},
                 {"valid", report.valid_count},
                 {"evaluated", report.evaluated_count},
                 {"missing", report.missing_count}};
  j["overall"] = table_json(report.overall);
  j["by_command"] = {{"st", table_json(report.straight)}, {"lr", table_json(report.turn)}};
  j["sigma_wd_m2"] = optional_horizons(report.sigma_wd);
  return j;
}

std::string report_markdown(const metrics::BenchmarkReport& report,
                            const metrics::EvalConfig& config, const std::string& method) {
  std::ostringstream out;
  out << "# Open-loop planning report\n\n";
  out << "- method: " << method << "\n";
  out << "- samples: " << report.sample_count << " (" << report.valid_count << " valid, "
      << report.evaluated_count << " evaluated, " << report.missing_count << " missing)\n\n";

  const auto row = [&](const std::string& name, const metrics::MetricTable& t) {
    std::string r = "| " + name + " |";
    append_horizons(r, t.l2);
    append_horizons(r, t.collision);
    append_horizons(r, t.ccr);
    return r + "\n";
  };

  out << "## Overall\n\n";
  out << "| Method | L2 (m) 1s | 2s | 3s | Avg. | Collision (%) 1s | 2s | 3s | Avg. "
         "| CCR (%) 1s | 2s | 3s | Avg. |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
  out << row(method, report.overall);
  out << "\n";

  out << "Legacy per-step collision rate (%): " << fmt2(report.overall.collision_legacy.at_1s)
      << " / " << fmt2(report.overall.collision_legacy.at_2s) << " / "
      << fmt2(report.overall.collision_legacy.at_3s) << " / "
      << fmt2(report.overall.collision_legacy.avg) << " (1s/2s/3s/Avg.)\n\n";

  const auto split_table = [&](const std::string& title, const std::string& unit,
                               auto member) {
    out << "## " << title << " by driving command\n\n";
    out << "| Method | " << title << " " << unit << " 1s | 2s | 3s | Avg. | " << title
        << "-ST 1s | 2s | 3s | Avg. | " << title << "-LR 1s | 2s | 3s | Avg. |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    std::string r = "| " + method + " |";
    append_horizons(r, report.overall.*member);
    append_horizons(r, report.straight.*member);
    append_horizons(r, report.turn.*member);
    out << r << "\n\n";
  };
  split_table("L2", "(m)", &metrics::MetricTable::l2);
  split_table("Collision", "(%)", &metrics::MetricTable::collision);
  split_table("CCR", "(%)", &metrics::MetricTable::ccr);
  out << "ST samples: " << report.straight.count << ", LR samples: " << report.turn.count
      << "\n\n";

  out << "## Smoothness\n\n";
  out << "| Method | sigma_wd (m^2) 1s | 2s | 3s | Avg. |\n";
  out << "|---|---|---|---|---|\n";
  if (report.sigma_wd.has_value()) {
    std::string r = "| " + method + " |";
    append_horizons(r, *report.sigma_wd);
    out << r << "\n";
  } else {
    out << "| " << method << " | n/a | n/a | n/a | n/a |\n";
  }
  out << "\n";
  out << "---\n";
  out << std::string(kToolName) << " " << std::string(kToolVersion) << ", config "
      << config_hash(config) << "\n";
  return out.str();
}

std::string verdicts_ndjson(std::span<const metrics::SampleVerdict> verdicts) {
  std::ostringstream out;
  for (const metrics::SampleVerdict& v : verdicts) {
    json j;
    j["sample_id"] = v.sample_id;
    j["command"] = scene::to_string(v.command);
    j["l2"] = v.l2;
    j["coll_legacy"] = v.coll_legacy;
    j["coll"] = v.coll;
    j["ccr"] = v.ccr;
    j["steps_hit_agent"] = v.steps_hit_agent;
    j["steps_hit_curb"] = v.steps_hit_curb;
    out << j.dump() << '\n';
  }
  return out.str();
}

json stats_json(const metrics::DatasetStats& stats) {
  json j;
  j["tool"] = std::string(kToolName);
  j["version"] = std::string(kToolVersion);
  const json params = {{"heatmap_resolution", stats.heatmap_resolution},
                       {"command_threshold", scene::kCommandThreshold}};
  j["config"] = params;
  j["config_hash"] = hex64(fnv1a64(params.dump()));
  j["straight_fraction"] = stats.straight_fraction;
  j["turn_fraction"] = stats.turn_fraction;
  j["valid_count"] = stats.valid_count;
  j["heatmap"] = {{"origin", {stats.heatmap_origin.x, stats.heatmap_origin.y}},
                  {"resolution", stats.heatmap_resolution},
                  {"rows", stats.heatmap_rows},
                  {"cols", stats.heatmap_cols}};
  return j;
}

std::string heatmap_matrix(const metrics::DatasetStats& stats) {
  std::ostringstream out;
  for (int r = 0; r < stats.heatmap_rows; ++r) {
    for (int c = 0; c < stats.heatmap_cols; ++c) {
      if (c > 0) {
        out << ' ';
      }
      out << stats.heatmap[static_cast<std::size_t>(r) * stats.heatmap_cols + c];
    }
    out << '\n';
  }
  return out.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  if (!out) {
    throw std::runtime_error("write failed: " + path.string());
  }
}

}  // namespace planeval::report
