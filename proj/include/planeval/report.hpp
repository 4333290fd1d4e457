#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"
#include "planeval/metrics.hpp"

namespace planeval::report {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t value);

/// Canonical JSON of the metric-relevant configuration. Execution details
/// such as the worker count are excluded so they cannot change report bytes.
nlohmann::json config_json(const metrics::EvalConfig& config);
std::string config_hash(const metrics::EvalConfig& config);

nlohmann::json horizon_json(const metrics::HorizonMetrics& h);
nlohmann::json table_json(const metrics::MetricTable& table);

/// Machine-readable report with provenance (tool version + config hash).
nlohmann::json report_json(const metrics::BenchmarkReport& report,
                           const metrics::EvalConfig& config, const std::string& method);

/// Benchmark-style tables: overall, command splits, smoothness.
std::string report_markdown(const metrics::BenchmarkReport& report,
                            const metrics::EvalConfig& config, const std::string& method);

/// One verdict record per line.
std::string verdicts_ndjson(std::span<const metrics::SampleVerdict> verdicts);

nlohmann::json stats_json(const metrics::DatasetStats& stats);

/// Heatmap counts as a plain space-separated matrix for external plotting.
std::string heatmap_matrix(const metrics::DatasetStats& stats);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace planeval::report
