#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mtgender/pipeline.hpp"

namespace mtg {

// File names written by write_analysis().
inline constexpr const char* kOverlapCsv = "overlap.csv";
inline constexpr const char* kSweepSummaryCsv = "sweep_summary.csv";
inline constexpr const char* kSweepsCsv = "sweeps.csv";
inline constexpr const char* kPosCsv = "pos.csv";
inline constexpr const char* kDistanceCsv = "distance.csv";
inline constexpr const char* kOutliersCsv = "outliers.csv";
inline constexpr const char* kSummaryMd = "summary.md";

// Percentages are written with two decimals, the precision of published
// overlap figures; parameters use the shortest round-trip form.
std::string format_percent(double value);
std::string format_parameter(double value);

// Writes the analysis CSVs; returns the paths written.
std::vector<std::filesystem::path> write_analysis(const AnalysisOutcome& analysis,
                                                  const std::filesystem::path& out_dir);

enum class ReportFormat { kSvg, kCsvOnly };

// Reads the analysis CSVs in out_dir and renders summary.md plus, for kSvg,
// sweeps.svg, modes.svg, pos.svg and distance.svg. Every number in
// summary.md is copied from a CSV cell and each table row names its source
// as file:line. Throws SchemaError if a CSV is missing.
std::vector<std::filesystem::path> write_report(const std::filesystem::path& out_dir, ReportFormat format);

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string corpus_hash;
  std::string backend_id;
  std::string backend_version;
  std::string timestamp;  // ISO 8601 UTC
  std::vector<std::string> outputs;
};

std::string hash_file(const std::filesystem::path& path);
std::string utc_timestamp();
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

}  // namespace mtg
