#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtgender/backend.hpp"
#include "mtgender/cache.hpp"
#include "mtgender/ingestion.hpp"
#include "mtgender/linguistics.hpp"
#include "mtgender/overlap.hpp"
#include "mtgender/postprocess.hpp"
#include "mtgender/thresholding.hpp"

namespace mtg {

struct AttributeOptions {
  BackendFactory factory;
  // Name and version of the backends the factory makes; keys the cache.
  std::string backend_name;
  std::string backend_version;
  std::optional<std::filesystem::path> cache_dir;  // nullopt disables caching
  // Per-sentence CSVs go to <dump_dir>/<id>.csv when set.
  std::optional<std::filesystem::path> dump_dir;
  int jobs = 1;
  // Strict: any rejected pair fails the run. Lenient: it is skipped.
  bool strict = true;
};

struct AttributeOutcome {
  std::vector<AttributionResult> attributions;  // corpus order, skipped pairs absent
  std::vector<WordScoreList> word_scores;       // parallel to attributions
  int computed = 0;
  int from_cache = 0;
  std::vector<std::string> skipped;             // "id: reason"
};

// Attributes every pair (from cache where possible), fanning cache misses out
// to `jobs` workers with one backend each, then post-processes in corpus
// order.
AttributeOutcome run_attribute(const std::vector<SentencePair>& corpus, const CorpusConfig& config,
                               const AttributeOptions& options);

// Rebuilds word scores from cached attributions only. Throws
// MissingAttribution (strict) or skips the sentence (lenient).
std::vector<WordScoreList> load_word_scores(const std::vector<SentencePair>& corpus, const CorpusConfig& config,
                                            const AttributionCache& cache, bool strict,
                                            std::vector<std::string>* skipped = nullptr);

struct AnalyzeOptions {
  std::vector<Approach> approaches = {Approach::kTopPercent, Approach::kTopOne, Approach::kMinScore,
                                      Approach::kCumulativeBudget};
  // Replaces the configured grid of every selected approach except approach 2.
  std::optional<std::vector<double>> grid;
  std::vector<AnnotationMode> modes = {AnnotationMode::kAll, AnnotationMode::kMinTwoAgree};
};

struct ConfigurationAnalysis {
  Approach approach = Approach::kTopPercent;
  double parameter = 0.0;
  std::vector<SalientSelection> selections;  // corpus order
  std::vector<OverlapReport> overlaps;       // one per mode
  std::map<std::string, PosShare> pos;       // empty without parses
  DistanceDistribution distances;
  std::vector<Outlier> outliers;
};

struct SweepSummaryRow {
  Approach approach = Approach::kTopPercent;
  AnnotationMode mode = AnnotationMode::kAll;
  std::size_t grid_size = 0;
  SweepStatistics stats;
};

struct AnalysisOutcome {
  std::vector<ConfigurationAnalysis> configurations;
  std::vector<SweepSummaryRow> sweep_summary;
  bool has_parses = false;
};

AnalysisOutcome run_analyze(const std::vector<SentencePair>& corpus, const CorpusConfig& config,
                            const std::vector<WordScoreList>& word_scores,
                            const std::map<std::string, AnnotationSet>& annotations, const ParseMap* parses,
                            const AnalyzeOptions& options);

// Parses every sentence through the backend; throws MissingParse.
ParseMap parse_all(ParseBackend& backend, const std::vector<SentencePair>& corpus);

}  // namespace mtg
