#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/types.hpp"

namespace mtg {

enum class PunctuationPolicy { kUnicodePunctClass };

struct SweepGrids {
  std::vector<double> top_percent;        // approach 1, percent of words
  std::vector<double> min_score;          // approach 3, absolute score
  std::vector<double> cumulative_budget;  // approach 4, percent of total score
};

struct CorpusConfig {
  std::set<std::string> stopwords;
  PunctuationPolicy punctuation_policy = PunctuationPolicy::kUnicodePunctClass;
  SweepGrids grids;
  AnnotationMode annotation_mode_default = AnnotationMode::kAll;
  SaliencyMethod saliency_method = SaliencyMethod::kGradientL2;

  // Case-insensitive.
  bool is_stopword(std::string_view word) const;
  bool is_punctuation(std::string_view word) const;
  // Approach 2 has the single pseudo-parameter 1 (one word).
  std::vector<double> grid(Approach approach) const;
};

// Articles and demonstrative determiners, including the empty string.
const std::set<std::string>& baseline_stopwords();

CorpusConfig default_config();

// Parses a JSON config object; absent keys take defaults. Throws SchemaError.
CorpusConfig parse_config(std::string_view json_text);
CorpusConfig load_config(const std::filesystem::path& path);

// One sentence per line; see README for the schema. Throws SchemaError
// (with line number) or InvariantViolation.
std::vector<SentencePair> parse_corpus(std::istream& in);
std::vector<SentencePair> load_corpus(const std::filesystem::path& path);

struct CorpusStats {
  int sentences = 0;
  int unique_referents = 0;
  double mean_words = 0.0;
  double std_words = 0.0;  // population standard deviation
  double masculine_pct = 0.0;
  double feminine_pct = 0.0;
};

CorpusStats corpus_stats(std::span<const SentencePair> pairs);

// Annotation words that are stopwords or punctuation are dropped at load
// time; annotators who marked nothing keep an empty entry. Throws
// UnknownSentence, PositionOutOfRange, SchemaError or InvariantViolation.
std::map<std::string, AnnotationSet> parse_annotations(std::istream& in,
                                                       std::span<const SentencePair> corpus,
                                                       const CorpusConfig& config = default_config());
std::map<std::string, AnnotationSet> load_annotations(const std::filesystem::path& path,
                                                      std::span<const SentencePair> corpus,
                                                      const CorpusConfig& config = default_config());

}  // namespace mtg
