#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/attribution.hpp"
#include "mtgender/ingestion.hpp"

namespace mtg {

enum class RemovalReason { kReferent, kEos, kPunct, kStopword };

std::string_view to_string(RemovalReason reason);

struct RemovedWord {
  std::string word;
  int position = 0;
  RemovalReason reason = RemovalReason::kEos;
  double score = 0.0;
};

// Position used for tokenizer specials ("</s>", "<pad>", ...) that belong to
// no source word.
inline constexpr int kSpecialTokenPosition = -1;

// Word-level scores for one sentence, highest first; ties go to the earlier
// source position.
struct WordScoreList {
  std::string sentence_id;
  std::vector<TokenAttribution> entries;
  std::vector<RemovedWord> removed;

  // Sum of normalized scores of the surviving entries.
  double total() const;
};

void sort_entries(std::vector<TokenAttribution>& entries);

// Source scores scaled to sum to 1. Throws AllZeroScores.
AttributionResult normalize(AttributionResult result);

bool is_special_token(std::string_view token);

// Strips "▁" word-start markers, "##" continuation prefixes and "@@"
// continuation suffixes.
std::string strip_subword_markers(std::string_view token);

// Sums the scores of the model tokens making up each whitespace word.
// Specials become entries at kSpecialTokenPosition. "<unk>" matches one or
// more characters. Throws AlignmentError if the tokens do not spell out the
// source words.
WordScoreList merge_subwords(const AttributionResult& result, std::string_view source_text);

// Drops the referent (by position), specials, punctuation-only words and
// stopwords. Surviving scores are not renormalized.
WordScoreList filter_words(WordScoreList words, const SentencePair& pair, const CorpusConfig& config);

// normalize -> merge -> filter.
WordScoreList prepare_word_scores(const AttributionResult& result, const SentencePair& pair,
                                  const CorpusConfig& config);

// word,position,score,removed_reason; surviving entries first.
void write_word_scores_csv(std::ostream& out, const WordScoreList& words);

}  // namespace mtg
