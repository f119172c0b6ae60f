#pragma once

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mtg {

// Binary grammatical gender of a rendered referent.
enum class Gender { kMasculine, kFeminine };

// Gender an annotator perceived for the referent.
enum class PerceivedGender { kMasculine, kFeminine, kOther };

std::string_view to_string(Gender gender);
std::string_view to_string(PerceivedGender gender);
std::optional<Gender> parse_gender(std::string_view text);
std::optional<PerceivedGender> parse_perceived_gender(std::string_view text);

// The source word denoting the human referent. Offsets are Unicode code point
// indices into the source text, half-open.
struct ReferentSpan {
  std::string surface;
  int word_index = 0;
  int char_start = 0;
  int char_end = 0;

  bool operator==(const ReferentSpan&) const = default;
};

struct SentencePair {
  std::string id;
  std::string source_text;
  std::vector<std::string> source_tokens;
  ReferentSpan referent;
  std::string mt_translation;
  std::string contrastive_translation;
  Gender mt_gender = Gender::kMasculine;
  Gender contrastive_gender = Gender::kFeminine;
  // Optional claim, carried by some corpora, of how many target tokens the two
  // translations share before the contrast point.
  std::optional<int> claimed_prefix_length;

  bool operator==(const SentencePair&) const = default;
};

// Builds a pair, tokenizing the source on whitespace, and checks every pair
// invariant. Throws InvariantViolation naming the broken rule.
SentencePair make_sentence_pair(std::string id, std::string source_text, ReferentSpan referent,
                                std::string mt_translation, std::string contrastive_translation,
                                Gender mt_gender, Gender contrastive_gender,
                                std::optional<int> claimed_prefix_length = std::nullopt);

void check_invariants(const SentencePair& pair);

// Splits on ASCII whitespace; never yields empty tokens.
std::vector<std::string> whitespace_tokenize(std::string_view text);

// Half-open code point range.
struct CharSpan {
  int begin = 0;
  int end = 0;

  bool operator==(const CharSpan&) const = default;
};

// Code point spans of the whitespace tokens, parallel to whitespace_tokenize.
std::vector<CharSpan> whitespace_token_spans(std::string_view text);

// First point at which the original and contrastive target token sequences
// diverge.
struct ContrastPoint {
  std::vector<std::string> shared_prefix;
  std::string original_token;
  std::string contrastive_token;
  int target_position = 0;

  bool operator==(const ContrastPoint&) const = default;
};

// A model-tokenizer unit or a merged source word with its saliency.
struct TokenAttribution {
  std::string token;
  int source_position = 0;
  double raw_score = 0.0;
  double normalized_score = 0.0;

  bool operator==(const TokenAttribution&) const = default;
};

// A word of a source sentence, identified by its whitespace-token position.
struct WordRef {
  std::string word;
  int position = 0;

  bool operator==(const WordRef& other) const = default;
  std::strong_ordering operator<=>(const WordRef& other) const {
    if (auto c = position <=> other.position; c != 0) return c;
    return word.compare(other.word) <=> 0;
  }
};

// Which human annotations count: every annotated word, or only words marked
// by at least two annotators.
enum class AnnotationMode { kAll, kMinTwoAgree };

std::string_view to_string(AnnotationMode mode);
std::optional<AnnotationMode> parse_annotation_mode(std::string_view text);

// How a per-token gradient becomes one saliency number.
enum class SaliencyMethod { kGradientL2, kGradientTimesInput };

std::string_view to_string(SaliencyMethod method);
std::optional<SaliencyMethod> parse_saliency_method(std::string_view text);

enum class Approach { kTopPercent = 1, kTopOne = 2, kMinScore = 3, kCumulativeBudget = 4 };

std::string_view to_string(Approach approach);
std::optional<Approach> approach_from_number(int number);

// Words chosen by one approach at one parameter value, in rank order.
struct SalientSelection {
  std::string sentence_id;
  Approach approach = Approach::kTopPercent;
  double parameter = 0.0;
  std::vector<WordRef> words;

  std::set<WordRef> word_set() const { return {words.begin(), words.end()}; }
  bool contains_position(int position) const;
};

struct AnnotatorEntry {
  std::string annotator_id;
  std::set<WordRef> words;
  std::optional<PerceivedGender> perceived_gender;
};

struct AnnotationSet {
  std::string sentence_id;
  std::vector<AnnotatorEntry> annotations;
};

}  // namespace mtg
