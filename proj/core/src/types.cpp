#include "mtgender/types.hpp"

#include <algorithm>
#include <cstdio>

#include "mtgender/errors.hpp"
#include "mtgender/hashing.hpp"
#include "mtgender/unicode.hpp"

namespace mtg {

SchemaError::SchemaError(const std::string& message, std::size_t line)
    : Error(line == 0 ? message : "line " + std::to_string(line) + ": " + message), line_(line) {}

InvariantViolation::InvariantViolation(std::string invariant, std::string sentence_id)
    : Error("invariant violated for sentence '" + sentence_id + "': " + invariant),
      invariant_(std::move(invariant)),
      sentence_id_(std::move(sentence_id)) {}

MissingAttribution::MissingAttribution(std::string sentence_id, const std::string& detail)
    : Error("missing attribution for sentence '" + sentence_id + "'" +
            (detail.empty() ? std::string() : ": " + detail)),
      sentence_id_(std::move(sentence_id)) {}

std::string to_hex(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string StableHasher::hex() const { return to_hex(hash_); }

std::string_view to_string(Gender gender) {
  return gender == Gender::kMasculine ? "masculine" : "feminine";
}

std::string_view to_string(PerceivedGender gender) {
  switch (gender) {
    case PerceivedGender::kMasculine: return "masculine";
    case PerceivedGender::kFeminine: return "feminine";
    case PerceivedGender::kOther: return "other";
  }
  return "other";
}

std::optional<Gender> parse_gender(std::string_view text) {
  const auto lower = unicode::ascii_lower(text);
  if (lower == "masculine" || lower == "m") return Gender::kMasculine;
  if (lower == "feminine" || lower == "f") return Gender::kFeminine;
  return std::nullopt;
}

std::optional<PerceivedGender> parse_perceived_gender(std::string_view text) {
  const auto lower = unicode::ascii_lower(text);
  if (lower == "masculine" || lower == "m") return PerceivedGender::kMasculine;
  if (lower == "feminine" || lower == "f") return PerceivedGender::kFeminine;
  if (lower == "other" || lower == "o" || lower == "non-binary" || lower == "nonbinary") {
    return PerceivedGender::kOther;
  }
  return std::nullopt;
}

std::string_view to_string(AnnotationMode mode) {
  return mode == AnnotationMode::kAll ? "all" : "min2";
}

std::optional<AnnotationMode> parse_annotation_mode(std::string_view text) {
  const auto lower = unicode::ascii_lower(text);
  if (lower == "all" || lower == "all_annotations") return AnnotationMode::kAll;
  if (lower == "min2" || lower == "min_two_agree") return AnnotationMode::kMinTwoAgree;
  return std::nullopt;
}

std::string_view to_string(SaliencyMethod method) {
  return method == SaliencyMethod::kGradientL2 ? "l2" : "grad_x_input";
}

std::optional<SaliencyMethod> parse_saliency_method(std::string_view text) {
  const auto lower = unicode::ascii_lower(text);
  if (lower == "l2" || lower == "saliency") return SaliencyMethod::kGradientL2;
  if (lower == "grad_x_input" || lower == "input_x_gradient") return SaliencyMethod::kGradientTimesInput;
  return std::nullopt;
}

std::string_view to_string(Approach approach) {
  switch (approach) {
    case Approach::kTopPercent: return "TOP_PERCENT";
    case Approach::kTopOne: return "TOP_ONE";
    case Approach::kMinScore: return "MIN_SCORE";
    case Approach::kCumulativeBudget: return "CUMULATIVE_BUDGET";
  }
  return "UNKNOWN";
}

std::optional<Approach> approach_from_number(int number) {
  if (number < 1 || number > 4) return std::nullopt;
  return static_cast<Approach>(number);
}

bool SalientSelection::contains_position(int position) const {
  return std::any_of(words.begin(), words.end(),
                     [position](const WordRef& w) { return w.position == position; });
}

std::vector<std::string> whitespace_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.emplace_back(text.substr(start, i - start));
  }
  return tokens;
}

std::vector<CharSpan> whitespace_token_spans(std::string_view text) {
  const auto decoded = unicode::decode_utf8(text);
  std::vector<CharSpan> spans;
  auto is_space = [](char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
  };
  const int n = static_cast<int>(decoded.size());
  int i = 0;
  while (i < n) {
    while (i < n && is_space(decoded[static_cast<std::size_t>(i)])) ++i;
    const int start = i;
    while (i < n && !is_space(decoded[static_cast<std::size_t>(i)])) ++i;
    if (i > start) spans.push_back({start, i});
  }
  return spans;
}

void check_invariants(const SentencePair& pair) {
  if (pair.id.empty()) throw InvariantViolation("id must be non-empty", pair.id);
  if (pair.source_tokens != whitespace_tokenize(pair.source_text)) {
    throw InvariantViolation("source_tokens must be the whitespace tokenization of source", pair.id);
  }
  if (pair.mt_gender == pair.contrastive_gender) {
    throw InvariantViolation("mt_gender must differ from contrastive_gender", pair.id);
  }
  if (pair.mt_translation == pair.contrastive_translation) {
    throw InvariantViolation("mt_translation must differ from contrastive_translation", pair.id);
  }
  const auto& ref = pair.referent;
  if (ref.word_index < 0 || ref.word_index >= static_cast<int>(pair.source_tokens.size())) {
    throw InvariantViolation("referent.word_index must address a source token", pair.id);
  }
  const auto source_len = static_cast<int>(unicode::length(pair.source_text));
  if (ref.char_start < 0 || ref.char_end > source_len || ref.char_start >= ref.char_end) {
    throw InvariantViolation("referent char offsets out of range", pair.id);
  }
  if (unicode::substr(pair.source_text, ref.char_start, ref.char_end) != ref.surface) {
    throw InvariantViolation("source_text[char_start:char_end] must equal referent.surface", pair.id);
  }
  const auto spans = whitespace_token_spans(pair.source_text);
  const auto& token_span = spans[static_cast<std::size_t>(ref.word_index)];
  if (ref.char_start < token_span.begin || ref.char_end > token_span.end) {
    throw InvariantViolation("referent char span must lie inside source_tokens[word_index]", pair.id);
  }
  if (pair.claimed_prefix_length && *pair.claimed_prefix_length < 0) {
    throw InvariantViolation("claimed prefix length must be non-negative", pair.id);
  }
}

SentencePair make_sentence_pair(std::string id, std::string source_text, ReferentSpan referent,
                                std::string mt_translation, std::string contrastive_translation,
                                Gender mt_gender, Gender contrastive_gender,
                                std::optional<int> claimed_prefix_length) {
  SentencePair pair;
  pair.id = std::move(id);
  pair.source_tokens = whitespace_tokenize(source_text);
  pair.source_text = std::move(source_text);
  pair.referent = std::move(referent);
  pair.mt_translation = std::move(mt_translation);
  pair.contrastive_translation = std::move(contrastive_translation);
  pair.mt_gender = mt_gender;
  pair.contrastive_gender = contrastive_gender;
  pair.claimed_prefix_length = claimed_prefix_length;
  check_invariants(pair);
  return pair;
}

}  // namespace mtg
