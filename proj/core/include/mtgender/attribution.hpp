#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/backend.hpp"
#include "mtgender/types.hpp"

namespace mtg {

struct AttributionResult {
  std::string sentence_id;
  ContrastPoint contrast;
  // Model-tokenizer granularity, raw scores; normalized_score is filled in by
  // normalize().
  std::vector<TokenAttribution> source_scores;
  // Kept for diagnostics, never analysed.
  std::vector<TokenAttribution> target_prefix_scores;

  bool operator==(const AttributionResult&) const = default;
};

double l2_norm(std::span<const double> values);

// Saliency of each source token for choosing contrast.original_token over
// contrast.contrastive_token after the shared prefix.
AttributionResult attribute_contrast(ModelBackend& backend, const SentencePair& pair,
                                     SaliencyMethod method = SaliencyMethod::kGradientL2);

// Maps German referent forms (and other gendered words) to a gender.
class GenderLexicon {
 public:
  void add(std::string form, Gender gender);
  std::optional<Gender> lookup(std::string_view word) const;
  // Gender of the first lexicon word in the text, ignoring surrounding
  // punctuation. Throws GenderUndetermined when no word is listed.
  Gender classify(std::string_view text) const;
  bool empty() const { return forms_.empty(); }

  // JSON object {"Berater": "masculine", "Beraterin": "feminine", ...}.
  static GenderLexicon load(const std::filesystem::path& path);
  static GenderLexicon parse(std::string_view json_text);

 private:
  std::map<std::string, Gender, std::less<>> forms_;
};

struct Translation {
  std::string text;
  Gender gender = Gender::kMasculine;
};

Translation translate(ModelBackend& backend, std::string_view source, const GenderLexicon& lexicon);

}  // namespace mtg
