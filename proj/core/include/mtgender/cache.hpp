#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "mtgender/attribution.hpp"

namespace mtg {

// Sentence ids become file names; anything outside [A-Za-z0-9._-] is
// percent-escaped, as is a leading dot.
std::string sentence_file_stem(std::string_view sentence_id);

std::string backend_hash(std::string_view name, std::string_view version);

std::string attribution_to_json(const AttributionResult& result, std::string_view content_key = {});
// Throws SchemaError.
AttributionResult attribution_from_json(std::string_view text, std::string* content_key = nullptr);

// Per-sentence attribution results under <root>/<backend_hash>/<sentence_id>.json.
// Each entry records a content key over everything that determines it (the
// backend, sentence id, source, both translations, saliency method); a key
// mismatch is treated as a miss.
class AttributionCache {
 public:
  AttributionCache(std::filesystem::path root, std::string backend_hash);

  const std::filesystem::path& directory() const { return directory_; }
  std::filesystem::path entry_path(std::string_view sentence_id) const;
  std::string content_key(const SentencePair& pair, SaliencyMethod method) const;

  std::optional<AttributionResult> load(const SentencePair& pair, SaliencyMethod method) const;
  // Throws MissingAttribution when the entry is absent or stale.
  AttributionResult require(const SentencePair& pair, SaliencyMethod method) const;
  void store(const SentencePair& pair, SaliencyMethod method, const AttributionResult& result) const;

 private:
  std::filesystem::path directory_;
  std::string backend_hash_;
};

}  // namespace mtg
