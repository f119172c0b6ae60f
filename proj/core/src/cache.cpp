#include "mtgender/cache.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtgender/errors.hpp"
#include "mtgender/hashing.hpp"

namespace mtg {
namespace {

using nlohmann::json;

json scores_to_json(const std::vector<TokenAttribution>& scores) {
  json arr = json::array();
  for (const auto& s : scores) {
    arr.push_back({{"token", s.token}, {"position", s.source_position}, {"raw", s.raw_score}});
  }
  return arr;
}

std::vector<TokenAttribution> scores_from_json(const json& arr) {
  std::vector<TokenAttribution> out;
  for (const auto& s : arr) {
    out.push_back({s.at("token").get<std::string>(), s.at("position").get<int>(), s.at("raw").get<double>(), 0.0});
  }
  return out;
}

}  // namespace

std::string sentence_file_stem(std::string_view id) {
  std::string out;
  for (unsigned char c : id) {
    const bool plain = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                       c == '_' || (c == '.' && !out.empty());
    if (plain) {
      out.push_back(static_cast<char>(c));
    } else {
      static constexpr char kHex[] = "0123456789ABCDEF";
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out;
}


std::string backend_hash(std::string_view name, std::string_view version) {
  return StableHasher().add(name).add(version).hex();
}

std::string attribution_to_json(const AttributionResult& result, std::string_view content_key) {
  json obj;
  obj["sentence_id"] = result.sentence_id;
  obj["content_key"] = content_key;
  obj["contrast"] = {{"shared_prefix", result.contrast.shared_prefix},
                     {"original_token", result.contrast.original_token},
                     {"contrastive_token", result.contrast.contrastive_token},
                     {"target_position", result.contrast.target_position}};
  obj["source_scores"] = scores_to_json(result.source_scores);
  obj["target_prefix_scores"] = scores_to_json(result.target_prefix_scores);
  return obj.dump(1);
}

AttributionResult attribution_from_json(std::string_view text, std::string* content_key) {
  try {
    const json obj = json::parse(text);
    AttributionResult result;
    result.sentence_id = obj.at("sentence_id").get<std::string>();
    const auto& c = obj.at("contrast");
    result.contrast.shared_prefix = c.at("shared_prefix").get<std::vector<std::string>>();
    result.contrast.original_token = c.at("original_token").get<std::string>();
    result.contrast.contrastive_token = c.at("contrastive_token").get<std::string>();
    result.contrast.target_position = c.at("target_position").get<int>();
    result.source_scores = scores_from_json(obj.at("source_scores"));
    result.target_prefix_scores = scores_from_json(obj.at("target_prefix_scores"));
    if (content_key != nullptr) *content_key = obj.value("content_key", std::string());
    return result;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed attribution entry: ") + e.what());
  }
}

AttributionCache::AttributionCache(std::filesystem::path root, std::string backend_hash)
    : directory_(std::move(root) / backend_hash), backend_hash_(std::move(backend_hash)) {}

std::filesystem::path AttributionCache::entry_path(std::string_view sentence_id) const {
  return directory_ / (sentence_file_stem(sentence_id) + ".json");
}

std::string AttributionCache::content_key(const SentencePair& pair, SaliencyMethod method) const {
  return StableHasher()
      .add(backend_hash_)
      .add(pair.id)
      .add(pair.source_text)
      .add(pair.mt_translation)
      .add(pair.contrastive_translation)
      .add(to_string(method))
      .hex();
}

std::optional<AttributionResult> AttributionCache::load(const SentencePair& pair, SaliencyMethod method) const {
  std::ifstream in(entry_path(pair.id));
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  std::string stored_key;
  AttributionResult result;
  try {
    result = attribution_from_json(buf.str(), &stored_key);
  } catch (const SchemaError&) {
    return std::nullopt;
  }
  if (stored_key != content_key(pair, method) || result.sentence_id != pair.id) return std::nullopt;
  return result;
}

AttributionResult AttributionCache::require(const SentencePair& pair, SaliencyMethod method) const {
  const auto path = entry_path(pair.id);
  if (!std::filesystem::exists(path)) throw MissingAttribution(pair.id, "no cache entry at " + path.string());
  auto result = load(pair, method);
  if (!result) throw MissingAttribution(pair.id, "stale or unreadable cache entry " + path.string());
  return *std::move(result);
}

void AttributionCache::store(const SentencePair& pair, SaliencyMethod method, const AttributionResult& result) const {
  std::filesystem::create_directories(directory_);
  const auto path = entry_path(pair.id);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << attribution_to_json(result, content_key(pair, method)) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace mtg
