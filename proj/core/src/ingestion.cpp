#include "mtgender/ingestion.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtgender/errors.hpp"
#include "mtgender/unicode.hpp"

namespace mtg {
namespace {

using nlohmann::json;

std::vector<double> stepped(int first, int last, int step, double scale) {
  std::vector<double> grid;
  for (int v = first; v <= last; v += step) grid.push_back(v / scale);
  return grid;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  return in;
}

template <typename T>
T required(const json& obj, const char* key, std::size_t line) {
  if (!obj.contains(key)) throw SchemaError(std::string("missing key '") + key + "'", line);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("bad value for '") + key + "': " + e.what(), line);
  }
}

// Calls fn(object, line_number) for every non-blank line.
template <typename Fn>
void for_each_jsonl(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SchemaError(std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw SchemaError("expected a JSON object", line_no);
    fn(obj, line_no);
    ++records;
  }
  if (records == 0) throw SchemaError("file contains no records");
}

std::vector<double> parse_grid(const json& value, const char* name) {
  if (!value.is_array() || value.empty()) {
    throw SchemaError(std::string("sweep grid '") + name + "' must be a non-empty array");
  }
  std::vector<double> grid;
  for (const auto& v : value) {
    if (!v.is_number()) throw SchemaError(std::string("sweep grid '") + name + "' must hold numbers");
    const double x = v.get<double>();
    if (!grid.empty() && !(x > grid.back())) {
      throw SchemaError(std::string("sweep grid '") + name + "' must be strictly increasing");
    }
    grid.push_back(x);
  }
  return grid;
}

void check_grid_range(const std::vector<double>& grid, const char* name, double hi) {
  for (double x : grid) {
    if (!(x > 0.0) || x > hi) {
      throw SchemaError(std::string("sweep grid '") + name + "' values must lie in (0, " +
                        std::to_string(static_cast<int>(hi)) + "]");
    }
  }
}

}  // namespace

const std::set<std::string>& baseline_stopwords() {
  static const std::set<std::string> words = {"", "a", "an", "the", "this", "that", "these", "those"};
  return words;
}

bool CorpusConfig::is_stopword(std::string_view word) const {
  return stopwords.count(unicode::ascii_lower(word)) > 0;
}

bool CorpusConfig::is_punctuation(std::string_view word) const {
  return unicode::is_punctuation_word(word);
}

std::vector<double> CorpusConfig::grid(Approach approach) const {
  switch (approach) {
    case Approach::kTopPercent: return grids.top_percent;
    case Approach::kTopOne: return {1.0};
    case Approach::kMinScore: return grids.min_score;
    case Approach::kCumulativeBudget: return grids.cumulative_budget;
  }
  return {};
}

CorpusConfig default_config() {
  CorpusConfig config;
  config.stopwords = baseline_stopwords();
  config.grids.top_percent = stepped(5, 25, 5, 1.0);
  config.grids.min_score = stepped(1, 10, 1, 100.0);
  config.grids.cumulative_budget = stepped(5, 50, 5, 1.0);
  return config;
}

CorpusConfig parse_config(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("invalid config JSON: ") + e.what());
  }
  if (!obj.is_object()) throw SchemaError("config must be a JSON object");

  CorpusConfig config = default_config();
  if (obj.contains("stopwords")) {
    const auto& sw = obj["stopwords"];
    if (!sw.is_array()) throw SchemaError("'stopwords' must be an array of strings");
    std::set<std::string> words;
    for (const auto& w : sw) {
      if (!w.is_string()) throw SchemaError("'stopwords' must be an array of strings");
      words.insert(unicode::ascii_lower(w.get<std::string>()));
    }
    for (const auto& base : baseline_stopwords()) {
      if (!words.count(base)) {
        throw SchemaError("'stopwords' must include the baseline word '" + base + "'");
      }
    }
    config.stopwords = std::move(words);
  }
  if (obj.contains("punctuation_policy")) {
    const auto& p = obj["punctuation_policy"];
    if (!p.is_string() || p.get<std::string>() != "UNICODE_PUNCT_CLASS") {
      throw SchemaError("'punctuation_policy' must be \"UNICODE_PUNCT_CLASS\"");
    }
  }
  if (obj.contains("sweep_grids")) {
    const auto& grids = obj["sweep_grids"];
    if (!grids.is_object()) throw SchemaError("'sweep_grids' must be an object");
    for (const auto& [key, value] : grids.items()) {
      if (key == "1" || key == "top_percent") {
        config.grids.top_percent = parse_grid(value, "top_percent");
        check_grid_range(config.grids.top_percent, "top_percent", 100.0);
      } else if (key == "3" || key == "min_score") {
        config.grids.min_score = parse_grid(value, "min_score");
        check_grid_range(config.grids.min_score, "min_score", 1.0);
      } else if (key == "4" || key == "cumulative_budget") {
        config.grids.cumulative_budget = parse_grid(value, "cumulative_budget");
        check_grid_range(config.grids.cumulative_budget, "cumulative_budget", 100.0);
      } else {
        throw SchemaError("unknown sweep grid '" + key + "'");
      }
    }
  }
  if (obj.contains("annotation_mode_default")) {
    const auto& m = obj["annotation_mode_default"];
    auto mode = m.is_string() ? parse_annotation_mode(m.get<std::string>()) : std::nullopt;
    if (!mode) throw SchemaError("'annotation_mode_default' must be \"all\" or \"min2\"");
    config.annotation_mode_default = *mode;
  }
  if (obj.contains("saliency_method")) {
    const auto& m = obj["saliency_method"];
    auto method = m.is_string() ? parse_saliency_method(m.get<std::string>()) : std::nullopt;
    if (!method) throw SchemaError("'saliency_method' must be \"l2\" or \"grad_x_input\"");
    config.saliency_method = *method;
  }
  return config;
}

CorpusConfig load_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::vector<SentencePair> parse_corpus(std::istream& in) {
  std::vector<SentencePair> pairs;
  std::set<std::string> seen;
  for_each_jsonl(in, [&](const json& obj, std::size_t line) {
    const auto id = required<std::string>(obj, "id", line);
    if (!seen.insert(id).second) throw SchemaError("duplicate sentence id '" + id + "'", line);
    if (!obj.contains("referent") || !obj["referent"].is_object()) {
      throw SchemaError("missing object 'referent'", line);
    }
    const auto& ref = obj["referent"];
    ReferentSpan span{required<std::string>(ref, "surface", line), required<int>(ref, "word_index", line),
                      required<int>(ref, "char_start", line), required<int>(ref, "char_end", line)};
    const auto mt_gender = parse_gender(required<std::string>(obj, "mt_gender", line));
    const auto contrastive_gender = parse_gender(required<std::string>(obj, "contrastive_gender", line));
    if (!mt_gender || !contrastive_gender) {
      throw SchemaError("gender must be \"masculine\" or \"feminine\"", line);
    }
    std::optional<int> claimed;
    if (obj.contains("prefix_length")) claimed = required<int>(obj, "prefix_length", line);
    std::string source = required<std::string>(obj, "source", line);
    try {
      unicode::decode_utf8(source);
    } catch (const SchemaError& e) {
      throw SchemaError(std::string("source is not valid UTF-8: ") + e.what(), line);
    }
    pairs.push_back(make_sentence_pair(id, std::move(source), std::move(span),
                                       required<std::string>(obj, "mt", line),
                                       required<std::string>(obj, "contrastive", line), *mt_gender,
                                       *contrastive_gender, claimed));
  });
  return pairs;
}

std::vector<SentencePair> load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

CorpusStats corpus_stats(std::span<const SentencePair> pairs) {
  CorpusStats stats;
  stats.sentences = static_cast<int>(pairs.size());
  if (pairs.empty()) return stats;
  std::set<std::string> referents;
  double sum = 0.0;
  int masculine = 0;
  for (const auto& p : pairs) {
    referents.insert(unicode::ascii_lower(p.referent.surface));
    sum += static_cast<double>(p.source_tokens.size());
    if (p.mt_gender == Gender::kMasculine) ++masculine;
  }
  const double n = static_cast<double>(pairs.size());
  stats.unique_referents = static_cast<int>(referents.size());
  stats.mean_words = sum / n;
  double ss = 0.0;
  for (const auto& p : pairs) {
    const double d = static_cast<double>(p.source_tokens.size()) - stats.mean_words;
    ss += d * d;
  }
  stats.std_words = std::sqrt(ss / n);
  stats.masculine_pct = 100.0 * masculine / n;
  stats.feminine_pct = 100.0 - stats.masculine_pct;
  return stats;
}

std::map<std::string, AnnotationSet> parse_annotations(std::istream& in,
                                                       std::span<const SentencePair> corpus,
                                                       const CorpusConfig& config) {
  std::map<std::string, const SentencePair*> by_id;
  for (const auto& p : corpus) by_id[p.id] = &p;

  std::map<std::string, AnnotationSet> sets;
  for_each_jsonl(in, [&](const json& obj, std::size_t line) {
    const auto sentence_id = required<std::string>(obj, "sentence_id", line);
    const auto annotator_id = required<std::string>(obj, "annotator_id", line);
    const auto it = by_id.find(sentence_id);
    if (it == by_id.end()) {
      throw UnknownSentence("line " + std::to_string(line) + ": unknown sentence id '" + sentence_id + "'");
    }
    const SentencePair& pair = *it->second;

    AnnotatorEntry entry;
    entry.annotator_id = annotator_id;
    if (obj.contains("perceived_gender") && !obj["perceived_gender"].is_null()) {
      entry.perceived_gender = parse_perceived_gender(required<std::string>(obj, "perceived_gender", line));
      if (!entry.perceived_gender) throw SchemaError("unknown perceived_gender", line);
    }
    if (!obj.contains("words") || !obj["words"].is_array()) {
      throw SchemaError("missing array 'words'", line);
    }
    for (const auto& w : obj["words"]) {
      if (!w.is_object()) throw SchemaError("'words' entries must be objects", line);
      const auto word = required<std::string>(w, "word", line);
      const auto index = required<int>(w, "word_index", line);
      if (index < 0 || index >= static_cast<int>(pair.source_tokens.size())) {
        throw PositionOutOfRange("line " + std::to_string(line) + ": sentence '" + sentence_id +
                                 "' has " + std::to_string(pair.source_tokens.size()) +
                                 " words, annotation addresses index " + std::to_string(index));
      }
      const auto& token = pair.source_tokens[static_cast<std::size_t>(index)];
      if (config.is_stopword(token) || config.is_punctuation(token)) continue;
      entry.words.insert(WordRef{word, index});
    }

    auto& set = sets[sentence_id];
    set.sentence_id = sentence_id;
    for (const auto& existing : set.annotations) {
      if (existing.annotator_id == annotator_id) {
        throw InvariantViolation("annotator '" + annotator_id + "' appears twice", sentence_id);
      }
    }
    set.annotations.push_back(std::move(entry));
  });
  return sets;
}

std::map<std::string, AnnotationSet> load_annotations(const std::filesystem::path& path,
                                                      std::span<const SentencePair> corpus,
                                                      const CorpusConfig& config) {
  auto in = open_input(path);
  return parse_annotations(in, corpus, config);
}

}  // namespace mtg
