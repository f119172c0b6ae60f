#include "mtgender/linguistics.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "mtgender/errors.hpp"
#include "mtgender/overlap.hpp"
#include "mtgender/unicode.hpp"

namespace mtg {

DependencyTree::DependencyTree(std::vector<int> heads) : heads_(std::move(heads)) {
  const int n = size();
  depth_.assign(heads_.size(), -1);
  for (int i = 0; i < n; ++i) {
    const int h = heads_[static_cast<std::size_t>(i)];
    if (h < -1 || h >= n || h == i) {
      throw DisconnectedTree("node " + std::to_string(i) + " has invalid head " + std::to_string(h));
    }
    if (h == -1) {
      if (root_ != -1) throw DisconnectedTree("tree has more than one root");
      root_ = i;
    }
  }
  if (n > 0 && root_ == -1) throw DisconnectedTree("tree has no root");
  for (int i = 0; i < n; ++i) {
    // Walk up until a node of known depth; more than n steps means a cycle.
    std::vector<int> path;
    int node = i;
    while (node != -1 && depth_[static_cast<std::size_t>(node)] == -1) {
      path.push_back(node);
      if (static_cast<int>(path.size()) > n) throw DisconnectedTree("cycle through node " + std::to_string(i));
      node = heads_[static_cast<std::size_t>(node)];
    }
    int d = node == -1 ? -1 : depth_[static_cast<std::size_t>(node)];
    for (auto it = path.rbegin(); it != path.rend(); ++it) depth_[static_cast<std::size_t>(*it)] = ++d;
  }
}

std::vector<std::pair<int, int>> DependencyTree::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i) {
    if (heads_[static_cast<std::size_t>(i)] != -1) out.emplace_back(heads_[static_cast<std::size_t>(i)], i);
  }
  return out;
}

int DependencyTree::distance(int a, int b) const {
  if (a < 0 || b < 0 || a >= size() || b >= size()) throw std::out_of_range("dependency node out of range");
  int steps = 0;
  while (depth(a) > depth(b)) {
    a = head(a);
    ++steps;
  }
  while (depth(b) > depth(a)) {
    b = head(b);
    ++steps;
  }
  while (a != b) {
    a = head(a);
    b = head(b);
    steps += 2;
  }
  return steps;
}

std::optional<int> SentenceParse::word_distance(int word_a, int word_b) const {
  const auto& na = node_of_word.at(static_cast<std::size_t>(word_a));
  const auto& nb = node_of_word.at(static_cast<std::size_t>(word_b));
  if (!na || !nb) return std::nullopt;
  return tree.distance(*na, *nb);
}

SentenceParse align_parse(const SentencePair& pair, std::span<const ParsedWord> words) {
  SentenceParse parse;
  parse.sentence_id = pair.id;
  std::vector<int> heads;
  for (const auto& w : words) heads.push_back(w.head);
  try {
    parse.tree = DependencyTree(std::move(heads));
  } catch (const DisconnectedTree& e) {
    throw DisconnectedTree("sentence '" + pair.id + "': " + e.what());
  }

  const std::size_t n = pair.source_tokens.size();
  parse.tags.assign(n, "X");
  parse.node_of_word.assign(n, std::nullopt);

  const bool has_offsets = std::all_of(words.begin(), words.end(),
                                       [](const ParsedWord& w) { return w.char_start >= 0 && w.char_end >= 0; });
  if (!has_offsets) {
    if (words.size() != n) {
      throw AlignmentError("sentence '" + pair.id + "': parse has " + std::to_string(words.size()) +
                           " words without offsets, source has " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
      parse.tags[i] = words[i].pos;
      parse.node_of_word[i] = static_cast<int>(i);
    }
    return parse;
  }

  const auto spans = whitespace_token_spans(pair.source_text);
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<int> best;
    bool best_is_punct = true;
    for (std::size_t k = 0; k < words.size(); ++k) {
      const auto& w = words[k];
      if (w.char_end <= spans[i].begin || w.char_start >= spans[i].end) continue;
      const bool punct = w.pos == "PUNCT" || unicode::is_punctuation_word(w.text);
      const int node = static_cast<int>(k);
      const bool better = !best || (best_is_punct && !punct) ||
                          (punct == best_is_punct && parse.tree.depth(node) < parse.tree.depth(*best));
      if (better) {
        best = node;
        best_is_punct = punct;
      }
    }
    if (best) {
      parse.node_of_word[i] = best;
      parse.tags[i] = words[static_cast<std::size_t>(*best)].pos;
    } else {
      parse.unaligned_words.push_back(static_cast<int>(i));
    }
  }
  return parse;
}

ParseCacheBackend ParseCacheBackend::parse_stream(std::istream& in) {
  ParseCacheBackend backend;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      std::vector<ParsedWord> words;
      for (const auto& w : obj.at("words")) {
        ParsedWord pw;
        pw.text = w.at("text").get<std::string>();
        pw.char_start = w.value("start", -1);
        pw.char_end = w.value("end", -1);
        pw.pos = w.at("pos").get<std::string>();
        pw.head = w.at("head").get<int>();
        words.push_back(std::move(pw));
      }
      backend.add(obj.at("sentence_id").get<std::string>(), std::move(words));
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("parse cache: ") + e.what(), line_no);
    }
  }
  return backend;
}

ParseCacheBackend ParseCacheBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open parse cache '" + path.string() + "'");
  return parse_stream(in);
}

void ParseCacheBackend::add(std::string sentence_id, std::vector<ParsedWord> words) {
  records_[std::move(sentence_id)] = std::move(words);
}

SentenceParse ParseCacheBackend::parse(const SentencePair& pair) {
  const auto it = records_.find(pair.id);
  if (it == records_.end()) throw MissingParse("no parse for sentence '" + pair.id + "'");
  return align_parse(pair, it->second);
}

int dependency_distance(int word_position, int referent_position, const SentenceParse& parse) {
  const auto d = parse.word_distance(word_position, referent_position);
  if (!d) {
    throw MissingParse("sentence '" + parse.sentence_id + "': word " + std::to_string(word_position) +
                       " or referent " + std::to_string(referent_position) + " has no parse node");
  }
  return *d;
}

namespace {

const SentenceParse& parse_for(const ParseMap& parses, const std::string& id) {
  const auto it = parses.find(id);
  if (it == parses.end()) throw MissingParse("no parse for sentence '" + id + "'");
  return it->second;
}

}  // namespace

std::map<std::string, PosShare> pos_distribution(std::span<const SalientSelection> selections,
                                                 const ParseMap& parses) {
  std::map<std::string, PosShare> dist;
  int total = 0;
  for (const auto& sel : selections) {
    if (sel.words.empty()) continue;
    const auto& parse = parse_for(parses, sel.sentence_id);
    for (const auto& w : sel.words) {
      ++dist[parse.tags.at(static_cast<std::size_t>(w.position))].count;
      ++total;
    }
  }
  for (auto& [tag, share] : dist) share.percent = 100.0 * share.count / total;
  return dist;
}

DistanceDistribution distance_distribution(std::span<const SalientSelection> selections, const ParseMap& parses,
                                           std::span<const SentencePair> corpus) {
  std::map<std::string, int> referent;
  for (const auto& p : corpus) referent[p.id] = p.referent.word_index;

  DistanceDistribution dist;
  for (const auto& sel : selections) {
    if (sel.words.empty()) continue;
    const auto& parse = parse_for(parses, sel.sentence_id);
    const auto ref = referent.find(sel.sentence_id);
    if (ref == referent.end()) throw UnknownSentence("selection for unknown sentence '" + sel.sentence_id + "'");
    std::set<int> present;
    for (const auto& w : sel.words) {
      const auto d = parse.word_distance(w.position, ref->second);
      if (!d) {
        dist.unmeasured.push_back(sel.sentence_id + ":" + std::to_string(w.position));
        continue;
      }
      ++dist.word_counts[*d];
      ++dist.measured_words;
      present.insert(*d);
    }
    if (!present.empty()) {
      ++dist.sentences;
      for (int d : present) ++dist.sentence_presence[d];
    }
  }
  for (const auto& [d, c] : dist.word_counts) dist.word_share[d] = 100.0 * c / dist.measured_words;
  for (const auto& [d, c] : dist.sentence_presence) dist.presence_rate[d] = 100.0 * c / dist.sentences;
  return dist;
}

std::vector<Outlier> extract_outliers(std::span<const SalientSelection> selections,
                                      const std::map<std::string, AnnotationSet>& annotations,
                                      const ParseMap* parses) {
  std::vector<Outlier> out;
  for (const auto& sel : selections) {
    std::set<int> annotated;
    if (const auto it = annotations.find(sel.sentence_id); it != annotations.end()) {
      for (const auto& w : annotated_word_set(it->second, AgreementFilter{1})) annotated.insert(w.position);
    }
    const SentenceParse* parse = nullptr;
    if (parses != nullptr) {
      if (const auto it = parses->find(sel.sentence_id); it != parses->end()) parse = &it->second;
    }
    for (const auto& w : sel.words) {
      if (annotated.count(w.position)) continue;
      const std::string pos = parse ? parse->tags.at(static_cast<std::size_t>(w.position)) : "X";
      out.push_back({sel.sentence_id, w.word, w.position, pos});
    }
  }
  return out;
}

LinguisticProfile linguistic_profile(std::span<const SalientSelection> selections, const ParseMap& parses,
                                     std::span<const SentencePair> corpus) {
  LinguisticProfile profile;
  for (const auto& [tag, share] : pos_distribution(selections, parses)) {
    profile.pos_counts[tag] = share.count;
    profile.total_salient_words += share.count;
  }
  profile.distance_counts = distance_distribution(selections, parses, corpus).word_counts;
  return profile;
}

}  // namespace mtg
