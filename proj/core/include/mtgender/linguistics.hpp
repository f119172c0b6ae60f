#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtgender/types.hpp"

namespace mtg {

// Rooted dependency tree over parser tokens. heads[i] is the parent of node i
// or -1 for the root. The constructor throws DisconnectedTree unless there is
// exactly one root and every node reaches it.
class DependencyTree {
 public:
  DependencyTree() = default;
  explicit DependencyTree(std::vector<int> heads);

  int size() const { return static_cast<int>(heads_.size()); }
  int head(int node) const { return heads_.at(static_cast<std::size_t>(node)); }
  int depth(int node) const { return depth_.at(static_cast<std::size_t>(node)); }
  int root() const { return root_; }
  // (head, dependent) pairs.
  std::vector<std::pair<int, int>> edges() const;

  // Number of edges on the path between two nodes. Throws
  // std::out_of_range for unknown nodes.
  int distance(int a, int b) const;

 private:
  std::vector<int> heads_;
  std::vector<int> depth_;
  int root_ = -1;
};

// One parser token. Offsets are code point indices into the source text;
// -1 means "not given" and requires a one-to-one word alignment.
struct ParsedWord {
  std::string text;
  int char_start = -1;
  int char_end = -1;
  std::string pos;  // UD UPOS tag
  int head = -1;
};

// A parse projected onto the sentence's whitespace words.
struct SentenceParse {
  std::string sentence_id;
  std::vector<std::string> tags;                 // per source word
  std::vector<std::optional<int>> node_of_word;  // per source word
  std::vector<int> unaligned_words;              // tagged "X"
  DependencyTree tree;

  // Edges between the parser nodes of two source words. nullopt if either
  // word did not align to a parser token.
  std::optional<int> word_distance(int word_a, int word_b) const;
};

// Maps each whitespace word to the overlapping parser token nearest the root,
// preferring non-punctuation tokens; words with no overlap get tag "X".
SentenceParse align_parse(const SentencePair& pair, std::span<const ParsedWord> words);

class ParseBackend {
 public:
  virtual ~ParseBackend() = default;
  // Throws MissingParse when the backend has nothing for the sentence.
  virtual SentenceParse parse(const SentencePair& pair) = 0;
};

// Reads pre-computed parses, one JSON object per line:
//   {"sentence_id": "...", "words": [{"text":..., "start":..., "end":...,
//    "pos": "NOUN", "head": <index or -1>}, ...]}
class ParseCacheBackend final : public ParseBackend {
 public:
  static ParseCacheBackend load(const std::filesystem::path& path);
  static ParseCacheBackend parse_stream(std::istream& in);

  void add(std::string sentence_id, std::vector<ParsedWord> words);
  SentenceParse parse(const SentencePair& pair) override;
  bool contains(const std::string& sentence_id) const { return records_.count(sentence_id) > 0; }

 private:
  std::map<std::string, std::vector<ParsedWord>> records_;
};

// Edges between a word and the referent. Throws MissingParse if either word
// is unaligned.
int dependency_distance(int word_position, int referent_position, const SentenceParse& parse);

struct PosShare {
  int count = 0;
  double percent = 0.0;
};

using ParseMap = std::map<std::string, SentenceParse>;

// UD tag distribution over every selected word in the corpus. Throws
// MissingParse if a selection's sentence has no parse.
std::map<std::string, PosShare> pos_distribution(std::span<const SalientSelection> selections, const ParseMap& parses);

struct DistanceDistribution {
  std::map<int, int> word_counts;         // distance -> salient words
  std::map<int, double> word_share;       // percent of measured words
  std::map<int, int> sentence_presence;   // distance -> sentences having such a word
  std::map<int, double> presence_rate;    // percent of sentences with a measured word
  int measured_words = 0;
  int sentences = 0;
  // "sentence_id:position" of words that could not be placed in the tree.
  std::vector<std::string> unmeasured;
};

DistanceDistribution distance_distribution(std::span<const SalientSelection> selections, const ParseMap& parses,
                                           std::span<const SentencePair> corpus);

struct Outlier {
  std::string sentence_id;
  std::string word;
  int position = 0;
  std::string pos;
};

// Salient words no annotator marked. POS is "X" when no parse is available.
std::vector<Outlier> extract_outliers(std::span<const SalientSelection> selections,
                                      const std::map<std::string, AnnotationSet>& annotations,
                                      const ParseMap* parses = nullptr);

struct LinguisticProfile {
  std::map<std::string, int> pos_counts;
  std::map<int, int> distance_counts;
  int total_salient_words = 0;
};

LinguisticProfile linguistic_profile(std::span<const SalientSelection> selections, const ParseMap& parses,
                                     std::span<const SentencePair> corpus);

}  // namespace mtg
