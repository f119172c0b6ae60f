#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mtgender/errors.hpp"
#include "mtgender/ingestion.hpp"
#include "mtgender/linguistics.hpp"
#include "test_util.hpp"

using namespace mtg;
namespace mt = mtg::testing;

namespace {

SalientSelection selection(const std::string& id, std::vector<WordRef> words) {
  SalientSelection s;
  s.sentence_id = id;
  s.approach = Approach::kCumulativeBudget;
  s.parameter = 20;
  s.words = std::move(words);
  return s;
}

std::vector<SentencePair> fixture_corpus() { return load_corpus(mt::data_dir() / "corpus.jsonl"); }

ParseMap fixture_parses(const std::vector<SentencePair>& corpus) {
  auto backend = ParseCacheBackend::load(mt::data_dir() / "parses.jsonl");
  ParseMap out;
  for (const auto& p : corpus) out[p.id] = backend.parse(p);
  return out;
}

// The nurse's chart .   "nurse's" is split by the parser; "." is not parsed.
SentencePair possessive_pair() { return mt::simple_pair("pos", "The nurse's chart .", "nurse's", "x", "y"); }

std::vector<ParsedWord> possessive_parse() {
  return {{"The", 0, 3, "DET", 1}, {"nurse", 4, 9, "NOUN", 3}, {"'s", 9, 11, "PART", 1}, {"chart", 12, 17, "NOUN", -1}};
}

}  // namespace

TEST(DependencyTree, RejectsMalformedHeads) {
  const auto build = [](std::vector<int> heads) { return DependencyTree(std::move(heads)); };
  EXPECT_THROW(build({-1, -1}), DisconnectedTree);
  EXPECT_THROW(build({1, 0}), DisconnectedTree);
  EXPECT_THROW(build({-1, 2, 1}), DisconnectedTree);
  EXPECT_THROW(build({-1, 5}), DisconnectedTree);
  EXPECT_THROW(build({0}), DisconnectedTree);
  EXPECT_NO_THROW(build({}));
  EXPECT_NO_THROW(build({-1}));
}

TEST(DependencyTree, ChainDistances) {
  const DependencyTree chain(std::vector<int>{-1, 0, 1, 2, 3});
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) EXPECT_EQ(chain.distance(a, b), std::abs(a - b));
  }
  EXPECT_EQ(chain.edges().size(), 4u);
  EXPECT_THROW(chain.distance(0, 5), std::out_of_range);
}

TEST(DependencyTree, DistanceMatchesBfsAndIsAMetric) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = std::uniform_int_distribution<int>(1, 12)(rng);
    const auto heads = mt::random_tree(rng, n);
    const DependencyTree tree(heads);
    for (int a = 0; a < n; ++a) {
      EXPECT_EQ(tree.distance(a, a), 0);
      for (int b = 0; b < n; ++b) {
        EXPECT_EQ(tree.distance(a, b), mt::bfs_distance(heads, a, b));
        EXPECT_EQ(tree.distance(a, b), tree.distance(b, a));
        for (int c = 0; c < n; ++c) EXPECT_LE(tree.distance(a, c), tree.distance(a, b) + tree.distance(b, c));
      }
    }
  }
}

TEST(AlignParse, SplitTokensAndUnparsedWords) {
  const auto pair = possessive_pair();
  const auto parse = align_parse(pair, possessive_parse());
  EXPECT_EQ(parse.tags, (std::vector<std::string>{"DET", "NOUN", "NOUN", "X"}));
  EXPECT_EQ(parse.node_of_word[1], 1);
  EXPECT_EQ(parse.unaligned_words, (std::vector<int>{3}));
  EXPECT_EQ(parse.word_distance(2, 1), 1);
  EXPECT_FALSE(parse.word_distance(3, 1).has_value());
  EXPECT_THROW(dependency_distance(3, 1, parse), MissingParse);
}

TEST(AlignParse, WithoutOffsetsNeedsOneTokenPerWord) {
  const auto pair = mt::simple_pair("n", "the nurse ran", "nurse", "x", "y");
  const std::vector<ParsedWord> ok = {{"the", -1, -1, "DET", 1}, {"nurse", -1, -1, "NOUN", 2}, {"ran", -1, -1, "VERB", -1}};
  const auto parse = align_parse(pair, ok);
  EXPECT_EQ(parse.tags, (std::vector<std::string>{"DET", "NOUN", "VERB"}));
  const std::vector<ParsedWord> short_parse = {{"the", -1, -1, "DET", 1}, {"nurse", -1, -1, "NOUN", -1}};
  EXPECT_THROW(align_parse(pair, short_parse), AlignmentError);
}

TEST(AlignParse, DisconnectedParseNamesSentence) {
  const std::vector<ParsedWord> bad = {{"The", 0, 3, "DET", -1}, {"nurse", 4, 9, "NOUN", -1}};
  try {
    align_parse(possessive_pair(), bad);
    FAIL() << "expected DisconnectedTree";
  } catch (const DisconnectedTree& e) {
    EXPECT_NE(std::string(e.what()).find("pos"), std::string::npos);
  }
}

TEST(PosDistribution, SingleNoun) {
  const auto pair = mt::simple_pair("n", "the scotch maker ran", "maker", "x", "y");
  ParseMap parses;
  parses["n"] = align_parse(pair, std::vector<ParsedWord>{{"the", -1, -1, "DET", 2},
                                                          {"scotch", -1, -1, "NOUN", 2},
                                                          {"maker", -1, -1, "NOUN", 3},
                                                          {"ran", -1, -1, "VERB", -1}});
  const std::vector<SalientSelection> sels = {selection("n", {{"scotch", 1}})};
  const auto pos = pos_distribution(sels, parses);
  ASSERT_EQ(pos.size(), 1u);
  EXPECT_EQ(pos.at("NOUN").count, 1);
  EXPECT_DOUBLE_EQ(pos.at("NOUN").percent, 100.0);

  const std::vector<SentencePair> corpus = {pair};
  const auto dist = distance_distribution(sels, parses, corpus);
  EXPECT_EQ(dist.word_counts, (std::map<int, int>{{1, 1}}));
  EXPECT_EQ(dist.sentences, 1);
  EXPECT_DOUBLE_EQ(dist.presence_rate.at(1), 100.0);

  const std::vector<SalientSelection> unknown = {selection("other", {{"x", 0}})};
  EXPECT_THROW(pos_distribution(unknown, parses), MissingParse);
}

TEST(DistanceDistribution, FixtureSentence) {
  const auto corpus = fixture_corpus();
  const auto parses = fixture_parses(corpus);
  // s01: explained is the head of counselor; rules hangs off explained; tax off rules.
  const std::vector<SalientSelection> sels = {
      selection("s01", {{"explained", 3}, {"rules", 7}, {"tax", 6}, {"new", 5}}),
      selection("s02", {}),
  };
  const auto dist = distance_distribution(sels, parses, corpus);
  EXPECT_EQ(dist.word_counts, (std::map<int, int>{{1, 1}, {2, 1}, {3, 2}}));
  EXPECT_EQ(dist.measured_words, 4);
  EXPECT_DOUBLE_EQ(dist.word_share.at(3), 50.0);
  EXPECT_EQ(dist.sentences, 1);
  EXPECT_EQ(dist.sentence_presence.at(2), 1);

  const auto profile = linguistic_profile(sels, parses, corpus);
  EXPECT_EQ(profile.total_salient_words, 4);
  EXPECT_EQ(profile.pos_counts.at("NOUN"), 2);
  EXPECT_EQ(profile.distance_counts, dist.word_counts);
}

TEST(ParseCache, FixtureCoversCorpus) {
  const auto corpus = fixture_corpus();
  auto backend = ParseCacheBackend::load(mt::data_dir() / "parses.jsonl");
  for (const auto& pair : corpus) {
    ASSERT_TRUE(backend.contains(pair.id));
    const auto parse = backend.parse(pair);
    EXPECT_EQ(parse.tags.size(), pair.source_tokens.size());
    EXPECT_TRUE(parse.node_of_word[static_cast<std::size_t>(pair.referent.word_index)].has_value()) << pair.id;
  }
  auto missing = mt::simple_pair("zz", "a b", "b", "x", "y");
  EXPECT_THROW(backend.parse(missing), MissingParse);
}

TEST(ParseCache, MalformedLineIsSchemaError) {
  std::istringstream in("{\"sentence_id\": \"a\", \"words\": []}\nnot json\n");
  EXPECT_THROW(ParseCacheBackend::parse_stream(in), SchemaError);
}

TEST(Outliers, PartitionSelection) {
  std::map<std::string, AnnotationSet> ann;
  ann["s"] = {"s", {{"a1", {{"tax", 6}}, std::nullopt}, {"a2", {{"rules", 7}}, std::nullopt}}};
  const std::vector<SalientSelection> sels = {selection("s", {{"tax", 6}, {"new", 5}, {"rules", 7}, {"to", 8}})};
  const auto out = extract_outliers(sels, ann);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].word, "new");
  EXPECT_EQ(out[1].word, "to");
  EXPECT_EQ(out[0].pos, "X");
  // Outliers plus overlapping words give back the selection.
  std::set<int> seen;
  for (const auto& o : out) seen.insert(o.position);
  seen.insert(6);
  seen.insert(7);
  EXPECT_EQ(seen, mt::positions(sels[0]));
}

TEST(Outliers, TaggedFromParse) {
  const auto corpus = fixture_corpus();
  const auto parses = fixture_parses(corpus);
  const std::vector<SalientSelection> sels = {selection("s01", {{"new", 5}})};
  const auto out = extract_outliers(sels, {}, &parses);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].pos, "ADJ");
}
