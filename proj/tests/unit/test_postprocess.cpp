#include <map>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "mtgender/errors.hpp"
#include "mtgender/ingestion.hpp"
#include "mtgender/mock_backend.hpp"
#include "mtgender/postprocess.hpp"
#include "test_util.hpp"

using namespace mtg;
namespace mt = mtg::testing;

namespace {

AttributionResult raw(const std::vector<std::pair<std::string, double>>& tokens, const std::string& id = "r") {
  AttributionResult r;
  r.sentence_id = id;
  int i = 0;
  for (const auto& [t, s] : tokens) r.source_scores.push_back({t, i++, s, s});
  return r;
}

double score_of(const WordScoreList& list, const std::string& word) {
  for (const auto& e : list.entries) {
    if (e.token == word) return e.normalized_score;
  }
  return -1.0;
}

double token_sum(const AttributionResult& r) {
  double s = 0;
  for (const auto& t : r.source_scores) s += t.normalized_score;
  return s;
}

}  // namespace

TEST(Normalize, Examples) {
  const auto a = normalize(raw({{"a", 2}, {"b", 1}, {"c", 1}}));
  EXPECT_EQ(a.source_scores[0].normalized_score, 0.5);
  EXPECT_EQ(a.source_scores[1].normalized_score, 0.25);
  EXPECT_EQ(a.source_scores[2].normalized_score, 0.25);
  EXPECT_EQ(normalize(raw({{"x", 5}})).source_scores[0].normalized_score, 1.0);
  EXPECT_THROW(normalize(raw({{"a", 0}, {"b", 0}})), AllZeroScores);
  EXPECT_THROW(normalize(raw({})), AllZeroScores);
}

TEST(Normalize, MockFixtureSumsToOne) {
  MockBackend backend(0);
  for (const auto& pair : load_corpus(mt::data_dir() / "corpus.jsonl")) {
    const auto r = normalize(attribute_contrast(backend, pair));
    EXPECT_NEAR(token_sum(r), 1.0, 1e-9) << pair.id;
  }
}

TEST(Merge, SubwordScoresAdd) {
  const auto m = merge_subwords(raw({{"the", 0.1}, {"consum", 0.03}, {"##er", 0.02}}), "the consumer");
  EXPECT_NEAR(score_of(m, "consumer"), 0.05, 1e-15);
  EXPECT_EQ(score_of(m, "the"), 0.1);
}

TEST(Merge, MarkerStyles) {
  const auto sp = merge_subwords(raw({{"\xE2\x96\x81" "the", 0.1}, {"\xE2\x96\x81" "consum", 0.3}, {"er", 0.2}}),
                                 "the consumer");
  EXPECT_NEAR(score_of(sp, "consumer"), 0.5, 1e-15);
  const auto bpe = merge_subwords(raw({{"consum@@", 0.3}, {"er", 0.2}, {"left", 0.5}}), "consumer left");
  EXPECT_NEAR(score_of(bpe, "consumer"), 0.5, 1e-15);
  // A bare word-start marker belongs to the following word.
  const auto bare = merge_subwords(raw({{"\xE2\x96\x81", 0.25}, {"\"", 0.25}, {"hi", 0.5}}), "\"hi");
  EXPECT_NEAR(score_of(bare, "\"hi"), 1.0, 1e-15);
}

TEST(Merge, SingleTokenWordsUnchanged) {
  const auto r = raw({{"a", 0.2}, {"b", 0.5}, {"c", 0.3}});
  const auto m = merge_subwords(r, "a b c");
  ASSERT_EQ(m.entries.size(), 3u);
  for (const auto& t : r.source_scores) {
    EXPECT_EQ(score_of(m, t.token), t.normalized_score);
  }
  EXPECT_EQ(m.entries[0].token, "b");  // sorted descending
}

TEST(Merge, SpecialsAndUnknowns) {
  const auto m = merge_subwords(raw({{"Who", 0.2}, {"<unk>", 0.1}, {"s", 0.3}, {"there", 0.2}, {"</s>", 0.2}}),
                                "Who’s there");
  EXPECT_NEAR(score_of(m, "Who’s"), 0.6, 1e-15);
  EXPECT_NEAR(score_of(m, "</s>"), 0.2, 1e-15);
  for (const auto& e : m.entries) {
    if (e.token == "</s>") {
      EXPECT_EQ(e.source_position, kSpecialTokenPosition);
    }
  }
}

TEST(Merge, MisalignedTokensThrow) {
  EXPECT_THROW(merge_subwords(raw({{"cons", 0.5}, {"##x", 0.5}}), "consumer"), AlignmentError);
  EXPECT_THROW(merge_subwords(raw({{"a", 0.5}}), "a b"), AlignmentError);
  EXPECT_THROW(merge_subwords(raw({{"a", 0.5}, {"b", 0.5}}), "a"), AlignmentError);
}

TEST(Merge, MockCorpusConservesScore) {
  MockBackend backend(0);
  for (const auto& pair : load_corpus(mt::data_dir() / "corpus.jsonl")) {
    const auto r = normalize(attribute_contrast(backend, pair));
    const auto m = merge_subwords(r, pair.source_text);
    double merged = 0;
    for (const auto& e : m.entries) merged += e.normalized_score;
    EXPECT_NEAR(merged, token_sum(r), 1e-12) << pair.id;
    EXPECT_EQ(m.entries.size(), pair.source_tokens.size() + 1);  // words plus "</s>"
  }
}

TEST(Filter, ScotchSentence) {
  const auto pair = mt::scotch_pair();
  const auto words = prepare_word_scores(raw([] {
                                           std::vector<std::pair<std::string, double>> v;
                                           for (const auto& t : mt::scotch_token_scores()) {
                                             v.emplace_back(t.token, t.raw_score);
                                           }
                                           return v;
                                         }()),
                                         pair, default_config());
  EXPECT_EQ(score_of(words, "consumer"), -1.0);
  EXPECT_NEAR(score_of(words, "scotch"), 0.0791, 1e-12);
  EXPECT_NEAR(score_of(words, "maker"), 0.0750, 1e-12);
  EXPECT_NEAR(score_of(words, "engage"), 0.0522, 1e-12);
  ASSERT_GE(words.entries.size(), 3u);
  EXPECT_EQ(words.entries[0].token, "scotch");
  EXPECT_EQ(words.entries[1].token, "maker");
  EXPECT_EQ(words.entries[2].token, "engage");
  EXPECT_LT(words.total(), 1.0);
  std::map<RemovalReason, int> reasons;
  for (const auto& r : words.removed) ++reasons[r.reason];
  EXPECT_EQ(reasons[RemovalReason::kReferent], 1);
  EXPECT_EQ(reasons[RemovalReason::kEos], 1);
  EXPECT_EQ(reasons[RemovalReason::kStopword], 4);  // the, a, a, that
}

TEST(Filter, AllStopwordsLeavesNothing) {
  auto pair = mt::simple_pair("sw", "The nurse this that", "nurse", "x", "y");
  auto list = merge_subwords(normalize(raw({{"The", 1}, {"nurse", 1}, {"this", 1}, {"that", 1}, {"</s>", 1}})),
                             pair.source_text);
  const auto out = filter_words(list, pair, default_config());
  EXPECT_TRUE(out.entries.empty());
  EXPECT_EQ(out.removed.size(), 5u);
}

TEST(Filter, OnlyReferentPositionRemoved) {
  const auto pair = mt::simple_pair("dup", "the nurse helped another nurse .", "nurse", "x", "y");
  const auto list = merge_subwords(
      normalize(raw({{"the", 1}, {"nurse", 2}, {"helped", 3}, {"another", 1}, {"nurse", 2}, {".", 1}})),
      pair.source_text);
  const auto out = filter_words(list, pair, default_config());
  ASSERT_EQ(out.entries.size(), 3u);
  int nurses = 0;
  for (const auto& e : out.entries) nurses += e.token == "nurse";
  EXPECT_EQ(nurses, 1);
  for (const auto& e : out.entries) {
    if (e.token == "nurse") {
      EXPECT_EQ(e.source_position, 4);
    }
  }
  // Scores of survivors are untouched.
  for (const auto& e : out.entries) {
    for (const auto& m : list.entries) {
      if (m.source_position == e.source_position) {
        EXPECT_EQ(m.normalized_score, e.normalized_score);
      }
    }
  }
}

TEST(Filter, PostFilterSumBelowOneOnFixtures) {
  MockBackend backend(0);
  const auto config = default_config();
  for (const auto& pair : load_corpus(mt::data_dir() / "corpus.jsonl")) {
    const auto w = prepare_word_scores(attribute_contrast(backend, pair), pair, config);
    double removed = 0;
    for (const auto& r : w.removed) removed += r.score;
    ASSERT_GT(removed, 0.0);
    EXPECT_LT(w.total(), 1.0) << pair.id;
    EXPECT_NEAR(w.total() + removed, 1.0, 1e-9);
  }
}

TEST(Sort, TiesByPosition) {
  std::vector<TokenAttribution> e = {{"c", 5, 0, 0.2}, {"a", 1, 0, 0.2}, {"b", 3, 0, 0.5}};
  sort_entries(e);
  EXPECT_EQ(e[0].token, "b");
  EXPECT_EQ(e[1].token, "a");
  EXPECT_EQ(e[2].token, "c");
}

TEST(WordScoresCsv, Layout) {
  auto pair = mt::simple_pair("csv", "The nurse ran", "nurse", "x", "y");
  const auto w = prepare_word_scores(raw({{"The", 1}, {"nurse", 1}, {"ran", 2}}), pair, default_config());
  std::ostringstream out;
  write_word_scores_csv(out, w);
  EXPECT_EQ(out.str(), "word,position,score,removed_reason\nran,2,0.5,\nThe,0,0.25,STOPWORD\nnurse,1,0.25,REFERENT\n");
}
