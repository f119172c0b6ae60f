#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "mtgender/errors.hpp"
#include "mtgender/ingestion.hpp"
#include "test_util.hpp"

using namespace mtg;
namespace mt = mtg::testing;

namespace {

const char* kRecord =
    R"({"id":"x1","source":"The baker smiled","referent":{"surface":"baker","word_index":1,"char_start":4,"char_end":9},)"
    R"("mt":"Der Bäcker lächelte","contrastive":"Die Bäckerin lächelte","mt_gender":"masculine","contrastive_gender":"feminine"})";

std::vector<SentencePair> corpus_from(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::vector<SentencePair> fixture_corpus() { return load_corpus(mt::data_dir() / "corpus.jsonl"); }

std::map<std::string, AnnotationSet> annotations_from(const std::string& text,
                                                      const std::vector<SentencePair>& corpus) {
  std::istringstream in(text);
  return parse_annotations(in, corpus);
}

}  // namespace

TEST(Config, EmptyObjectGivesDefaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.stopwords, (std::set<std::string>{"", "a", "an", "the", "this", "that", "these", "those"}));
  EXPECT_EQ(c.grids.top_percent, (std::vector<double>{5, 10, 15, 20, 25}));
  EXPECT_EQ(c.grids.cumulative_budget, (std::vector<double>{5, 10, 15, 20, 25, 30, 35, 40, 45, 50}));
  ASSERT_EQ(c.grids.min_score.size(), 10u);
  for (int k = 1; k <= 10; ++k) EXPECT_EQ(c.grids.min_score[static_cast<std::size_t>(k - 1)], k / 100.0);
  EXPECT_EQ(c.grid(Approach::kTopOne), (std::vector<double>{1}));
  EXPECT_EQ(c.annotation_mode_default, AnnotationMode::kAll);
  EXPECT_EQ(c.saliency_method, SaliencyMethod::kGradientL2);
}

TEST(Config, StopwordSupersetAcceptedSubsetRejected) {
  const auto c = parse_config(R"({"stopwords":["","a","an","the","this","that","these","those","of","Some"]})");
  EXPECT_TRUE(c.is_stopword("OF"));
  EXPECT_TRUE(c.is_stopword("some"));
  EXPECT_THROW(parse_config(R"({"stopwords":["a","the"]})"), SchemaError);
}

TEST(Config, GridsValidated) {
  EXPECT_THROW(parse_config(R"({"sweep_grids":{"1":[5,5,10]}})"), SchemaError);
  EXPECT_THROW(parse_config(R"({"sweep_grids":{"4":[10,5]}})"), SchemaError);
  EXPECT_THROW(parse_config(R"({"sweep_grids":{"3":[]}})"), SchemaError);
  EXPECT_THROW(parse_config(R"({"sweep_grids":{"3":[0.5,2]}})"), SchemaError);
  EXPECT_THROW(parse_config(R"({"sweep_grids":{"9":[1]}})"), SchemaError);
  const auto c = parse_config(R"({"sweep_grids":{"cumulative_budget":[20]},"saliency_method":"grad_x_input"})");
  EXPECT_EQ(c.grids.cumulative_budget, (std::vector<double>{20}));
  EXPECT_EQ(c.saliency_method, SaliencyMethod::kGradientTimesInput);
  EXPECT_THROW(parse_config("[1]"), SchemaError);
  EXPECT_THROW(parse_config("{"), SchemaError);
}

TEST(Config, StopwordsCaseInsensitive) {
  const auto c = default_config();
  EXPECT_TRUE(c.is_stopword("The"));
  EXPECT_TRUE(c.is_stopword("THOSE"));
  EXPECT_FALSE(c.is_stopword("then"));
}

TEST(Corpus, SingleRecord) {
  const auto pairs = corpus_from(std::string(kRecord) + "\n");
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].id, "x1");
  EXPECT_EQ(pairs[0].referent.word_index, 1);
  EXPECT_EQ(pairs[0].mt_gender, Gender::kMasculine);
}

TEST(Corpus, EmptyFileIsSchemaError) {
  EXPECT_THROW(corpus_from(""), SchemaError);
  EXPECT_THROW(corpus_from("\n  \n"), SchemaError);
}

TEST(Corpus, DuplicateIdReportsLine) {
  try {
    corpus_from(std::string(kRecord) + "\n" + kRecord + "\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Corpus, MalformedLinesReportLine) {
  try {
    corpus_from(std::string(kRecord) + "\n{\"id\": \"x2\"}\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    corpus_from("not json\n");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(Corpus, InvariantViolationNamesSentence) {
  std::string bad = kRecord;
  bad.replace(bad.find("\"char_start\":4"), 14, "\"char_start\":3");
  try {
    corpus_from(bad);
    FAIL();
  } catch (const InvariantViolation& e) {
    EXPECT_EQ(e.sentence_id(), "x1");
    EXPECT_FALSE(e.invariant().empty());
  }
}

TEST(Corpus, FixtureLoadsAndIsIdempotent) {
  const auto a = fixture_corpus();
  const auto b = fixture_corpus();
  ASSERT_EQ(a.size(), 10u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.front().id, "s01");
  EXPECT_EQ(a.back().id, "s10");
}

TEST(Corpus, StatsMatchDirectComputation) {
  const auto pairs = fixture_corpus();
  const auto s = corpus_stats(pairs);
  std::vector<double> lengths;
  std::set<std::string> refs;
  int masc = 0;
  for (const auto& p : pairs) {
    std::istringstream words(p.source_text);
    int n = 0;
    for (std::string w; words >> w;) ++n;
    lengths.push_back(n);
    refs.insert(p.referent.surface);
    masc += p.mt_gender == Gender::kMasculine;
  }
  double mean = 0;
  for (double l : lengths) mean += l / static_cast<double>(lengths.size());
  double var = 0;
  for (double l : lengths) var += (l - mean) * (l - mean) / static_cast<double>(lengths.size());
  EXPECT_EQ(s.sentences, 10);
  EXPECT_EQ(s.unique_referents, static_cast<int>(refs.size()));
  EXPECT_NEAR(s.mean_words, mean, 1e-12);
  EXPECT_NEAR(s.std_words, std::sqrt(var), 1e-12);
  EXPECT_NEAR(s.masculine_pct, 100.0 * masc / 10.0, 1e-12);
  EXPECT_NEAR(s.masculine_pct + s.feminine_pct, 100.0, 1e-12);
}

TEST(Annotations, FixtureLoads) {
  const auto corpus = fixture_corpus();
  const auto sets = load_annotations(mt::data_dir() / "annotations.jsonl", corpus);
  ASSERT_EQ(sets.size(), 10u);
  for (const auto& [id, set] : sets) {
    EXPECT_EQ(set.annotations.size(), 3u) << id;
  }
}

TEST(Annotations, EmptyEntryRetainedAndFilteredWordsDropped) {
  const auto corpus = corpus_from(kRecord);
  const auto sets = annotations_from(
      R"({"sentence_id":"x1","annotator_id":"a","words":[]})"
      "\n"
      R"({"sentence_id":"x1","annotator_id":"b","words":[{"word":"The","word_index":0},{"word":"smiled","word_index":2}],"perceived_gender":"other"})",
      corpus);
  const auto& set = sets.at("x1");
  ASSERT_EQ(set.annotations.size(), 2u);
  EXPECT_TRUE(set.annotations[0].words.empty());
  EXPECT_EQ(set.annotations[1].words, (std::set<WordRef>{{"smiled", 2}}));
  EXPECT_EQ(set.annotations[1].perceived_gender, PerceivedGender::kOther);
}

TEST(Annotations, Errors) {
  const auto corpus = corpus_from(kRecord);
  EXPECT_THROW(annotations_from(R"({"sentence_id":"x1","annotator_id":"a","words":[{"word":"x","word_index":3}]})",
                                corpus),
               PositionOutOfRange);
  EXPECT_THROW(annotations_from(R"({"sentence_id":"zz","annotator_id":"a","words":[]})", corpus), UnknownSentence);
  EXPECT_THROW(annotations_from(R"({"sentence_id":"x1","annotator_id":"a","words":[]})"
                                "\n"
                                R"({"sentence_id":"x1","annotator_id":"a","words":[]})",
                                corpus),
               InvariantViolation);
}

TEST(Annotations, EveryWordIsContentWord) {
  const auto corpus = fixture_corpus();
  const auto config = default_config();
  const auto sets = load_annotations(mt::data_dir() / "annotations.jsonl", corpus, config);
  for (const auto& p : corpus) {
    for (const auto& entry : sets.at(p.id).annotations) {
      for (const auto& w : entry.words) {
        const auto& token = p.source_tokens.at(static_cast<std::size_t>(w.position));
        EXPECT_FALSE(config.is_stopword(token));
        EXPECT_FALSE(config.is_punctuation(token));
      }
    }
  }
}
