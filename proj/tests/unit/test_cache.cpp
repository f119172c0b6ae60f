#include <gtest/gtest.h>

#include "mtgender/cache.hpp"
#include "mtgender/errors.hpp"
#include "mtgender/mock_backend.hpp"
#include "test_util.hpp"

using namespace mtg;
namespace mt = mtg::testing;

namespace {

SentencePair pair_named(const std::string& id) {
  return mt::simple_pair(id, "Yesterday the counselor explained everything", "counselor",
                         "Gestern erklärte der Berater alles", "Gestern erklärte die Beraterin alles");
}

}  // namespace

TEST(CacheJson, RoundTripIsExact) {
  MockBackend backend(4);
  const auto r = attribute_contrast(backend, pair_named("j1"));
  std::string key;
  const auto back = attribution_from_json(attribution_to_json(r, "k123"), &key);
  EXPECT_EQ(back, r);
  EXPECT_EQ(key, "k123");
  EXPECT_THROW(attribution_from_json("{}"), SchemaError);
  EXPECT_THROW(attribution_from_json("not json"), SchemaError);
}

TEST(AttributionCache, StoreLoadAndKeyMismatch) {
  mt::TempDir dir("cache");
  const AttributionCache cache(dir.path(), backend_hash("mock", "1-seed0"));
  MockBackend backend(0);
  const auto pair = pair_named("p/1 ü");
  EXPECT_FALSE(cache.load(pair, SaliencyMethod::kGradientL2));
  EXPECT_THROW(cache.require(pair, SaliencyMethod::kGradientL2), MissingAttribution);

  const auto r = attribute_contrast(backend, pair);
  cache.store(pair, SaliencyMethod::kGradientL2, r);
  EXPECT_EQ(cache.entry_path(pair.id).parent_path(), cache.directory());
  EXPECT_EQ(cache.directory().parent_path(), dir.path());
  EXPECT_TRUE(std::filesystem::exists(cache.entry_path(pair.id)));
  EXPECT_EQ(cache.entry_path(pair.id).filename().string().find('/'), std::string::npos);
  EXPECT_EQ(cache.load(pair, SaliencyMethod::kGradientL2), r);

  // Any change to the inputs is a miss.
  EXPECT_FALSE(cache.load(pair, SaliencyMethod::kGradientTimesInput));
  auto edited = pair;
  edited.contrastive_translation = "Gestern erklärte die Beraterin es";
  EXPECT_FALSE(cache.load(edited, SaliencyMethod::kGradientL2));
  try {
    cache.require(edited, SaliencyMethod::kGradientL2);
    FAIL();
  } catch (const MissingAttribution& e) {
    EXPECT_EQ(e.sentence_id(), pair.id);
  }
}

TEST(AttributionCache, BackendHashSeparatesVersions) {
  EXPECT_NE(backend_hash("mock", "1-seed0"), backend_hash("mock", "1-seed1"));
  EXPECT_NE(backend_hash("mock", "1"), backend_hash("mock1", ""));
  EXPECT_EQ(backend_hash("mock", "1-seed0"), backend_hash("mock", "1-seed0"));
}

TEST(AttributionCache, FileStemsAreSafeAndDistinct) {
  EXPECT_EQ(sentence_file_stem("s01"), "s01");
  EXPECT_EQ(sentence_file_stem("a/b"), "a%2Fb");
  EXPECT_EQ(sentence_file_stem(".."), "%2E.");
  EXPECT_NE(sentence_file_stem("a b"), sentence_file_stem("a_b"));
}
