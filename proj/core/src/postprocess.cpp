#include "mtgender/postprocess.hpp"

#include <algorithm>
#include <numeric>

#include "mtgender/csv.hpp"
#include "mtgender/errors.hpp"
#include "mtgender/unicode.hpp"

namespace mtg {
namespace {

constexpr std::string_view kWordStart = "\xE2\x96\x81";  // U+2581

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace

std::string_view to_string(RemovalReason reason) {
  switch (reason) {
    case RemovalReason::kReferent: return "REFERENT";
    case RemovalReason::kEos: return "EOS";
    case RemovalReason::kPunct: return "PUNCT";
    case RemovalReason::kStopword: return "STOPWORD";
  }
  return "EOS";
}

double WordScoreList::total() const {
  double sum = 0.0;
  for (const auto& e : entries) sum += e.normalized_score;
  return sum;
}

void sort_entries(std::vector<TokenAttribution>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const TokenAttribution& a, const TokenAttribution& b) {
    if (a.normalized_score != b.normalized_score) return a.normalized_score > b.normalized_score;
    return a.source_position < b.source_position;
  });
}

AttributionResult normalize(AttributionResult result) {
  double sum = 0.0;
  for (const auto& s : result.source_scores) sum += s.raw_score;
  if (!(sum > 0.0)) {
    throw AllZeroScores("sentence '" + result.sentence_id + "': source attributions sum to zero");
  }
  for (auto& s : result.source_scores) s.normalized_score = s.raw_score / sum;
  return result;
}

bool is_special_token(std::string_view token) {
  return token == "</s>" || token == "<s>" || token == "<pad>" || token == "<eos>" || token == "<bos>" ||
         token == "[SEP]" || token == "[CLS]" || token == "[PAD]";
}

std::string strip_subword_markers(std::string_view token) {
  while (starts_with(token, kWordStart)) token.remove_prefix(kWordStart.size());
  if (starts_with(token, "##")) token.remove_prefix(2);
  if (token.size() >= 2 && token.substr(token.size() - 2) == "@@") token.remove_suffix(2);
  return std::string(token);
}

WordScoreList merge_subwords(const AttributionResult& result, std::string_view source_text) {
  const auto words = whitespace_tokenize(source_text);
  std::vector<std::u32string> chars;
  for (const auto& w : words) chars.push_back(unicode::decode_utf8(w));

  WordScoreList out;
  out.sentence_id = result.sentence_id;
  std::vector<TokenAttribution> merged(words.size());
  for (std::size_t w = 0; w < words.size(); ++w) merged[w] = {words[w], static_cast<int>(w), 0.0, 0.0};
  std::vector<TokenAttribution> specials;

  auto fail = [&](const std::string& why) {
    throw AlignmentError("sentence '" + result.sentence_id + "': " + why);
  };

  const auto& tokens = result.source_scores;
  std::size_t w = 0;        // current word
  std::size_t offset = 0;   // code points of word w consumed so far
  double pending_raw = 0.0;  // bare word-start markers, credited to the next word
  double pending_norm = 0.0;

  auto credit = [&](std::size_t word, const TokenAttribution& t) {
    merged[word].raw_score += t.raw_score + pending_raw;
    merged[word].normalized_score += t.normalized_score + pending_norm;
    pending_raw = pending_norm = 0.0;
  };
  auto next_text = [&](std::size_t from) -> std::u32string {
    for (std::size_t k = from; k < tokens.size(); ++k) {
      if (is_special_token(tokens[k].token)) return {};
      auto t = strip_subword_markers(tokens[k].token);
      if (!t.empty() && t != "<unk>") return unicode::decode_utf8(t);
    }
    return {};
  };

  for (std::size_t k = 0; k < tokens.size(); ++k) {
    const auto& tok = tokens[k];
    if (is_special_token(tok.token)) {
      specials.push_back({tok.token, kSpecialTokenPosition, tok.raw_score, tok.normalized_score});
      continue;
    }
    const std::string text = strip_subword_markers(tok.token);
    if (text.empty()) {
      pending_raw += tok.raw_score;
      pending_norm += tok.normalized_score;
      continue;
    }
    if (w >= words.size()) fail("token '" + tok.token + "' extends past the last source word");
    const std::u32string& word = chars[w];
    const std::size_t remaining = word.size() - offset;

    if (text == "<unk>") {
      // Consume the fewest characters after which the next token fits; if
      // none fits, the unknown piece runs to the end of the word.
      const std::u32string next = next_text(k + 1);
      std::size_t take = remaining;
      for (std::size_t n = 1; n < remaining && !next.empty(); ++n) {
        if (word.compare(offset + n, next.size(), next) == 0) {
          take = n;
          break;
        }
      }
      if (take == 0) fail("'<unk>' at the end of word '" + words[w] + "'");
      credit(w, tok);
      offset += take;
    } else {
      const std::u32string piece = unicode::decode_utf8(text);
      if (piece.size() > remaining || word.compare(offset, piece.size(), piece) != 0) {
        fail("token '" + tok.token + "' does not continue word '" + words[w] + "' at offset " +
             std::to_string(offset));
      }
      credit(w, tok);
      offset += piece.size();
    }
    if (offset == word.size()) {
      ++w;
      offset = 0;
    }
  }
  if (w != words.size() || offset != 0) {
    fail("model tokens cover only " + std::to_string(w) + " of " + std::to_string(words.size()) + " words");
  }
  if (pending_raw != 0.0 || pending_norm != 0.0) {
    if (words.empty()) fail("no source words");
    merged.back().raw_score += pending_raw;
    merged.back().normalized_score += pending_norm;
  }

  out.entries = std::move(merged);
  out.entries.insert(out.entries.end(), specials.begin(), specials.end());
  sort_entries(out.entries);
  return out;
}

WordScoreList filter_words(WordScoreList words, const SentencePair& pair, const CorpusConfig& config) {
  std::vector<TokenAttribution> kept;
  for (auto& e : words.entries) {
    std::optional<RemovalReason> reason;
    if (e.source_position == pair.referent.word_index) {
      reason = RemovalReason::kReferent;
    } else if (e.source_position == kSpecialTokenPosition || is_special_token(e.token)) {
      reason = RemovalReason::kEos;
    } else if (config.is_punctuation(e.token)) {
      reason = RemovalReason::kPunct;
    } else if (config.is_stopword(e.token)) {
      reason = RemovalReason::kStopword;
    }
    if (reason) {
      words.removed.push_back({e.token, e.source_position, *reason, e.normalized_score});
    } else {
      kept.push_back(std::move(e));
    }
  }
  words.entries = std::move(kept);
  return words;
}

WordScoreList prepare_word_scores(const AttributionResult& result, const SentencePair& pair,
                                  const CorpusConfig& config) {
  return filter_words(merge_subwords(normalize(result), pair.source_text), pair, config);
}

void write_word_scores_csv(std::ostream& out, const WordScoreList& words) {
  csv::write_row(out, {"word", "position", "score", "removed_reason"});
  for (const auto& e : words.entries) {
    csv::write_row(out, {e.token, std::to_string(e.source_position), csv::number(e.normalized_score), ""});
  }
  for (const auto& r : words.removed) {
    csv::write_row(out, {r.word, std::to_string(r.position), csv::number(r.score), std::string(to_string(r.reason))});
  }
}

}  // namespace mtg
