#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/types.hpp"

namespace mtg {

// Target-side tokenizer of the MT model.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::vector<std::string> tokenize(std::string_view text) const = 0;
};

std::size_t common_prefix_length(std::span<const std::string> a, std::span<const std::string> b);

// Left-aligns the two tokenized translations and returns the first differing
// token. Throws IdenticalTranslations when no token differs, MisalignedPrefix
// when the pair claims a non-empty shared prefix but the first tokens differ.
ContrastPoint validate_pair(const SentencePair& pair, const Tokenizer& tokenizer);

// A maximal region where the two token sequences disagree, as half-open
// ranges into each sequence. One side may be empty (pure insertion).
struct DiffSpan {
  std::size_t original_begin = 0;
  std::size_t original_end = 0;
  std::size_t contrastive_begin = 0;
  std::size_t contrastive_end = 0;

  bool operator==(const DiffSpan&) const = default;
};

// Regions outside a longest common subsequence. Ties between equally long
// alignments are broken on token text, so swapping the inputs swaps the
// ranges of every span and nothing else.
std::vector<DiffSpan> diff_regions(std::span<const std::string> original,
                                   std::span<const std::string> contrastive);

enum class PairStatus { kOk, kMultiDiffRegion, kEmptyPrefixOk, kRejected };

std::string_view to_string(PairStatus status);

struct PairDiagnostic {
  std::string sentence_id;
  PairStatus status = PairStatus::kRejected;
  std::vector<DiffSpan> diff_spans;

  // Everything except REJECTED can be attributed.
  bool accepted() const { return status != PairStatus::kRejected; }
};

PairDiagnostic diagnose_pair(const SentencePair& pair, const Tokenizer& tokenizer);

struct DiagnosticsSummary {
  std::vector<PairDiagnostic> rows;
  std::map<PairStatus, int> counts;
  std::vector<std::string> rejected_ids;

  bool blocking(bool strict) const { return strict && !rejected_ids.empty(); }
};

DiagnosticsSummary corpus_diagnostics(std::span<const SentencePair> pairs, const Tokenizer& tokenizer);

}  // namespace mtg
