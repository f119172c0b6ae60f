#include "mtgender/contrast.hpp"

#include <algorithm>

#include "mtgender/errors.hpp"

namespace mtg {

std::size_t common_prefix_length(std::span<const std::string> a, std::span<const std::string> b) {
  const auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
  return static_cast<std::size_t>(ia - a.begin());
}

ContrastPoint validate_pair(const SentencePair& pair, const Tokenizer& tokenizer) {
  const auto original = tokenizer.tokenize(pair.mt_translation);
  const auto contrastive = tokenizer.tokenize(pair.contrastive_translation);
  if (original.empty() || contrastive.empty()) {
    throw InvariantViolation("both translations must tokenize non-empty", pair.id);
  }
  const std::size_t prefix = common_prefix_length(original, contrastive);
  if (prefix == original.size() && prefix == contrastive.size()) {
    throw IdenticalTranslations("sentence '" + pair.id +
                                "': translations tokenize identically, no contrast point");
  }
  if (prefix == original.size() || prefix == contrastive.size()) {
    // One translation is a strict token prefix of the other; there is no
    // differing token on one side to contrast against.
    throw IdenticalTranslations("sentence '" + pair.id +
                                "': one translation is a token prefix of the other");
  }
  if (prefix == 0 && pair.claimed_prefix_length.value_or(0) > 0) {
    throw MisalignedPrefix("sentence '" + pair.id + "': first tokens differ but pair claims a " +
                           std::to_string(*pair.claimed_prefix_length) + "-token shared prefix");
  }
  ContrastPoint point;
  point.shared_prefix.assign(original.begin(), original.begin() + static_cast<std::ptrdiff_t>(prefix));
  point.original_token = original[prefix];
  point.contrastive_token = contrastive[prefix];
  point.target_position = static_cast<int>(prefix);
  return point;
}

std::vector<DiffSpan> diff_regions(std::span<const std::string> original,
                                   std::span<const std::string> contrastive) {
  const std::size_t n = original.size();
  const std::size_t m = contrastive.size();
  // lcs[i][j] = LCS length of original[i:] and contrastive[j:].
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      lcs[i][j] = original[i] == contrastive[j] ? lcs[i + 1][j + 1] + 1
                                                : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  std::vector<DiffSpan> spans;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t region_i = 0;
  std::size_t region_j = 0;
  bool in_region = false;
  auto close_region = [&]() {
    if (in_region) spans.push_back({region_i, i, region_j, j});
    in_region = false;
  };
  auto open_region = [&]() {
    if (!in_region) {
      region_i = i;
      region_j = j;
      in_region = true;
    }
  };
  while (i < n || j < m) {
    if (i < n && j < m && original[i] == contrastive[j]) {
      close_region();
      ++i;
      ++j;
      continue;
    }
    open_region();
    if (i == n) {
      ++j;
    } else if (j == m) {
      ++i;
    } else if (lcs[i + 1][j] != lcs[i][j + 1]) {
      if (lcs[i + 1][j] > lcs[i][j + 1]) ++i; else ++j;
    } else if (original[i] < contrastive[j]) {
      // Both skips keep an optimal alignment; skip the smaller token first.
      ++i;
    } else {
      ++j;
    }
  }
  close_region();
  return spans;
}

std::string_view to_string(PairStatus status) {
  switch (status) {
    case PairStatus::kOk: return "OK";
    case PairStatus::kMultiDiffRegion: return "MULTI_DIFF_REGION";
    case PairStatus::kEmptyPrefixOk: return "EMPTY_PREFIX_OK";
    case PairStatus::kRejected: return "REJECTED";
  }
  return "REJECTED";
}

PairDiagnostic diagnose_pair(const SentencePair& pair, const Tokenizer& tokenizer) {
  PairDiagnostic diag;
  diag.sentence_id = pair.id;
  const auto original = tokenizer.tokenize(pair.mt_translation);
  const auto contrastive = tokenizer.tokenize(pair.contrastive_translation);
  diag.diff_spans = diff_regions(original, contrastive);

  const std::size_t prefix = common_prefix_length(original, contrastive);
  const bool has_contrast_token = prefix < original.size() && prefix < contrastive.size();
  const bool claim_broken = prefix == 0 && pair.claimed_prefix_length.value_or(0) > 0;
  if (diag.diff_spans.empty() || !has_contrast_token || claim_broken) {
    diag.status = PairStatus::kRejected;
  } else if (diag.diff_spans.size() > 1) {
    diag.status = PairStatus::kMultiDiffRegion;
  } else if (prefix == 0) {
    diag.status = PairStatus::kEmptyPrefixOk;
  } else {
    diag.status = PairStatus::kOk;
  }
  return diag;
}

DiagnosticsSummary corpus_diagnostics(std::span<const SentencePair> pairs, const Tokenizer& tokenizer) {
  DiagnosticsSummary summary;
  for (const auto& pair : pairs) {
    auto diag = diagnose_pair(pair, tokenizer);
    ++summary.counts[diag.status];
    if (diag.status == PairStatus::kRejected) summary.rejected_ids.push_back(pair.id);
    summary.rows.push_back(std::move(diag));
  }
  return summary;
}

}  // namespace mtg
