#include "mtgender/thresholding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mtg {
namespace {

// Indices of entries best-first, ties by source position. Does not trust the
// list to be pre-sorted.
std::vector<std::size_t> ranking(const WordScoreList& words) {
  std::vector<std::size_t> order(words.entries.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = words.entries[a];
    const auto& y = words.entries[b];
    if (x.normalized_score != y.normalized_score) return x.normalized_score > y.normalized_score;
    return x.source_position < y.source_position;
  });
  return order;
}

SalientSelection empty_selection(const WordScoreList& words, Approach approach, double parameter) {
  SalientSelection s;
  s.sentence_id = words.sentence_id;
  s.approach = approach;
  s.parameter = parameter;
  return s;
}

void take(SalientSelection& s, const WordScoreList& words, std::span<const std::size_t> order, std::size_t k) {
  for (std::size_t i = 0; i < k && i < order.size(); ++i) {
    const auto& e = words.entries[order[i]];
    s.words.push_back({e.token, e.source_position});
  }
}

void require_percent(double percent) {
  if (!(percent > 0.0 && percent <= 100.0)) {
    throw std::invalid_argument("percent must lie in (0, 100], got " + std::to_string(percent));
  }
}

}  // namespace

SalientSelection select_top_percent(const WordScoreList& words, double percent) {
  require_percent(percent);
  auto s = empty_selection(words, Approach::kTopPercent, percent);
  const std::size_t n = words.entries.size();
  if (n == 0) return s;
  // The epsilon keeps exact products such as 15% of 20 from flooring to 2.
  const double exact = percent * static_cast<double>(n) / 100.0;
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(exact + 1e-9)));
  const auto order = ranking(words);
  take(s, words, order, std::min(k, n));
  return s;
}

SalientSelection select_top_one(const WordScoreList& words) {
  auto s = empty_selection(words, Approach::kTopOne, 1.0);
  const auto order = ranking(words);
  take(s, words, order, 1);
  return s;
}

SalientSelection select_min_score(const WordScoreList& words, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in (0, 1], got " + std::to_string(tau));
  }
  auto s = empty_selection(words, Approach::kMinScore, tau);
  for (std::size_t i : ranking(words)) {
    const auto& e = words.entries[i];
    if (e.normalized_score >= tau) s.words.push_back({e.token, e.source_position});
  }
  return s;
}

SalientSelection select_cumulative_budget(const WordScoreList& words, double percent) {
  require_percent(percent);
  auto s = empty_selection(words, Approach::kCumulativeBudget, percent);
  const auto order = ranking(words);
  // Summing in rank order makes the full prefix reproduce `total` exactly, so
  // percent = 100 stops at the last positive word.
  double total = 0.0;
  for (std::size_t i : order) total += words.entries[i].normalized_score;
  if (!(total > 0.0)) return s;
  const double budget = percent / 100.0 * total;
  double cumulative = 0.0;
  for (std::size_t i : order) {
    const auto& e = words.entries[i];
    cumulative += e.normalized_score;
    s.words.push_back({e.token, e.source_position});
    if (cumulative >= budget) break;
  }
  return s;
}

SalientSelection select(const WordScoreList& words, Approach approach, double parameter) {
  switch (approach) {
    case Approach::kTopPercent: return select_top_percent(words, parameter);
    case Approach::kTopOne: return select_top_one(words);
    case Approach::kMinScore: return select_min_score(words, parameter);
    case Approach::kCumulativeBudget: return select_cumulative_budget(words, parameter);
  }
  throw std::invalid_argument("unknown approach");
}

std::vector<SalientSelection> SweepResult::at(std::size_t index, std::span<const WordScoreList> corpus) const {
  std::vector<SalientSelection> out;
  out.reserve(corpus.size());
  for (const auto& words : corpus) out.push_back(selections.at({words.sentence_id, index}));
  return out;
}

SweepResult sweep(std::span<const WordScoreList> corpus, Approach approach, std::span<const double> grid) {
  SweepResult result;
  result.approach = approach;
  result.grid.assign(grid.begin(), grid.end());
  for (const auto& words : corpus) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      result.selections.emplace(std::make_pair(words.sentence_id, g), select(words, approach, grid[g]));
    }
  }
  return result;
}

}  // namespace mtg
