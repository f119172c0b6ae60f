#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mtgender/postprocess.hpp"
#include "mtgender/types.hpp"

namespace mtg {

// Approach 1: the k = max(1, floor(percent/100 * n)) best words.
// Requires 0 < percent <= 100; throws std::invalid_argument otherwise.
SalientSelection select_top_percent(const WordScoreList& words, double percent);

// Approach 2: the single best word, or nothing for an empty list.
SalientSelection select_top_one(const WordScoreList& words);

// Approach 3: every word scoring at least tau. Requires 0 < tau <= 1.
SalientSelection select_min_score(const WordScoreList& words, double tau);

// Approach 4: the shortest best-first prefix whose summed score reaches
// percent/100 of the sentence total. Requires 0 < percent <= 100.
SalientSelection select_cumulative_budget(const WordScoreList& words, double percent);

// Dispatch; `parameter` is ignored for approach 2.
SalientSelection select(const WordScoreList& words, Approach approach, double parameter);

struct SweepResult {
  Approach approach = Approach::kTopPercent;
  std::vector<double> grid;
  // Keyed by (sentence id, grid index).
  std::map<std::pair<std::string, std::size_t>, SalientSelection> selections;

  // One selection per sentence at grid[index], in corpus order.
  std::vector<SalientSelection> at(std::size_t index, std::span<const WordScoreList> corpus) const;
};

SweepResult sweep(std::span<const WordScoreList> corpus, Approach approach, std::span<const double> grid);

}  // namespace mtg
