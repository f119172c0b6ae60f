#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mtgender/types.hpp"

namespace mtg {

struct AgreementFilter {
  int min_annotators = 1;
};

AgreementFilter agreement_filter(AnnotationMode mode);

// Words marked by at least filter.min_annotators distinct annotators, keyed by
// position. The surface is taken from the first annotator marking it.
std::set<WordRef> annotated_word_set(const AnnotationSet& annotations, AgreementFilter filter);

// True iff some selected position is also annotated.
bool sentence_overlap(const SalientSelection& selection, const std::set<WordRef>& annotated);

// |S ∩ A| / |S ∪ A| over positions; 0 when both are empty.
double jaccard(const SalientSelection& selection, const std::set<WordRef>& annotated);

struct OverlapReport {
  Approach approach = Approach::kTopPercent;
  double parameter = 0.0;
  AnnotationMode mode = AnnotationMode::kAll;
  // Only sentences counted in the denominator.
  std::map<std::string, bool> per_sentence;
  double percentage = 0.0;
  int denominator = 0;
  // Ineligible sentences, listed for auditing.
  std::vector<std::string> excluded;
  double jaccard_mean = 0.0;
  // Surface mismatches between selected and annotated words at one position.
  std::vector<std::string> warnings;
};

// Percentage of eligible sentences whose selection overlaps the annotations
// kept by `mode`. A sentence is eligible when its selection is non-empty and
// at least one annotator marked a word; eligibility ignores the mode, so the
// min-two-agree percentage never exceeds the all-annotations one. Sentences
// without an annotation entry are not eligible.
OverlapReport aggregate_overlap(std::span<const SalientSelection> selections,
                                const std::map<std::string, AnnotationSet>& annotations, AnnotationMode mode);

struct SweepStatistics {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double best_parameter = 0.0;
  double best_percentage = 0.0;
};

// Over the grid of one approach and mode; the first maximum wins ties.
SweepStatistics sweep_statistics(std::span<const OverlapReport> reports);

}  // namespace mtg
