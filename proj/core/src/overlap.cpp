#include "mtgender/overlap.hpp"

#include <cmath>

#include "mtgender/unicode.hpp"

namespace mtg {

AgreementFilter agreement_filter(AnnotationMode mode) {
  return {mode == AnnotationMode::kAll ? 1 : 2};
}

std::set<WordRef> annotated_word_set(const AnnotationSet& annotations, AgreementFilter filter) {
  std::map<int, std::set<std::string>> annotators_by_position;
  std::map<int, std::string> surface;
  for (const auto& entry : annotations.annotations) {
    for (const auto& word : entry.words) {
      annotators_by_position[word.position].insert(entry.annotator_id);
      surface.try_emplace(word.position, word.word);
    }
  }
  std::set<WordRef> out;
  for (const auto& [position, who] : annotators_by_position) {
    if (static_cast<int>(who.size()) >= filter.min_annotators) out.insert({surface[position], position});
  }
  return out;
}

bool sentence_overlap(const SalientSelection& selection, const std::set<WordRef>& annotated) {
  for (const auto& a : annotated) {
    if (selection.contains_position(a.position)) return true;
  }
  return false;
}

double jaccard(const SalientSelection& selection, const std::set<WordRef>& annotated) {
  std::set<int> s;
  std::set<int> a;
  for (const auto& w : selection.words) s.insert(w.position);
  for (const auto& w : annotated) a.insert(w.position);
  std::size_t inter = 0;
  for (int p : s) inter += a.count(p);
  const std::size_t uni = s.size() + a.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

OverlapReport aggregate_overlap(std::span<const SalientSelection> selections,
                                const std::map<std::string, AnnotationSet>& annotations, AnnotationMode mode) {
  OverlapReport report;
  report.mode = mode;
  if (!selections.empty()) {
    report.approach = selections.front().approach;
    report.parameter = selections.front().parameter;
  }
  const auto filter = agreement_filter(mode);
  int hits = 0;
  double jaccard_sum = 0.0;
  for (const auto& sel : selections) {
    std::set<WordRef> annotated;
    std::set<WordRef> any_annotated;
    if (const auto it = annotations.find(sel.sentence_id); it != annotations.end()) {
      annotated = annotated_word_set(it->second, filter);
      any_annotated = annotated_word_set(it->second, AgreementFilter{1});
    }
    // Eligibility uses the unfiltered annotations so that every mode shares
    // one denominator for a given selection.
    if (sel.words.empty() || any_annotated.empty()) {
      report.excluded.push_back(sel.sentence_id);
      continue;
    }
    for (const auto& w : sel.words) {
      for (const auto& a : annotated) {
        if (a.position == w.position && unicode::ascii_lower(a.word) != unicode::ascii_lower(w.word)) {
          report.warnings.push_back("sentence '" + sel.sentence_id + "' position " + std::to_string(w.position) +
                                    ": selected '" + w.word + "' but annotated '" + a.word + "'");
        }
      }
    }
    const bool hit = sentence_overlap(sel, annotated);
    report.per_sentence[sel.sentence_id] = hit;
    hits += hit ? 1 : 0;
    jaccard_sum += jaccard(sel, annotated);
    ++report.denominator;
  }
  if (report.denominator > 0) {
    report.percentage = 100.0 * hits / report.denominator;
    report.jaccard_mean = jaccard_sum / report.denominator;
  }
  return report;
}

SweepStatistics sweep_statistics(std::span<const OverlapReport> reports) {
  SweepStatistics stats;
  if (reports.empty()) return stats;
  double sum = 0.0;
  stats.best_parameter = reports.front().parameter;
  stats.best_percentage = reports.front().percentage;
  for (const auto& r : reports) {
    sum += r.percentage;
    if (r.percentage > stats.best_percentage) {
      stats.best_percentage = r.percentage;
      stats.best_parameter = r.parameter;
    }
  }
  const double n = static_cast<double>(reports.size());
  stats.mean = sum / n;
  double ss = 0.0;
  for (const auto& r : reports) ss += (r.percentage - stats.mean) * (r.percentage - stats.mean);
  stats.stddev = std::sqrt(ss / n);
  return stats;
}

}  // namespace mtg
