#include "mtgender/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <thread>

#include "mtgender/errors.hpp"

namespace mtg {
namespace {

bool is_pair_rejection(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const IdenticalTranslations&) {
    return true;
  } catch (const MisalignedPrefix&) {
    return true;
  } catch (...) {
    return false;
  }
}

std::string describe(const std::exception_ptr& error) {
  try {
    std::rethrow_exception(error);
  } catch (const std::exception& e) {
    return e.what();
  } catch (...) {
    return "unknown error";
  }
}

}  // namespace

AttributeOutcome run_attribute(const std::vector<SentencePair>& corpus, const CorpusConfig& config,
                               const AttributeOptions& options) {
  const std::size_t n = corpus.size();
  std::vector<std::optional<AttributionResult>> results(n);
  std::vector<std::exception_ptr> errors(n);

  std::optional<AttributionCache> cache;
  if (options.cache_dir) {
    cache.emplace(*options.cache_dir, backend_hash(options.backend_name, options.backend_version));
  }

  AttributeOutcome outcome;
  std::vector<std::size_t> misses;
  for (std::size_t i = 0; i < n; ++i) {
    if (cache) results[i] = cache->load(corpus[i], config.saliency_method);
    if (results[i]) {
      ++outcome.from_cache;
    } else {
      misses.push_back(i);
    }
  }

  if (!misses.empty()) {
    if (!options.factory) throw BackendFailure("no backend configured");
    const int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(misses.size())));
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
      std::unique_ptr<ModelBackend> backend;
      try {
        backend = options.factory();
      } catch (...) {
        // Attribute the failure to every sentence this worker would take.
        const auto error = std::current_exception();
        for (std::size_t k; (k = next.fetch_add(1)) < misses.size();) errors[misses[k]] = error;
        return;
      }
      for (std::size_t k; (k = next.fetch_add(1)) < misses.size();) {
        const std::size_t i = misses[k];
        try {
          results[i] = attribute_contrast(*backend, corpus[i], config.saliency_method);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
  }

  std::vector<bool> fresh(n, false);
  for (std::size_t i : misses) fresh[i] = true;

  // Single writer, corpus order.
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) {
      if (!options.strict && is_pair_rejection(errors[i])) {
        outcome.skipped.push_back(corpus[i].id + ": " + describe(errors[i]));
        continue;
      }
      std::rethrow_exception(errors[i]);
    }
    if (fresh[i]) {
      ++outcome.computed;
      if (cache) cache->store(corpus[i], config.saliency_method, *results[i]);
    }
    outcome.word_scores.push_back(prepare_word_scores(*results[i], corpus[i], config));
    outcome.attributions.push_back(*std::move(results[i]));
  }

  if (options.dump_dir) {
    std::filesystem::create_directories(*options.dump_dir);
    for (const auto& words : outcome.word_scores) {
      const auto path = *options.dump_dir / (sentence_file_stem(words.sentence_id) + ".csv");
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot write word scores for '" + words.sentence_id + "'");
      write_word_scores_csv(out, words);
    }
  }
  return outcome;
}

std::vector<WordScoreList> load_word_scores(const std::vector<SentencePair>& corpus, const CorpusConfig& config,
                                            const AttributionCache& cache, bool strict,
                                            std::vector<std::string>* skipped) {
  std::vector<WordScoreList> out;
  for (const auto& pair : corpus) {
    try {
      out.push_back(prepare_word_scores(cache.require(pair, config.saliency_method), pair, config));
    } catch (const MissingAttribution& e) {
      if (strict) throw;
      if (skipped) skipped->push_back(e.what());
    }
  }
  return out;
}

ParseMap parse_all(ParseBackend& backend, const std::vector<SentencePair>& corpus) {
  ParseMap parses;
  for (const auto& pair : corpus) parses.emplace(pair.id, backend.parse(pair));
  return parses;
}

AnalysisOutcome run_analyze(const std::vector<SentencePair>& corpus, const CorpusConfig& config,
                            const std::vector<WordScoreList>& word_scores,
                            const std::map<std::string, AnnotationSet>& annotations, const ParseMap* parses,
                            const AnalyzeOptions& options) {
  AnalysisOutcome outcome;
  outcome.has_parses = parses != nullptr;
  for (Approach approach : options.approaches) {
    std::vector<double> grid = config.grid(approach);
    if (options.grid && approach != Approach::kTopOne) grid = *options.grid;
    const auto swept = sweep(word_scores, approach, grid);

    std::map<AnnotationMode, std::vector<OverlapReport>> by_mode;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      ConfigurationAnalysis cfg;
      cfg.approach = approach;
      cfg.parameter = grid[g];
      cfg.selections = swept.at(g, word_scores);
      for (AnnotationMode mode : options.modes) {
        auto report = aggregate_overlap(cfg.selections, annotations, mode);
        report.approach = approach;
        report.parameter = grid[g];
        by_mode[mode].push_back(report);
        cfg.overlaps.push_back(std::move(report));
      }
      if (parses != nullptr) {
        cfg.pos = pos_distribution(cfg.selections, *parses);
        cfg.distances = distance_distribution(cfg.selections, *parses, corpus);
      }
      cfg.outliers = extract_outliers(cfg.selections, annotations, parses);
      outcome.configurations.push_back(std::move(cfg));
    }
    for (AnnotationMode mode : options.modes) {
      outcome.sweep_summary.push_back({approach, mode, grid.size(), sweep_statistics(by_mode[mode])});
    }
  }
  return outcome;
}

}  // namespace mtg
