// mtgender: contrastive saliency analysis of gendered MT output.
//
//   mtgender attribute --corpus c.jsonl [--backend mock|real] ...
//   mtgender analyze   --corpus c.jsonl --annotations a.jsonl ...
//   mtgender report    --out-dir out [--format svg|csv-only]
//   mtgender all       --corpus c.jsonl --annotations a.jsonl ...
//   mtgender validate  --corpus c.jsonl [--strict|--lenient]
//
// Exit status: 0 success, 1 pipeline error, 2 usage error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mtgender/cache.hpp"
#include "mtgender/contrast.hpp"
#include "mtgender/errors.hpp"
#include "mtgender/external_backend.hpp"
#include "mtgender/ingestion.hpp"
#include "mtgender/mock_backend.hpp"
#include "mtgender/pipeline.hpp"
#include "mtgender/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string corpus;
  std::string annotations;
  std::string config;
  std::string backend = "mock";
  std::string model_id = "Helsinki-NLP/opus-mt-en-de";
  std::string cache_dir;
  bool no_cache = false;
  std::string approach = "all";
  std::string grid;
  std::string mode;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::string format = "svg";
  std::string parse_cache;
  std::string dump_wordscores;
  bool strict = true;
  int jobs = 1;
};

// Bad flag values found after CLI11 has parsed.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Tags pipeline errors with the stage that raised them.
class Stage {
 public:
  void enter(std::string name) { name_ = std::move(name); }
  const std::string& name() const { return name_; }

 private:
  std::string name_ = "setup";
};

struct BackendChoice {
  mtg::BackendFactory factory;
  std::string name;
  std::string version;
};

std::vector<std::string> real_backend_command(const Options& o) {
  if (const char* env = std::getenv("MTGENDER_BACKEND_CMD"); env != nullptr && *env != '\0') {
    std::istringstream in(env);
    std::vector<std::string> command;
    for (std::string part; in >> part;) command.push_back(part);
    command.insert(command.end(), {"--model-id", o.model_id});
    return command;
  }
  return {"python3", MTGENDER_HF_BACKEND_SCRIPT, "--model-id", o.model_id};
}

BackendChoice choose_backend(const Options& o) {
  BackendChoice choice;
  if (o.backend == "mock") {
    const auto seed = o.seed;
    choice.factory = [seed] { return mtg::mock_backend(seed); };
  } else {
    const auto command = real_backend_command(o);
    choice.factory = [command] { return std::make_unique<mtg::ExternalProcessBackend>(command); };
  }
  const auto probe = choice.factory();
  choice.name = probe->name();
  choice.version = probe->version();
  return choice;
}

fs::path cache_root(const Options& o) {
  return o.cache_dir.empty() ? fs::path(o.out_dir) / "cache" : fs::path(o.cache_dir);
}

mtg::CorpusConfig load_config(const Options& o) {
  return o.config.empty() ? mtg::default_config() : mtg::load_config(o.config);
}

std::vector<mtg::Approach> parse_approaches(const std::string& text) {
  if (text == "all") {
    return {mtg::Approach::kTopPercent, mtg::Approach::kTopOne, mtg::Approach::kMinScore,
            mtg::Approach::kCumulativeBudget};
  }
  return {*mtg::approach_from_number(std::stoi(text))};
}

std::optional<std::vector<double>> parse_grid(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<double> grid;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !(value > 0.0)) {
      throw UsageError("--grid: '" + item + "' is not a positive number");
    }
    grid.push_back(value);
  }
  if (grid.empty()) throw UsageError("--grid: empty list");
  return grid;
}

void print_corpus_stats(const std::vector<mtg::SentencePair>& corpus) {
  const auto s = mtg::corpus_stats(corpus);
  fmt::print("corpus: {} sentences, {} unique referents, {:.2f} ± {:.2f} words per sentence\n", s.sentences,
             s.unique_referents, s.mean_words, s.std_words);
  fmt::print("MT output gender: {:.2f}% masculine, {:.2f}% feminine\n", s.masculine_pct, s.feminine_pct);
}

mtg::RunManifest start_manifest(const std::string& command, const Options& o) {
  mtg::RunManifest m;
  m.command = command;
  m.config_hash = o.config.empty() ? "default" : mtg::hash_file(o.config);
  m.corpus_hash = o.corpus.empty() ? "" : mtg::hash_file(o.corpus);
  m.timestamp = mtg::utc_timestamp();
  return m;
}

void finish_manifest(mtg::RunManifest m, const Options& o, const std::vector<fs::path>& outputs) {
  for (const auto& p : outputs) m.outputs.push_back(p.string());
  fs::create_directories(o.out_dir);
  mtg::write_manifest(fs::path(o.out_dir) / "manifest.json", m);
}

struct AttributeStep {
  std::vector<mtg::WordScoreList> word_scores;
  std::vector<fs::path> outputs;
};

AttributeStep attribute_step(const Options& o, const std::vector<mtg::SentencePair>& corpus,
                             const mtg::CorpusConfig& config, const BackendChoice& backend, Stage& stage) {
  stage.enter("attribute");
  mtg::AttributeOptions opts;
  opts.factory = backend.factory;
  opts.backend_name = backend.name;
  opts.backend_version = backend.version;
  if (!o.no_cache) opts.cache_dir = cache_root(o);
  opts.dump_dir = o.dump_wordscores.empty() ? fs::path(o.out_dir) / "wordscores" : fs::path(o.dump_wordscores);
  opts.jobs = o.jobs;
  opts.strict = o.strict;
  auto outcome = mtg::run_attribute(corpus, config, opts);

  fmt::print("attributed {} sentences ({} computed, {} from cache)\n", outcome.attributions.size(),
             outcome.computed, outcome.from_cache);
  for (const auto& s : outcome.skipped) fmt::print("skipped {}\n", s);

  AttributeStep step;
  for (const auto& w : outcome.word_scores) {
    step.outputs.push_back(*opts.dump_dir / (mtg::sentence_file_stem(w.sentence_id) + ".csv"));
  }
  if (opts.cache_dir) {
    step.outputs.push_back(mtg::AttributionCache(*opts.cache_dir, mtg::backend_hash(backend.name, backend.version))
                               .directory());
  }
  step.word_scores = std::move(outcome.word_scores);
  return step;
}

std::vector<fs::path> analyze_step(const Options& o, const std::vector<mtg::SentencePair>& corpus,
                                   const mtg::CorpusConfig& config, const std::vector<mtg::WordScoreList>& word_scores,
                                   Stage& stage) {
  stage.enter("annotations");
  const auto annotations = mtg::load_annotations(o.annotations, corpus, config);

  std::optional<mtg::ParseMap> parses;
  if (!o.parse_cache.empty()) {
    stage.enter("parse");
    auto backend = mtg::ParseCacheBackend::load(o.parse_cache);
    parses = mtg::parse_all(backend, corpus);
  }

  stage.enter("analyze");
  mtg::AnalyzeOptions opts;
  opts.approaches = parse_approaches(o.approach);
  opts.grid = parse_grid(o.grid);
  if (!o.mode.empty()) opts.modes = {*mtg::parse_annotation_mode(o.mode)};
  const auto analysis =
      mtg::run_analyze(corpus, config, word_scores, annotations, parses ? &*parses : nullptr, opts);
  for (const auto& row : analysis.sweep_summary) {
    fmt::print("approach {} [{}]: best {}% at {}, sweep mean {}% std {}\n", static_cast<int>(row.approach),
               mtg::to_string(row.mode), mtg::format_percent(row.stats.best_percentage),
               mtg::format_parameter(row.stats.best_parameter), mtg::format_percent(row.stats.mean),
               mtg::format_percent(row.stats.stddev));
  }
  for (const auto& cfg : analysis.configurations) {
    for (const auto& r : cfg.overlaps) {
      for (const auto& w : r.warnings) fmt::print(stderr, "warning: {}\n", w);
    }
  }
  return mtg::write_analysis(analysis, o.out_dir);
}

mtg::ReportFormat report_format(const Options& o) {
  return o.format == "csv-only" ? mtg::ReportFormat::kCsvOnly : mtg::ReportFormat::kSvg;
}

void require_flag(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

int cmd_attribute(const Options& o, Stage& stage) {
  auto manifest = start_manifest("attribute", o);
  stage.enter("load");
  const auto config = load_config(o);
  const auto corpus = mtg::load_corpus(o.corpus);
  print_corpus_stats(corpus);
  stage.enter("backend");
  const auto backend = choose_backend(o);
  manifest.backend_id = backend.name;
  manifest.backend_version = backend.version;
  const auto step = attribute_step(o, corpus, config, backend, stage);
  finish_manifest(manifest, o, step.outputs);
  return 0;
}

int cmd_analyze(const Options& o, Stage& stage) {
  require_flag(o.annotations, "--annotations");
  parse_grid(o.grid);  // reject a bad --grid before any work
  if (o.no_cache) throw UsageError("analyze reads attributions from the cache; drop --no-cache");
  auto manifest = start_manifest("analyze", o);
  stage.enter("load");
  const auto config = load_config(o);
  const auto corpus = mtg::load_corpus(o.corpus);
  stage.enter("backend");
  const auto backend = choose_backend(o);
  manifest.backend_id = backend.name;
  manifest.backend_version = backend.version;
  stage.enter("cache");
  const mtg::AttributionCache cache(cache_root(o), mtg::backend_hash(backend.name, backend.version));
  std::vector<std::string> skipped;
  const auto word_scores = mtg::load_word_scores(corpus, config, cache, o.strict, &skipped);
  for (const auto& s : skipped) fmt::print("skipped {}\n", s);
  finish_manifest(manifest, o, analyze_step(o, corpus, config, word_scores, stage));
  return 0;
}

int cmd_report(const Options& o, Stage& stage) {
  auto manifest = start_manifest("report", o);
  stage.enter("report");
  const auto outputs = mtg::write_report(o.out_dir, report_format(o));
  for (const auto& p : outputs) fmt::print("wrote {}\n", p.string());
  finish_manifest(manifest, o, outputs);
  return 0;
}

int cmd_all(const Options& o, Stage& stage) {
  require_flag(o.annotations, "--annotations");
  parse_grid(o.grid);
  auto manifest = start_manifest("all", o);
  stage.enter("load");
  const auto config = load_config(o);
  const auto corpus = mtg::load_corpus(o.corpus);
  print_corpus_stats(corpus);
  stage.enter("backend");
  const auto backend = choose_backend(o);
  manifest.backend_id = backend.name;
  manifest.backend_version = backend.version;
  auto step = attribute_step(o, corpus, config, backend, stage);
  auto outputs = std::move(step.outputs);
  for (auto& p : analyze_step(o, corpus, config, step.word_scores, stage)) outputs.push_back(std::move(p));
  stage.enter("report");
  for (auto& p : mtg::write_report(o.out_dir, report_format(o))) outputs.push_back(std::move(p));
  finish_manifest(manifest, o, outputs);
  return 0;
}

int cmd_validate(const Options& o, Stage& stage) {
  stage.enter("load");
  const auto corpus = mtg::load_corpus(o.corpus);
  stage.enter("backend");
  const auto backend = choose_backend(o).factory();
  stage.enter("validate");
  const mtg::TargetTokenizer tokenizer(*backend);
  const auto summary = mtg::corpus_diagnostics(corpus, tokenizer);
  fmt::print("{:<24} {:<18} {}\n", "sentence_id", "status", "diff_spans");
  for (const auto& row : summary.rows) {
    std::string spans;
    for (const auto& d : row.diff_spans) {
      spans += fmt::format("{}[{},{})/[{},{})", spans.empty() ? "" : " ", d.original_begin, d.original_end,
                           d.contrastive_begin, d.contrastive_end);
    }
    fmt::print("{:<24} {:<18} {}\n", row.sentence_id, mtg::to_string(row.status), spans);
  }
  for (const auto& [status, count] : summary.counts) fmt::print("{}: {}\n", mtg::to_string(status), count);
  for (const auto& id : summary.rejected_ids) fmt::print("rejected: {}\n", id);
  if (summary.blocking(o.strict)) {
    fmt::print(stderr, "mtgender: validate failed: {} rejected pair(s) in strict mode\n", summary.rejected_ids.size());
    return 1;
  }
  return 0;
}

void add_corpus(CLI::App* cmd, Options& o) {
  cmd->add_option("--corpus", o.corpus, "Sentence pairs, JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--config", o.config, "Analysis config, JSON")->check(CLI::ExistingFile);
}

void add_backend(CLI::App* cmd, Options& o) {
  cmd->add_option("--backend", o.backend, "Model backend")->check(CLI::IsMember({"real", "mock"}))
      ->capture_default_str();
  cmd->add_option("--model-id", o.model_id, "Model for the real backend")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Mock backend seed")->capture_default_str();
}

void add_cache(CLI::App* cmd, Options& o) {
  cmd->add_option("--cache-dir", o.cache_dir, "Attribution cache (default <out-dir>/cache)");
  cmd->add_flag("--no-cache", o.no_cache, "Neither read nor write the attribution cache");
}

void add_strictness(CLI::App* cmd, Options& o) {
  cmd->add_flag("--strict,!--lenient", o.strict, "Fail on rejected pairs (default) or skip them");
}

void add_out_dir(CLI::App* cmd, Options& o) {
  cmd->add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
}

void add_attribute_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--dump-wordscores", o.dump_wordscores, "Per-sentence word score CSVs (default <out-dir>/wordscores)");
  cmd->add_option("--jobs", o.jobs, "Attribution workers")->check(CLI::Range(1, 256))->capture_default_str();
}

void add_analyze_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--annotations", o.annotations, "Human annotations, JSONL")->check(CLI::ExistingFile);
  cmd->add_option("--approach", o.approach, "Thresholding approach")
      ->check(CLI::IsMember({"1", "2", "3", "4", "all"}))
      ->capture_default_str();
  cmd->add_option("--grid", o.grid, "Comma-separated sweep values replacing the configured grid");
  cmd->add_option("--mode", o.mode, "Annotation mode (default: both)")->check(CLI::IsMember({"all", "min2"}));
  cmd->add_option("--parse-cache", o.parse_cache, "Dependency parses, JSONL")->check(CLI::ExistingFile);
}

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"svg", "csv-only"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Contrastive saliency analysis of gendered machine translation"};
  app.require_subcommand(1, 1);

  auto* attribute = app.add_subcommand("attribute", "Compute per-word saliency for every sentence pair");
  add_corpus(attribute, o);
  add_backend(attribute, o);
  add_cache(attribute, o);
  add_strictness(attribute, o);
  add_out_dir(attribute, o);
  add_attribute_flags(attribute, o);

  auto* analyze = app.add_subcommand("analyze", "Threshold sweeps, overlap and linguistic analyses");
  add_corpus(analyze, o);
  add_backend(analyze, o);
  add_cache(analyze, o);
  add_strictness(analyze, o);
  add_out_dir(analyze, o);
  add_analyze_flags(analyze, o);

  auto* report = app.add_subcommand("report", "Render summary.md and charts from analysis CSVs");
  add_out_dir(report, o);
  add_format(report, o);

  auto* all = app.add_subcommand("all", "attribute, analyze and report in one run");
  add_corpus(all, o);
  add_backend(all, o);
  add_cache(all, o);
  add_strictness(all, o);
  add_out_dir(all, o);
  add_attribute_flags(all, o);
  add_analyze_flags(all, o);
  add_format(all, o);

  auto* validate = app.add_subcommand("validate", "Check contrastive pairs and print diagnostics");
  add_corpus(validate, o);
  add_backend(validate, o);
  add_strictness(validate, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  Stage stage;
  try {
    if (attribute->parsed()) return cmd_attribute(o, stage);
    if (analyze->parsed()) return cmd_analyze(o, stage);
    if (report->parsed()) return cmd_report(o, stage);
    if (all->parsed()) return cmd_all(o, stage);
    return cmd_validate(o, stage);
  } catch (const UsageError& e) {
    fmt::print(stderr, "mtgender: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "mtgender: {} failed: {}\n", stage.name(), e.what());
    return 1;
  }
}
