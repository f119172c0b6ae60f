#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "mtgender/backend.hpp"

namespace mtg {

// Runs a model server as a child process and talks to it over stdin/stdout,
// one JSON object per line. Requests carry an "op" field:
//
//   {"op":"info"}                                   -> {"name":..., "version":...}
//   {"op":"translate","text":...}                   -> {"text":...}
//   {"op":"tokenize","text":...,"side":"source"|"target"} -> {"tokens":[...]}
//   {"op":"contrastive_gradient","source":...,"prefix":[...],
//    "original":...,"contrastive":...}              -> {"source_tokens":[...],
//        "source_gradients":[[...]], "prefix_tokens":[...],
//        "prefix_gradients":[[...]], "source_embeddings":[[...]]}
//
// Any response may instead be {"error": "..."}, reported as BackendFailure.
// tools/hf_backend.py implements the server for Hugging Face Marian models.
class ExternalProcessBackend final : public ModelBackend {
 public:
  explicit ExternalProcessBackend(std::vector<std::string> command);
  ~ExternalProcessBackend() override;

  ExternalProcessBackend(const ExternalProcessBackend&) = delete;
  ExternalProcessBackend& operator=(const ExternalProcessBackend&) = delete;

  std::string name() const override { return name_; }
  std::string version() const override { return version_; }
  std::string translate(std::string_view source) override;
  std::vector<std::string> tokenize(std::string_view text, TokenSide side) override;
  GradientResult contrastive_gradient(const GradientRequest& request) override;

 private:
  std::string round_trip(const std::string& request_line);
  void shutdown() noexcept;

  std::vector<std::string> command_;
  int pid_ = -1;
  std::FILE* to_child_ = nullptr;
  std::FILE* from_child_ = nullptr;
  std::string name_;
  std::string version_;
};

}  // namespace mtg
