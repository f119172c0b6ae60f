#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/contrast.hpp"

namespace mtg {

enum class TokenSide { kSource, kTarget };

struct GradientRequest {
  std::string_view source;
  std::span<const std::string> target_prefix;
  std::string_view original_token;
  std::string_view contrastive_token;
};

// Gradients of s = log p(original) - log p(contrastive) with respect to the
// input embeddings, one vector per token.
struct GradientResult {
  std::vector<std::string> source_tokens;
  std::vector<std::vector<double>> source_gradients;
  std::vector<std::string> prefix_tokens;
  std::vector<std::vector<double>> prefix_gradients;
  // Input embeddings, parallel to source_gradients. Only needed for
  // gradient-times-input saliency; backends may leave it empty.
  std::vector<std::vector<double>> source_embeddings;
};

// An MT model that can translate, tokenize and differentiate the contrast
// statistic. Instances need not be thread-safe; use one per worker.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;

  virtual std::string name() const = 0;
  virtual std::string version() const = 0;

  virtual std::string translate(std::string_view source) = 0;
  // Deterministic. Subword units carry the tokenizer's own markers.
  virtual std::vector<std::string> tokenize(std::string_view text, TokenSide side) = 0;
  virtual GradientResult contrastive_gradient(const GradientRequest& request) = 0;
};

using BackendFactory = std::function<std::unique_ptr<ModelBackend>()>;

// Adapts a backend's target-side tokenization to the Tokenizer interface.
class TargetTokenizer final : public Tokenizer {
 public:
  explicit TargetTokenizer(ModelBackend& backend) : backend_(&backend) {}
  std::vector<std::string> tokenize(std::string_view text) const override {
    return backend_->tokenize(text, TokenSide::kTarget);
  }

 private:
  ModelBackend* backend_;
};

}  // namespace mtg
