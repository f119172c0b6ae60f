#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mtgender/backend.hpp"

namespace mtg {

using Vector = std::vector<double>;
using Matrix = std::vector<Vector>;  // row-major, rows x cols

// A small differentiable stand-in for an encoder-decoder MT model:
//
//   x_i = tanh(A e_i + p_i)            per source token
//   y_j = tanh(B f_j + q_j)            per target-prefix token
//   h   = tanh(W (sum x_i + sum y_j) + c)
//   s   = (u(original) - u(contrastive)) . h
//
// s equals log p(original) - log p(contrastive) under a softmax over output
// vectors u(t), since the normalizer cancels. Gradients are exact
// (hand-derived backprop); finite differences of statistic() check them.
class ToyNeuralBackend final : public ModelBackend {
 public:
  struct Options {
    int dim = 4;
    int hidden = 6;
    std::uint64_t seed = 7;
    bool positional = true;            // p_i, q_j non-zero
    bool constant_embeddings = false;  // every token embeds to the same vector
  };

  struct Weights {
    Matrix source_proj;  // A, dim x dim
    Matrix prefix_proj;  // B, dim x dim
    Matrix hidden;       // W, hidden x dim
    Vector hidden_bias;  // c
  };

  explicit ToyNeuralBackend(Options options);
  ToyNeuralBackend(Options options, Weights weights);

  std::string name() const override { return "toy"; }
  std::string version() const override;
  std::string translate(std::string_view source) override { return std::string(source); }
  // Whitespace words plus "</s>".
  std::vector<std::string> tokenize(std::string_view text, TokenSide side) override;
  GradientResult contrastive_gradient(const GradientRequest& request) override;

  Vector embedding(std::string_view token) const;
  Vector output_vector(std::string_view token) const;
  Vector source_position_bias(std::size_t position) const;
  Vector prefix_position_bias(std::size_t position) const;

  // Forward pass on explicit embeddings.
  double statistic(const Matrix& source_embeddings, const Matrix& prefix_embeddings,
                   std::string_view original, std::string_view contrastive) const;

  const Weights& weights() const { return weights_; }
  const Options& options() const { return options_; }

 private:
  double hashed(std::string_view salt, std::string_view key, std::uint64_t index) const;

  Options options_;
  Weights weights_;
};

}  // namespace mtg
