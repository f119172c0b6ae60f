#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "mtgender/backend.hpp"

namespace mtg {

// Shared across every mock instance a factory hands out, so tests can count
// backend work done by a worker pool.
struct BackendCallCounter {
  std::atomic<int> translate{0};
  std::atomic<int> tokenize{0};
  std::atomic<int> gradient{0};
};

// Model-free backend for tests and dry runs.
//
// Tokenization: whitespace words; a word longer than six code points is cut
// in half and the second half gets a "##" continuation marker; "</s>" closes
// every sequence. Gradients are seeded hashes of (token, position, contrast
// token) with the contrastive token's contribution subtracted, so swapping
// the two contrast tokens negates every gradient exactly.
class MockBackend final : public ModelBackend {
 public:
  static constexpr int kDim = 8;

  explicit MockBackend(std::uint64_t seed, std::shared_ptr<BackendCallCounter> counter = nullptr);

  std::string name() const override { return "mock"; }
  std::string version() const override;

  // Echoes the source unless a canned translation was registered.
  std::string translate(std::string_view source) override;
  std::vector<std::string> tokenize(std::string_view text, TokenSide side) override;
  GradientResult contrastive_gradient(const GradientRequest& request) override;

  void set_translation(std::string source, std::string translation);

 private:
  double unit(std::string_view token, std::uint64_t position, std::string_view salt, int dim) const;
  std::vector<double> gradient(std::string_view token, std::uint64_t position, std::string_view original,
                               std::string_view contrastive) const;

  std::uint64_t seed_;
  std::shared_ptr<BackendCallCounter> counter_;
  std::map<std::string, std::string, std::less<>> translations_;
};

std::unique_ptr<ModelBackend> mock_backend(std::uint64_t seed,
                                           std::shared_ptr<BackendCallCounter> counter = nullptr);

}  // namespace mtg
