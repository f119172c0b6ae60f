#include "mtgender/mock_backend.hpp"

#include "mtgender/hashing.hpp"
#include "mtgender/unicode.hpp"

namespace mtg {

MockBackend::MockBackend(std::uint64_t seed, std::shared_ptr<BackendCallCounter> counter)
    : seed_(seed), counter_(std::move(counter)) {}

std::string MockBackend::version() const { return "1-seed" + std::to_string(seed_); }

std::string MockBackend::translate(std::string_view source) {
  if (counter_) ++counter_->translate;
  const auto it = translations_.find(source);
  return it == translations_.end() ? std::string(source) : it->second;
}

void MockBackend::set_translation(std::string source, std::string translation) {
  translations_[std::move(source)] = std::move(translation);
}

std::vector<std::string> MockBackend::tokenize(std::string_view text, TokenSide /*side*/) {
  if (counter_) ++counter_->tokenize;
  std::vector<std::string> tokens;
  for (const auto& word : whitespace_tokenize(text)) {
    const auto cps = unicode::decode_utf8(word);
    if (cps.size() <= 6) {
      tokens.push_back(word);
      continue;
    }
    const std::size_t half = cps.size() / 2;
    const std::u32string_view view(cps);
    tokens.push_back(unicode::encode_utf8(view.substr(0, half)));
    tokens.push_back("##" + unicode::encode_utf8(view.substr(half)));
  }
  tokens.emplace_back("</s>");
  return tokens;
}

double MockBackend::unit(std::string_view token, std::uint64_t position, std::string_view salt,
                         int dim) const {
  StableHasher h;
  h.add(seed_).add(token).add(position).add(salt).add(static_cast<std::uint64_t>(dim));
  const std::uint64_t bits = splitmix64(h.value());
  // 53 random mantissa bits mapped to [-1, 1).
  return static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
}

std::vector<double> MockBackend::gradient(std::string_view token, std::uint64_t position,
                                          std::string_view original, std::string_view contrastive) const {
  std::vector<double> g(kDim);
  for (int k = 0; k < kDim; ++k) {
    g[k] = unit(token, position, original, k) - unit(token, position, contrastive, k);
  }
  return g;
}

GradientResult MockBackend::contrastive_gradient(const GradientRequest& request) {
  if (counter_) ++counter_->gradient;
  GradientResult result;
  result.source_tokens = tokenize(request.source, TokenSide::kSource);
  for (std::size_t i = 0; i < result.source_tokens.size(); ++i) {
    const auto& tok = result.source_tokens[i];
    result.source_gradients.push_back(gradient(tok, i, request.original_token, request.contrastive_token));
    std::vector<double> emb(kDim);
    for (int k = 0; k < kDim; ++k) emb[k] = unit(tok, 0, "embedding", k);
    result.source_embeddings.push_back(std::move(emb));
  }
  result.prefix_tokens.assign(request.target_prefix.begin(), request.target_prefix.end());
  for (std::size_t j = 0; j < result.prefix_tokens.size(); ++j) {
    result.prefix_gradients.push_back(
        gradient(result.prefix_tokens[j], 1000 + j, request.original_token, request.contrastive_token));
  }
  return result;
}

std::unique_ptr<ModelBackend> mock_backend(std::uint64_t seed, std::shared_ptr<BackendCallCounter> counter) {
  return std::make_unique<MockBackend>(seed, std::move(counter));
}

}  // namespace mtg
