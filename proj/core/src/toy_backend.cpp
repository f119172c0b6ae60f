#include "mtgender/toy_backend.hpp"

#include <cmath>

#include "mtgender/errors.hpp"
#include "mtgender/hashing.hpp"

namespace mtg {
namespace {

Vector mat_vec(const Matrix& m, const Vector& v) {
  Vector out(m.size(), 0.0);
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  }
  return out;
}

Vector mat_t_vec(const Matrix& m, const Vector& v) {
  Vector out(m.empty() ? 0 : m[0].size(), 0.0);
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += m[r][c] * v[r];
  }
  return out;
}

Vector token_encoding(const Matrix& proj, const Vector& emb, const Vector& bias) {
  Vector x = mat_vec(proj, emb);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::tanh(x[k] + bias[k]);
  return x;
}

}  // namespace

double ToyNeuralBackend::hashed(std::string_view salt, std::string_view key, std::uint64_t index) const {
  StableHasher h;
  h.add(options_.seed).add(salt).add(key).add(index);
  return static_cast<double>(splitmix64(h.value()) >> 11) * 0x1.0p-52 - 1.0;
}

ToyNeuralBackend::ToyNeuralBackend(Options options) : options_(options) {
  const auto d = static_cast<std::size_t>(options_.dim);
  const auto hdim = static_cast<std::size_t>(options_.hidden);
  auto fill = [this](std::string_view salt, std::size_t rows, std::size_t cols, double scale) {
    Matrix m(rows, Vector(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) m[r][c] = scale * hashed(salt, "", r * cols + c);
    }
    return m;
  };
  weights_.source_proj = fill("A", d, d, 0.8);
  weights_.prefix_proj = fill("B", d, d, 0.8);
  weights_.hidden = fill("W", hdim, d, 0.6);
  weights_.hidden_bias = fill("c", 1, hdim, 0.2)[0];
}

ToyNeuralBackend::ToyNeuralBackend(Options options, Weights weights)
    : options_(options), weights_(std::move(weights)) {
  const auto d = static_cast<std::size_t>(options_.dim);
  const auto hdim = static_cast<std::size_t>(options_.hidden);
  auto shaped = [](const Matrix& m, std::size_t rows, std::size_t cols) {
    if (m.size() != rows) return false;
    for (const auto& row : m) {
      if (row.size() != cols) return false;
    }
    return true;
  };
  if (!shaped(weights_.source_proj, d, d) || !shaped(weights_.prefix_proj, d, d) ||
      !shaped(weights_.hidden, hdim, d) || weights_.hidden_bias.size() != hdim) {
    throw std::invalid_argument("ToyNeuralBackend: weight shapes do not match options");
  }
}

std::string ToyNeuralBackend::version() const {
  return "1-seed" + std::to_string(options_.seed) + "-d" + std::to_string(options_.dim) + "-h" +
         std::to_string(options_.hidden);
}

std::vector<std::string> ToyNeuralBackend::tokenize(std::string_view text, TokenSide /*side*/) {
  auto tokens = whitespace_tokenize(text);
  tokens.emplace_back("</s>");
  return tokens;
}

Vector ToyNeuralBackend::embedding(std::string_view token) const {
  Vector e(static_cast<std::size_t>(options_.dim));
  for (std::size_t k = 0; k < e.size(); ++k) {
    e[k] = options_.constant_embeddings ? 0.5 : hashed("emb", token, k);
  }
  return e;
}

Vector ToyNeuralBackend::output_vector(std::string_view token) const {
  Vector u(static_cast<std::size_t>(options_.hidden));
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = hashed("out", token, k);
  return u;
}

Vector ToyNeuralBackend::source_position_bias(std::size_t position) const {
  Vector p(static_cast<std::size_t>(options_.dim), 0.0);
  if (options_.positional) {
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = 0.5 * hashed("pos-src", "", position * p.size() + k);
  }
  return p;
}

Vector ToyNeuralBackend::prefix_position_bias(std::size_t position) const {
  Vector q(static_cast<std::size_t>(options_.dim), 0.0);
  if (options_.positional) {
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = 0.5 * hashed("pos-tgt", "", position * q.size() + k);
  }
  return q;
}

double ToyNeuralBackend::statistic(const Matrix& source_embeddings, const Matrix& prefix_embeddings,
                                   std::string_view original, std::string_view contrastive) const {
  Vector pooled(static_cast<std::size_t>(options_.dim), 0.0);
  for (std::size_t i = 0; i < source_embeddings.size(); ++i) {
    const Vector x = token_encoding(weights_.source_proj, source_embeddings[i], source_position_bias(i));
    for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] += x[k];
  }
  for (std::size_t j = 0; j < prefix_embeddings.size(); ++j) {
    const Vector y = token_encoding(weights_.prefix_proj, prefix_embeddings[j], prefix_position_bias(j));
    for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] += y[k];
  }
  Vector h = mat_vec(weights_.hidden, pooled);
  const Vector uo = output_vector(original);
  const Vector uc = output_vector(contrastive);
  double s = 0.0;
  for (std::size_t r = 0; r < h.size(); ++r) s += (uo[r] - uc[r]) * std::tanh(h[r] + weights_.hidden_bias[r]);
  return s;
}

GradientResult ToyNeuralBackend::contrastive_gradient(const GradientRequest& request) {
  GradientResult result;
  result.source_tokens = tokenize(request.source, TokenSide::kSource);
  result.prefix_tokens.assign(request.target_prefix.begin(), request.target_prefix.end());

  const auto d = static_cast<std::size_t>(options_.dim);
  Matrix xs;
  Matrix ys;
  Vector pooled(d, 0.0);
  for (std::size_t i = 0; i < result.source_tokens.size(); ++i) {
    result.source_embeddings.push_back(embedding(result.source_tokens[i]));
    xs.push_back(token_encoding(weights_.source_proj, result.source_embeddings.back(), source_position_bias(i)));
    for (std::size_t k = 0; k < d; ++k) pooled[k] += xs.back()[k];
  }
  Matrix prefix_embeddings;
  for (std::size_t j = 0; j < result.prefix_tokens.size(); ++j) {
    prefix_embeddings.push_back(embedding(result.prefix_tokens[j]));
    ys.push_back(token_encoding(weights_.prefix_proj, prefix_embeddings.back(), prefix_position_bias(j)));
    for (std::size_t k = 0; k < d; ++k) pooled[k] += ys.back()[k];
  }

  // ds/dpre_h = (u_o - u_c) * (1 - h^2); ds/dpooled = W^T ds/dpre_h.
  const Vector pre_h = mat_vec(weights_.hidden, pooled);
  const Vector uo = output_vector(request.original_token);
  const Vector uc = output_vector(request.contrastive_token);
  Vector d_pre_h(pre_h.size());
  for (std::size_t r = 0; r < pre_h.size(); ++r) {
    const double h = std::tanh(pre_h[r] + weights_.hidden_bias[r]);
    d_pre_h[r] = (uo[r] - uc[r]) * (1.0 - h * h);
  }
  const Vector d_pooled = mat_t_vec(weights_.hidden, d_pre_h);

  auto backprop_token = [&](const Matrix& proj, const Vector& x) {
    Vector d_pre_x(d);
    for (std::size_t k = 0; k < d; ++k) d_pre_x[k] = d_pooled[k] * (1.0 - x[k] * x[k]);
    return mat_t_vec(proj, d_pre_x);
  };
  for (const auto& x : xs) result.source_gradients.push_back(backprop_token(weights_.source_proj, x));
  for (const auto& y : ys) result.prefix_gradients.push_back(backprop_token(weights_.prefix_proj, y));
  return result;
}

}  // namespace mtg
