#include "mtgender/attribution.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mtgender/errors.hpp"
#include "mtgender/unicode.hpp"

namespace mtg {
namespace {

GradientResult call_backend(ModelBackend& backend, const GradientRequest& request) {
  try {
    return backend.contrastive_gradient(request);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendFailure(backend.name() + ": " + e.what());
  }
}

double saliency(std::span<const double> gradient, const std::vector<double>* embedding) {
  if (embedding == nullptr) return l2_norm(gradient);
  std::vector<double> product(gradient.size());
  for (std::size_t k = 0; k < gradient.size(); ++k) product[k] = gradient[k] * (*embedding)[k];
  return l2_norm(product);
}

std::string strip_punctuation(std::string_view word) {
  auto cps = unicode::decode_utf8(word);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && unicode::is_punctuation(cps[b])) ++b;
  while (e > b && unicode::is_punctuation(cps[e - 1])) --e;
  return unicode::encode_utf8(std::u32string_view(cps).substr(b, e - b));
}

}  // namespace

double l2_norm(std::span<const double> values) {
  // Scaled accumulation avoids overflow for large gradients.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : values) {
    if (v == 0.0) continue;
    const double a = std::fabs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

AttributionResult attribute_contrast(ModelBackend& backend, const SentencePair& pair,
                                     SaliencyMethod method) {
  TargetTokenizer tokenizer(backend);
  AttributionResult result;
  result.sentence_id = pair.id;
  result.contrast = validate_pair(pair, tokenizer);

  const GradientRequest request{pair.source_text, result.contrast.shared_prefix,
                                result.contrast.original_token, result.contrast.contrastive_token};
  const GradientResult grads = call_backend(backend, request);

  if (grads.source_gradients.size() != grads.source_tokens.size() || grads.source_tokens.empty()) {
    throw BackendFailure(backend.name() + ": expected one gradient per source token for sentence '" +
                         pair.id + "'");
  }
  const bool times_input = method == SaliencyMethod::kGradientTimesInput;
  if (times_input && grads.source_embeddings.size() != grads.source_gradients.size()) {
    throw BackendFailure(backend.name() + " does not expose input embeddings; gradient x input unavailable");
  }

  for (std::size_t i = 0; i < grads.source_tokens.size(); ++i) {
    const auto& g = grads.source_gradients[i];
    const std::vector<double>* emb = times_input ? &grads.source_embeddings[i] : nullptr;
    if (emb && emb->size() != g.size()) {
      throw BackendFailure(backend.name() + ": embedding and gradient dimensions differ");
    }
    const double score = saliency(g, emb);
    if (!std::isfinite(score)) {
      throw BackendFailure(backend.name() + ": non-finite gradient for sentence '" + pair.id + "'");
    }
    result.source_scores.push_back({grads.source_tokens[i], static_cast<int>(i), score, 0.0});
  }
  for (std::size_t j = 0; j < grads.prefix_gradients.size(); ++j) {
    const std::string token = j < grads.prefix_tokens.size() ? grads.prefix_tokens[j] : std::string();
    result.target_prefix_scores.push_back({token, static_cast<int>(j), l2_norm(grads.prefix_gradients[j]), 0.0});
  }
  return result;
}

void GenderLexicon::add(std::string form, Gender gender) { forms_[std::move(form)] = gender; }

std::optional<Gender> GenderLexicon::lookup(std::string_view word) const {
  const auto it = forms_.find(word);
  if (it == forms_.end()) return std::nullopt;
  return it->second;
}

Gender GenderLexicon::classify(std::string_view text) const {
  for (const auto& token : whitespace_tokenize(text)) {
    if (auto g = lookup(strip_punctuation(token))) return *g;
  }
  throw GenderUndetermined("no gendered referent form from the lexicon in: \"" + std::string(text) + "\"");
}

GenderLexicon GenderLexicon::parse(std::string_view json_text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid lexicon JSON: ") + e.what());
  }
  if (!obj.is_object()) throw SchemaError("lexicon must be a JSON object of form -> gender");
  GenderLexicon lexicon;
  for (const auto& [form, value] : obj.items()) {
    auto g = value.is_string() ? parse_gender(value.get<std::string>()) : std::nullopt;
    if (!g) throw SchemaError("lexicon entry '" + form + "' must be \"masculine\" or \"feminine\"");
    lexicon.add(form, *g);
  }
  return lexicon;
}

GenderLexicon GenderLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open lexicon '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

Translation translate(ModelBackend& backend, std::string_view source, const GenderLexicon& lexicon) {
  std::string text;
  try {
    text = backend.translate(source);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw BackendFailure(backend.name() + ": " + e.what());
  }
  return {text, lexicon.classify(text)};
}

}  // namespace mtg
