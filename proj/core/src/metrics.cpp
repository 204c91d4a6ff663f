// Copyright 2026 The xrc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xrc/metrics.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "xrc/utf8.hpp"

namespace xrc {
namespace {

std::u32string normalized_chars(std::string_view s, const NormalizationConfig& cfg) {
  return utf8::decode(normalize_text(s, cfg));
}

double f1_single(const std::u32string& pred, const std::u32string& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::unordered_map<char32_t, long> counts;
  for (char32_t c : gold) ++counts[c];
  long common = 0;
  for (char32_t c : pred) {
    auto it = counts.find(c);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(pred.size());
  const double recall = static_cast<double>(common) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<long>(i), tokens.begin() + static_cast<long>(i + n))];
  }
  return counts;
}

}  // namespace

std::string normalize_text(std::string_view s, const NormalizationConfig& cfg) {
  if (!cfg.unicode_nfkc && !cfg.lowercase && !cfg.strip_whitespace_chars &&
      !cfg.strip_punctuation) {
    return std::string(s);
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<std::int32_t>(s.size())));
  if (cfg.unicode_nfkc) {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* nfkc = icu::Normalizer2::getNFKCInstance(status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFKC normalizer unavailable");
    u = nfkc->normalize(u, status);
    if (U_FAILURE(status)) throw std::runtime_error("ICU NFKC normalization failed");
  }
  if (cfg.lowercase) u.toLower(icu::Locale::getRoot());
  if (cfg.strip_whitespace_chars || cfg.strip_punctuation) {
    icu::UnicodeString kept;
    for (std::int32_t i = 0; i < u.length();) {
      const UChar32 c = u.char32At(i);
      i += U16_LENGTH(c);
      if (cfg.strip_whitespace_chars && u_isUWhiteSpace(c)) continue;
      if (cfg.strip_punctuation && u_ispunct(c)) continue;
      kept.append(c);
    }
    u = kept;
  }
  std::string out;
  u.toUTF8String(out);
  return out;
}

double char_f1(std::string_view pred, std::span<const std::string> golds,
               const NormalizationConfig& cfg) {
  if (golds.empty()) throw std::invalid_argument("char_f1 needs at least one gold answer");
  const std::u32string p = normalized_chars(pred, cfg);
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, f1_single(p, normalized_chars(g, cfg)));
  return best;
}

double char_f1(std::string_view pred, std::string_view gold, const NormalizationConfig& cfg) {
  const std::string g(gold);
  return char_f1(pred, std::span<const std::string>(&g, 1), cfg);
}

int exact_match(std::string_view pred, std::span<const std::string> golds,
                const NormalizationConfig& cfg) {
  if (golds.empty()) throw std::invalid_argument("exact_match needs at least one gold answer");
  const std::string p = normalize_text(pred, cfg);
  for (const auto& g : golds) {
    if (normalize_text(g, cfg) == p) return 1;
  }
  return 0;
}

int exact_match(std::string_view pred, std::string_view gold, const NormalizationConfig& cfg) {
  const std::string g(gold);
  return exact_match(pred, std::span<const std::string>(&g, 1), cfg);
}

SubstringRate substring_rate(std::span<const Prediction> preds,
                             std::span<const QAExample> examples) {
  std::unordered_map<std::string, const QAExample*> by_id;
  for (const auto& ex : examples) by_id.emplace(ex.id, &ex);
  SubstringRate out;
  out.denominator = preds.size();
  for (const auto& p : preds) {
    auto it = by_id.find(p.example_id);
    if (it != by_id.end() && it->second->context.raw().find(p.answer_text) != std::string::npos) {
      ++out.numerator;
    }
  }
  out.rate = out.denominator == 0
                 ? 1.0
                 : static_cast<double>(out.numerator) / static_cast<double>(out.denominator);
  return out;
}

EvalReport evaluate_dataset(std::span<const Prediction> preds,
                            std::span<const QAExample> examples,
                            const NormalizationConfig& cfg) {
  std::unordered_map<std::string, std::size_t> example_index;
  for (std::size_t k = 0; k < examples.size(); ++k) {
    if (!example_index.emplace(examples[k].id, k).second) {
      throw std::invalid_argument("duplicate example id: " + examples[k].id);
    }
  }
  std::vector<const Prediction*> pred_for(examples.size(), nullptr);
  for (const auto& p : preds) {
    auto it = example_index.find(p.example_id);
    if (it == example_index.end()) {
      throw std::invalid_argument("prediction for unknown example id: " + p.example_id);
    }
    if (pred_for[it->second] != nullptr) {
      throw std::invalid_argument("duplicate prediction id: " + p.example_id);
    }
    pred_for[it->second] = &p;
  }

  EvalReport report;
  report.n = examples.size();
  report.per_example.reserve(examples.size());
  double f1_sum = 0.0;
  double em_sum = 0.0;
  for (std::size_t k = 0; k < examples.size(); ++k) {
    const QAExample& ex = examples[k];
    ExampleScore score{ex.id, 0.0, 0.0};
    if (pred_for[k] != nullptr && !ex.answers.empty()) {
      std::vector<std::string> golds;
      golds.reserve(ex.answers.size());
      for (const auto& a : ex.answers) golds.push_back(a.text);
      score.f1 = char_f1(pred_for[k]->answer_text, golds, cfg);
      score.em = exact_match(pred_for[k]->answer_text, golds, cfg);
    }
    f1_sum += score.f1;
    em_sum += score.em;
    report.per_example.push_back(std::move(score));
  }
  if (report.n > 0) {
    report.f1 = 100.0 * f1_sum / static_cast<double>(report.n);
    report.em = 100.0 * em_sum / static_cast<double>(report.n);
  }
  report.substring_rate = substring_rate(preds, examples).rate;
  return report;
}

BleuResult corpus_bleu_detail(std::span<const std::vector<std::string>> hyps,
                              std::span<const std::vector<std::string>> refs,
                              const BleuConfig& cfg) {
  if (hyps.size() != refs.size()) {
    throw std::invalid_argument("corpus_bleu: " + std::to_string(hyps.size()) +
                                " hypotheses but " + std::to_string(refs.size()) + " references");
  }
  if (hyps.empty()) throw std::invalid_argument("corpus_bleu: empty corpus");
  if (cfg.max_n == 0) throw std::invalid_argument("corpus_bleu: max_n must be positive");

  std::vector<std::size_t> matches(cfg.max_n, 0);
  std::vector<std::size_t> totals(cfg.max_n, 0);
  BleuResult out;
  for (std::size_t k = 0; k < hyps.size(); ++k) {
    out.hyp_len += hyps[k].size();
    out.ref_len += refs[k].size();
    for (std::size_t n = 1; n <= cfg.max_n; ++n) {
      const auto hyp_counts = count_ngrams(hyps[k], n);
      const auto ref_counts = count_ngrams(refs[k], n);
      for (const auto& [gram, count] : hyp_counts) {
        totals[n - 1] += count;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matches[n - 1] += std::min(count, it->second);
      }
    }
  }

  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < cfg.max_n; ++n) {
    double num = static_cast<double>(matches[n]);
    double den = static_cast<double>(totals[n]);
    if (cfg.smoothing && n > 0) {
      num += 1.0;
      den += 1.0;
    }
    const double p = den > 0.0 ? num / den : 0.0;
    out.precisions.push_back(p);
    if (p <= 0.0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  if (out.hyp_len < out.ref_len) {
    out.brevity_penalty =
        out.hyp_len == 0
            ? 0.0
            : std::exp(1.0 - static_cast<double>(out.ref_len) / static_cast<double>(out.hyp_len));
  }
  out.score = zero ? 0.0
                   : 100.0 * out.brevity_penalty *
                         std::exp(log_sum / static_cast<double>(cfg.max_n));
  return out;
}

double corpus_bleu(std::span<const std::vector<std::string>> hyps,
                   std::span<const std::vector<std::string>> refs, const BleuConfig& cfg) {
  return corpus_bleu_detail(hyps, refs, cfg).score;
}

}  // namespace xrc
