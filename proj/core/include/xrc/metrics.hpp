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

#ifndef XRC_METRICS_HPP_
#define XRC_METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xrc/types.hpp"

namespace xrc {

// Transforms are applied in declaration order.
struct NormalizationConfig {
  bool unicode_nfkc = true;
  bool lowercase = true;
  bool strip_whitespace_chars = true;
  bool strip_punctuation = false;
};

std::string normalize_text(std::string_view s, const NormalizationConfig& cfg = {});

// Character-level F1 over code-point multisets, maximised over golds. Two
// strings that both normalise to empty score 1. Throws std::invalid_argument
// when golds is empty.
double char_f1(std::string_view pred, std::span<const std::string> golds,
               const NormalizationConfig& cfg = {});
double char_f1(std::string_view pred, std::string_view gold, const NormalizationConfig& cfg = {});

int exact_match(std::string_view pred, std::span<const std::string> golds,
                const NormalizationConfig& cfg = {});
int exact_match(std::string_view pred, std::string_view gold, const NormalizationConfig& cfg = {});

struct ExampleScore {
  std::string id;
  double f1 = 0.0;  // [0, 1]
  double em = 0.0;  // 0 or 1

  bool operator==(const ExampleScore&) const = default;
};

struct EvalReport {
  double f1 = 0.0;  // [0, 100]
  double em = 0.0;  // [0, 100]
  std::size_t n = 0;
  double substring_rate = 1.0;
  std::vector<ExampleScore> per_example;

  bool operator==(const EvalReport&) const = default;
};

struct SubstringRate {
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  // numerator / denominator; 1.0 for an empty prediction set.
  double rate = 1.0;
};

// Fraction of predictions whose un-normalised answer occurs verbatim in
// their example's context. Predictions with no matching example count as
// misses.
SubstringRate substring_rate(std::span<const Prediction> preds,
                             std::span<const QAExample> examples);

// Scores every example against all of its gold answers. Examples without a
// prediction score 0. Throws std::invalid_argument on duplicate or unknown
// prediction ids.
EvalReport evaluate_dataset(std::span<const Prediction> preds,
                            std::span<const QAExample> examples,
                            const NormalizationConfig& cfg = {});

struct BleuConfig {
  std::size_t max_n = 4;
  // Add-one smoothing for n > 1 when enabled.
  bool smoothing = false;
};

struct BleuResult {
  double score = 0.0;  // [0, 100]
  std::vector<double> precisions;
  double brevity_penalty = 1.0;
  std::size_t hyp_len = 0;
  std::size_t ref_len = 0;
};

// Corpus-level BLEU with clipped n-gram counts and brevity penalty. Throws
// std::invalid_argument when the lists differ in length or are empty.
BleuResult corpus_bleu_detail(std::span<const std::vector<std::string>> hyps,
                              std::span<const std::vector<std::string>> refs,
                              const BleuConfig& cfg = {});
double corpus_bleu(std::span<const std::vector<std::string>> hyps,
                   std::span<const std::vector<std::string>> refs, const BleuConfig& cfg = {});

}  // namespace xrc

#endif  // XRC_METRICS_HPP_
