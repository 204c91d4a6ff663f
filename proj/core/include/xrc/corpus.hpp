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

// Parallel-corpus preparation (score/length filtering, best-k selection,
// train/dev split, question oversampling) and SQuAD v1.1 ingestion.

#ifndef XRC_CORPUS_HPP_
#define XRC_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "xrc/json_io.hpp"
#include "xrc/types.hpp"

namespace xrc {

struct AlignedPair {
  std::vector<std::string> source_sentence;
  std::vector<std::string> target_sentence;
  double alignment_score = 0.0;

  bool operator==(const AlignedPair&) const = default;
};

// JSONL fields "src", "tgt" (token arrays) and "score".
void to_json(Json& j, const AlignedPair& v);
void from_json(const Json& j, AlignedPair& v);

std::vector<AlignedPair> read_pairs(const std::filesystem::path& path);
std::string pairs_to_jsonl(std::span<const AlignedPair> pairs);

struct FilterConfig {
  double min_score = -0.3;
  std::size_t min_len = 5;
  std::size_t max_len = 50;

  // Per-language score thresholds: "ja" -> -0.3, "fr" -> 0.0, lengths 5..50.
  // Throws std::invalid_argument for other languages.
  static FilterConfig for_language(std::string_view lang);
};

// Keeps pairs with score >= min_score whose sides both have token counts
// in [min_len, max_len]. Order preserved.
std::vector<AlignedPair> filter_pairs(std::span<const AlignedPair> pairs, const FilterConfig& cfg);

// Top k by descending score, stable for equal scores. Throws
// std::invalid_argument when k > pairs.size().
std::vector<AlignedPair> sort_and_take_best(std::span<const AlignedPair> pairs, std::size_t k);

// Seeded shuffle; the first n_dev go to dev. Returns (train, dev). Throws
// std::invalid_argument unless n_dev < pairs.size() (n_dev == 0 always ok).
std::pair<std::vector<AlignedPair>, std::vector<AlignedPair>> split_corpus(
    std::vector<AlignedPair> pairs, std::size_t n_dev, std::uint64_t seed);

struct OversampleConfig {
  std::size_t duplication_factor = 10;
};

// corpus followed by every question repeated duplication_factor times.
std::vector<AlignedPair> oversample_questions(std::span<const AlignedPair> corpus,
                                              std::span<const AlignedPair> questions,
                                              const OversampleConfig& cfg);

// SQuAD v1.1: data -> paragraphs -> qas{id, question, answers{text,
// answer_start}}. Contexts and questions are whitespace-tokenized. Throws
// std::runtime_error on malformed JSON or on answers whose text does not
// occur at answer_start (the message names the qa id).
std::vector<QAExample> load_squad(std::istream& in, const LanguageTag& lang = LanguageTag());
std::vector<QAExample> load_squad_file(const std::filesystem::path& path,
                                       const LanguageTag& lang = LanguageTag());
std::vector<QAExample> load_squad_json(const Json& doc, const LanguageTag& lang = LanguageTag());

// Inverse of load_squad for whitespace-tokenized examples: one article,
// consecutive examples with the same context raw share a paragraph.
Json to_squad_json(std::span<const QAExample> examples, std::string_view title = "xrc");

// Loads a dataset from SQuAD JSON (.json) or pre-tokenized QAExample JSONL
// (.jsonl).
std::vector<QAExample> load_dataset(const std::filesystem::path& path,
                                    const LanguageTag& lang = LanguageTag());

}  // namespace xrc

#endif  // XRC_CORPUS_HPP_
