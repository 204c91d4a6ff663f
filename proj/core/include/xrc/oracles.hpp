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

// Deterministic stand-ins for the translation and reading-comprehension
// models: a lexicon translator that emits gold-alignment attention, RC
// oracles, a context-free back-translator, noise injectors for dropped and
// paraphrased output words, and a synthetic dataset generator.
//
// Every function here is a pure function of its inputs and seed.

#ifndef XRC_ORACLES_HPP_
#define XRC_ORACLES_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xrc/json_io.hpp"
#include "xrc/types.hpp"

namespace xrc {

enum class ReorderKind { kIdentity, kReverse, kWindowShuffle };

struct ReorderRule {
  ReorderKind kind = ReorderKind::kIdentity;
  std::size_t window = 0;  // kWindowShuffle only, >= 1

  // "identity", "reverse" or "window-shuffle:<w>".
  std::string to_string() const;
  static ReorderRule parse(std::string_view s);
  bool operator==(const ReorderRule&) const = default;
};

struct SyntheticLexicon {
  // Source word -> one or more target words (fertility = list length).
  std::map<std::string, std::vector<std::string>> forward;
  ReorderRule reorder;
  // Target word -> alternative surface.
  std::map<std::string, std::string> synonyms;

  std::vector<std::string> violations() const;
  bool operator==(const SyntheticLexicon&) const = default;
};

void to_json(Json& j, const SyntheticLexicon& v);
void from_json(const Json& j, SyntheticLexicon& v);

struct NoiseConfig {
  double drop_rate = 0.0;
  double paraphrase_rate = 0.0;
  double epsilon = 0.0;
  std::uint64_t seed = 0;

  std::vector<std::string> violations() const;
};

// Source tokens that end a sentence for sentence-by-sentence translation.
bool is_sentence_terminator(std::string_view token);

// Word-by-word lexicon translation. Unknown words are copied and aligned to
// themselves. Fertility groups stay contiguous under reordering, which acts
// on source words within each sentence. Each surviving target token is
// dropped with probability drop_rate and otherwise replaced by its synonym
// with probability paraphrase_rate. Multi-sentence inputs yield a record
// with sentence blocks. Throws std::invalid_argument on empty input.
TranslationRecord toy_translate(const TokenizedText& text, const SyntheticLexicon& lex,
                                 const NoiseConfig& noise,
                                 const LanguageTag& target_lang = LanguageTag("synP"));

// Context-free inverse-lexicon translation of an isolated answer string.
// Longest target phrase wins; ambiguous inverses are resolved by a seeded
// choice.
std::string toy_back_translate(std::string_view answer, const SyntheticLexicon& lex,
                               std::uint64_t seed = 0);

// Target columns whose (block-aware) projection falls inside source_span,
// as a (min, max) span. nullopt when no column projects into it.
std::optional<TokenSpan> forward_project_span(const TranslationRecord& record,
                                              TokenSpan source_span);

// p_start has mass `peak` at the gold start and spreads the rest
// uniformly; p_end likewise at the gold end. peak in (0, 1].
SpanDistributions perfect_rc(const TranslationRecord& context, TokenSpan gold_pivot_span,
                             double peak = 1.0);

enum class RcOracleMode { kPerfect, kKeyword };

struct RcOracleConfig {
  RcOracleMode mode = RcOracleMode::kKeyword;
  double temperature = 1.0;
  std::size_t window = 3;
  std::size_t end_shift = 1;
};

// Scores each context token by the number of question words within
// +-window; p_start = softmax(score / temperature). p_end uses the same
// window moved end_shift tokens to the right. Uniform when no question word
// occurs in the context.
SpanDistributions keyword_rc(const TokenizedText& context, const TokenizedText& question,
                             const RcOracleConfig& cfg = {});

// Drops each target token with probability rate; dropped columns are
// removed and the remaining ones renormalised. Returns the input unchanged
// when nothing is dropped.
TranslationRecord inject_under_translation(const TranslationRecord& rec, double rate,
                                           std::uint64_t seed);

// Replaces target surfaces that have a synonym with probability rate.
// Attention is untouched.
TranslationRecord inject_paraphrase(const TranslationRecord& rec, double rate,
                                    const std::map<std::string, std::string>& synonyms,
                                    std::uint64_t seed);

struct SyntheticOptions {
  // Insert a "." after this many words; 0 keeps the context one sentence.
  std::size_t sentence_len = 0;
  std::size_t max_answer_len = 3;
  double fertility_rate = 0.1;
  // Pairs of source words sharing one translation.
  std::size_t homographs = 0;
  ReorderRule reorder;
  std::string source_lang = "synL";
};

struct SyntheticDataset {
  std::vector<QAExample> examples;
  std::vector<TokenSpan> gold_spans;  // token span of the answer in each context
  SyntheticLexicon lexicon;
};

SyntheticDataset gen_synthetic_dataset(std::size_t n_examples, std::size_t lexicon_size,
                                       std::size_t ctx_len, std::uint64_t seed,
                                       const SyntheticOptions& opts = {});

// Fresh synonyms for round(coverage * |target vocabulary|) target words.
std::map<std::string, std::string> make_synonym_map(const SyntheticLexicon& lex, double coverage,
                                                    std::uint64_t seed);

}  // namespace xrc

#endif  // XRC_ORACLES_HPP_
