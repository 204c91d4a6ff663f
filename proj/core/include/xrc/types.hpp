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

// Shared data model: tokenized text with character offsets, token spans,
// attention matrices, translation records and QA examples.
//
// Character offsets are Unicode code point indices into the raw string.
// Token spans are inclusive on both ends. Attention matrices are stored
// source-major (rows = source tokens, columns = target tokens) and every
// column is a distribution over source positions.

#ifndef XRC_TYPES_HPP_
#define XRC_TYPES_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace xrc {

// Tolerance for every "sums to one" invariant in the data model.
inline constexpr double kStochasticTolerance = 1e-9;

// Thrown when a value fails its invariants at an API boundary. Carries the
// full list of violations.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class LanguageTag {
 public:
  // "und" (undetermined), so a default tag still satisfies non-emptiness.
  LanguageTag() : code_("und") {}
  explicit LanguageTag(std::string code);

  const std::string& code() const { return code_; }
  bool operator==(const LanguageTag&) const = default;

 private:
  std::string code_;
};

struct Token {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;  // exclusive

  bool operator==(const Token&) const = default;
};

struct CharRange {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const CharRange&) const = default;
};

struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive

  std::size_t length() const { return end - start + 1; }
  bool operator==(const TokenSpan&) const = default;
};

class TokenizedText {
 public:
  TokenizedText() : offsets_{0} {}
  // Stores the arguments as given; call violations() or checked() to
  // enforce the offset invariants.
  TokenizedText(std::string raw, std::vector<Token> tokens, LanguageTag lang);

  // Throws ValidationError when the tokens do not match raw.
  static TokenizedText checked(std::string raw, std::vector<Token> tokens, LanguageTag lang);
  // Splits on Unicode whitespace.
  static TokenizedText whitespace(std::string raw, LanguageTag lang);
  // Joins words with single spaces.
  static TokenizedText from_words(std::span<const std::string> words, LanguageTag lang);

  const std::string& raw() const { return raw_; }
  std::span<const Token> tokens() const { return tokens_; }
  const Token& token(std::size_t i) const { return tokens_.at(i); }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const LanguageTag& language() const { return lang_; }

  std::size_t char_length() const { return offsets_.size() - 1; }
  // Code-point substring [begin, end). Throws std::out_of_range.
  std::string substr(std::size_t begin, std::size_t end) const;
  std::vector<std::string> surfaces() const;

  std::vector<std::string> violations() const;

  bool operator==(const TokenizedText& o) const {
    return raw_ == o.raw_ && tokens_ == o.tokens_ && lang_ == o.lang_;
  }

 private:
  std::string raw_;
  std::vector<Token> tokens_;
  LanguageTag lang_;
  std::vector<std::size_t> offsets_;  // code point -> byte offset, plus end
};

class AttentionMatrix {
 public:
  AttentionMatrix() = default;
  // values are row-major, rows = source tokens. Throws std::invalid_argument
  // when values.size() != rows * cols. Stochasticity is checked by
  // validate_record / violations().
  AttentionMatrix(std::size_t source_len, std::size_t target_len, std::vector<double> values);

  std::size_t source_len() const { return rows_; }
  std::size_t target_len() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const;
  std::span<const double> values() const { return values_; }

  double column_sum(std::size_t j) const;
  std::vector<double> column(std::size_t j) const;
  // Range/normalization violations only (no shape context).
  std::vector<std::string> violations() const;

  bool operator==(const AttentionMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// Half-open token ranges of one sentence pair inside a composed record.
struct SentenceBlock {
  std::size_t source_begin = 0;
  std::size_t source_end = 0;
  std::size_t target_begin = 0;
  std::size_t target_end = 0;

  bool operator==(const SentenceBlock&) const = default;
};

struct TranslationRecord {
  TokenizedText source;
  TokenizedText target;
  AttentionMatrix attention;
  std::optional<std::vector<SentenceBlock>> sentence_blocks;

  bool operator==(const TranslationRecord&) const = default;
};

// Every invariant violation of r; empty iff r is valid.
std::vector<std::string> validate_record(const TranslationRecord& r);

// Concatenates per-sentence records into one record with block-diagonal
// attention. Raw texts are joined with a single space.
TranslationRecord compose_sentences(std::span<const TranslationRecord> parts);

// Block index containing target column j, if the record has blocks.
std::optional<std::size_t> block_of_target(const TranslationRecord& r, std::size_t j);

struct SpanDistributions {
  std::vector<double> p_start;
  std::vector<double> p_end;

  std::size_t size() const { return p_start.size(); }
  std::vector<std::string> violations() const;
  bool operator==(const SpanDistributions&) const = default;
};

struct GoldAnswer {
  std::string text;
  std::size_t char_start = 0;

  bool operator==(const GoldAnswer&) const = default;
};

struct QAExample {
  std::string id;
  TokenizedText context;
  TokenizedText question;
  std::vector<GoldAnswer> answers;

  std::vector<std::string> violations() const;
  bool operator==(const QAExample&) const = default;
};

enum class PredictionMode { kExtractive, kGenerated };

std::string_view to_string(PredictionMode mode);
PredictionMode parse_prediction_mode(std::string_view s);

struct Prediction {
  std::string example_id;
  std::string answer_text;
  std::optional<CharRange> char_range;
  PredictionMode mode = PredictionMode::kExtractive;

  std::vector<std::string> violations(const TokenizedText& context) const;
  bool operator==(const Prediction&) const = default;
};

// (tokens[span.start].char_start, tokens[span.end].char_end).
// Throws std::out_of_range for spans that do not index text.
CharRange span_to_char_range(const TokenizedText& text, TokenSpan span);

// Smallest token span covering [range.start, range.end); nullopt when no
// token overlaps the range.
std::optional<TokenSpan> char_range_to_span(const TokenizedText& text, CharRange range);

}  // namespace xrc

#endif  // XRC_TYPES_HPP_
