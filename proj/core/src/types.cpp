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

#include "xrc/types.hpp"

#include <unicode/uchar.h>

#include <cmath>
#include <cstdio>
#include <numeric>

#include "xrc/utf8.hpp"

namespace xrc {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join_violations(const std::vector<std::string>& v) {
  std::string out = "validation failed:";
  for (const auto& s : v) {
    out += "\n  - ";
    out += s;
  }
  return out;
}

void append_prefixed(std::vector<std::string>& out, const std::vector<std::string>& in,
                     const std::string& prefix) {
  for (const auto& s : in) out.push_back(prefix + s);
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

LanguageTag::LanguageTag(std::string code) : code_(std::move(code)) {
  if (code_.empty()) throw std::invalid_argument("language tag must be non-empty");
}

// ---------------------------------------------------------------------------
// TokenizedText

TokenizedText::TokenizedText(std::string raw, std::vector<Token> tokens, LanguageTag lang)
    : raw_(std::move(raw)),
      tokens_(std::move(tokens)),
      lang_(std::move(lang)),
      offsets_(utf8::codepoint_byte_offsets(raw_)) {}

TokenizedText TokenizedText::checked(std::string raw, std::vector<Token> tokens,
                                     LanguageTag lang) {
  TokenizedText text(std::move(raw), std::move(tokens), std::move(lang));
  auto v = text.violations();
  if (!v.empty()) throw ValidationError(std::move(v));
  return text;
}

TokenizedText TokenizedText::whitespace(std::string raw, LanguageTag lang) {
  const std::u32string cps = utf8::decode(raw);
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && u_isUWhiteSpace(static_cast<UChar32>(cps[i]))) ++i;
    if (i == cps.size()) break;
    const std::size_t start = i;
    while (i < cps.size() && !u_isUWhiteSpace(static_cast<UChar32>(cps[i]))) ++i;
    tokens.push_back(
        {utf8::encode(std::u32string_view(cps).substr(start, i - start)), start, i});
  }
  return TokenizedText(std::move(raw), std::move(tokens), std::move(lang));
}

TokenizedText TokenizedText::from_words(std::span<const std::string> words, LanguageTag lang) {
  std::string raw;
  std::vector<Token> tokens;
  tokens.reserve(words.size());
  std::size_t pos = 0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    if (k > 0) {
      raw.push_back(' ');
      ++pos;
    }
    const std::size_t len = utf8::length(words[k]);
    tokens.push_back({words[k], pos, pos + len});
    raw += words[k];
    pos += len;
  }
  return TokenizedText(std::move(raw), std::move(tokens), std::move(lang));
}

std::string TokenizedText::substr(std::size_t begin, std::size_t end) const {
  if (begin > end || end > char_length()) {
    throw std::out_of_range("character range [" + std::to_string(begin) + ", " +
                            std::to_string(end) + ") outside text of length " +
                            std::to_string(char_length()));
  }
  return raw_.substr(offsets_[begin], offsets_[end] - offsets_[begin]);
}

std::vector<std::string> TokenizedText::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens_.size());
  for (const auto& t : tokens_) out.push_back(t.surface);
  return out;
}

std::vector<std::string> TokenizedText::violations() const {
  std::vector<std::string> out;
  const std::size_t len = char_length();
  std::size_t prev_end = 0;
  for (std::size_t k = 0; k < tokens_.size(); ++k) {
    const Token& t = tokens_[k];
    const std::string where = "token " + std::to_string(k);
    if (t.char_start > t.char_end || t.char_end > len) {
      out.push_back(where + " range [" + std::to_string(t.char_start) + ", " +
                    std::to_string(t.char_end) + ") outside [0, " + std::to_string(len) + "]");
      continue;
    }
    if (k > 0 && t.char_start < prev_end) {
      out.push_back(where + " overlaps or precedes token " + std::to_string(k - 1));
    }
    if (substr(t.char_start, t.char_end) != t.surface) {
      out.push_back(where + " surface \"" + t.surface + "\" differs from raw text \"" +
                    substr(t.char_start, t.char_end) + "\"");
    }
    prev_end = t.char_end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// AttentionMatrix

AttentionMatrix::AttentionMatrix(std::size_t source_len, std::size_t target_len,
                                 std::vector<double> values)
    : rows_(source_len), cols_(target_len), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("attention matrix expects " + std::to_string(rows_ * cols_) +
                                " values, got " + std::to_string(values_.size()));
  }
}

double AttentionMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) {
    throw std::out_of_range("attention index (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return (*this)(i, j);
}

double AttentionMatrix::column_sum(std::size_t j) const {
  double s = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, j);
  return s;
}

std::vector<double> AttentionMatrix::column(std::size_t j) const {
  std::vector<double> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

std::vector<std::string> AttentionMatrix::violations() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      const double v = (*this)(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        out.push_back("attention entry (" + std::to_string(i) + ", " + std::to_string(j) +
                      ") = " + fmt_double(v) + " outside [0, 1]");
      }
    }
  }
  for (std::size_t j = 0; j < cols_; ++j) {
    const double s = column_sum(j);
    if (!(std::abs(s - 1.0) <= kStochasticTolerance)) {
      out.push_back("attention column " + std::to_string(j) + " sums to " + fmt_double(s));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// TranslationRecord

std::vector<std::string> validate_record(const TranslationRecord& r) {
  std::vector<std::string> out;
  append_prefixed(out, r.source.violations(), "source ");
  append_prefixed(out, r.target.violations(), "target ");

  const AttentionMatrix& a = r.attention;
  if (a.source_len() != r.source.size()) {
    out.push_back("attention has " + std::to_string(a.source_len()) + " source rows but source has " +
                  std::to_string(r.source.size()) + " tokens");
  }
  if (a.target_len() != r.target.size()) {
    out.push_back("attention has " + std::to_string(a.target_len()) +
                  " target columns but target has " + std::to_string(r.target.size()) + " tokens");
  }
  auto matrix = a.violations();
  out.insert(out.end(), matrix.begin(), matrix.end());

  if (r.sentence_blocks) {
    const auto& blocks = *r.sentence_blocks;
    std::size_t src = 0;
    std::size_t tgt = 0;
    bool shape_ok = true;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const SentenceBlock& blk = blocks[b];
      if (blk.source_begin != src || blk.target_begin != tgt || blk.source_end < blk.source_begin ||
          blk.target_end < blk.target_begin) {
        out.push_back("sentence block " + std::to_string(b) + " does not continue the partition");
        shape_ok = false;
        break;
      }
      src = blk.source_end;
      tgt = blk.target_end;
    }
    if (shape_ok && (src != a.source_len() || tgt != a.target_len())) {
      out.push_back("sentence blocks cover " + std::to_string(src) + "x" + std::to_string(tgt) +
                    " but attention is " + std::to_string(a.source_len()) + "x" +
                    std::to_string(a.target_len()));
      shape_ok = false;
    }
    if (shape_ok) {
      for (std::size_t b = 0; b < blocks.size(); ++b) {
        const SentenceBlock& blk = blocks[b];
        for (std::size_t j = blk.target_begin; j < blk.target_end; ++j) {
          for (std::size_t i = 0; i < a.source_len(); ++i) {
            const bool inside = i >= blk.source_begin && i < blk.source_end;
            if (!inside && a(i, j) != 0.0) {
              out.push_back("attention entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") lies outside sentence block " + std::to_string(b) +
                            " but is non-zero");
            }
          }
        }
      }
    }
  }
  return out;
}

TranslationRecord compose_sentences(std::span<const TranslationRecord> parts) {
  if (parts.empty()) throw std::invalid_argument("compose_sentences: no parts");

  auto concat = [](std::span<const TranslationRecord> ps, bool source) {
    std::string raw;
    std::vector<Token> tokens;
    std::size_t char_base = 0;
    for (std::size_t p = 0; p < ps.size(); ++p) {
      const TokenizedText& t = source ? ps[p].source : ps[p].target;
      if (p > 0) {
        raw.push_back(' ');
        ++char_base;
      }
      raw += t.raw();
      for (const Token& tok : t.tokens()) {
        tokens.push_back({tok.surface, tok.char_start + char_base, tok.char_end + char_base});
      }
      char_base += t.char_length();
    }
    const TokenizedText& first = source ? ps.front().source : ps.front().target;
    return TokenizedText(std::move(raw), std::move(tokens), first.language());
  };

  TranslationRecord out;
  out.source = concat(parts, true);
  out.target = concat(parts, false);

  const std::size_t rows = out.source.size();
  const std::size_t cols = out.target.size();
  std::vector<double> values(rows * cols, 0.0);
  std::vector<SentenceBlock> blocks;
  std::size_t row_base = 0;
  std::size_t col_base = 0;
  for (const TranslationRecord& p : parts) {
    const AttentionMatrix& a = p.attention;
    for (std::size_t i = 0; i < a.source_len(); ++i) {
      for (std::size_t j = 0; j < a.target_len(); ++j) {
        values[(row_base + i) * cols + (col_base + j)] = a(i, j);
      }
    }
    blocks.push_back({row_base, row_base + a.source_len(), col_base, col_base + a.target_len()});
    row_base += a.source_len();
    col_base += a.target_len();
  }
  out.attention = AttentionMatrix(rows, cols, std::move(values));
  out.sentence_blocks = std::move(blocks);
  return out;
}

std::optional<std::size_t> block_of_target(const TranslationRecord& r, std::size_t j) {
  if (!r.sentence_blocks) return std::nullopt;
  const auto& blocks = *r.sentence_blocks;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (j >= blocks[b].target_begin && j < blocks[b].target_end) return b;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// SpanDistributions / QAExample / Prediction

std::vector<std::string> SpanDistributions::violations() const {
  std::vector<std::string> out;
  if (p_start.size() != p_end.size()) {
    out.push_back("p_start has " + std::to_string(p_start.size()) + " entries, p_end has " +
                  std::to_string(p_end.size()));
  }
  auto check = [&out](const std::vector<double>& p, const char* name) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!(p[i] >= 0.0)) {
        out.push_back(std::string(name) + "[" + std::to_string(i) + "] = " + fmt_double(p[i]) +
                      " is negative");
      }
      s += p[i];
    }
    if (!(std::abs(s - 1.0) <= kStochasticTolerance)) {
      out.push_back(std::string(name) + " sums to " + fmt_double(s));
    }
  };
  check(p_start, "p_start");
  check(p_end, "p_end");
  return out;
}

std::vector<std::string> QAExample::violations() const {
  std::vector<std::string> out;
  append_prefixed(out, context.violations(), "context ");
  append_prefixed(out, question.violations(), "question ");
  for (std::size_t k = 0; k < answers.size(); ++k) {
    const GoldAnswer& a = answers[k];
    const std::size_t len = utf8::length(a.text);
    if (a.char_start + len > context.char_length() ||
        context.substr(a.char_start, a.char_start + len) != a.text) {
      out.push_back("answer " + std::to_string(k) + " \"" + a.text + "\" not found at offset " +
                    std::to_string(a.char_start));
    }
  }
  return out;
}

std::string_view to_string(PredictionMode mode) {
  return mode == PredictionMode::kExtractive ? "extractive" : "generated";
}

PredictionMode parse_prediction_mode(std::string_view s) {
  if (s == "extractive") return PredictionMode::kExtractive;
  if (s == "generated") return PredictionMode::kGenerated;
  throw std::invalid_argument("unknown prediction mode: " + std::string(s));
}

std::vector<std::string> Prediction::violations(const TokenizedText& context) const {
  std::vector<std::string> out;
  if (mode != PredictionMode::kExtractive) return out;
  if (!char_range) {
    out.push_back("extractive prediction " + example_id + " has no character range");
    return out;
  }
  if (char_range->start > char_range->end || char_range->end > context.char_length()) {
    out.push_back("prediction " + example_id + " range outside context");
  } else if (context.substr(char_range->start, char_range->end) != answer_text) {
    out.push_back("prediction " + example_id + " answer differs from context substring");
  }
  return out;
}

CharRange span_to_char_range(const TokenizedText& text, TokenSpan span) {
  if (span.start > span.end || span.end >= text.size()) {
    throw std::out_of_range("token span (" + std::to_string(span.start) + ", " +
                            std::to_string(span.end) + ") invalid for text with " +
                            std::to_string(text.size()) + " tokens");
  }
  return {text.token(span.start).char_start, text.token(span.end).char_end};
}

std::optional<TokenSpan> char_range_to_span(const TokenizedText& text, CharRange range) {
  std::optional<std::size_t> first;
  std::size_t last = 0;
  const auto tokens = text.tokens();
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k].char_end > range.start && tokens[k].char_start < range.end) {
      if (!first) first = k;
      last = k;
    }
  }
  if (!first) return std::nullopt;
  return TokenSpan{*first, last};
}

}  // namespace xrc
