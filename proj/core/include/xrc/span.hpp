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

// Answer span selection over start/end distributions and projection of a
// pivot-language span back onto the source text through attention.

#ifndef XRC_SPAN_HPP_
#define XRC_SPAN_HPP_

#include <cstddef>
#include <optional>
#include <string>

#include "xrc/types.hpp"

namespace xrc {

struct SpanSelectConfig {
  // Cap on end - start + 1. Unbounded when empty.
  std::optional<std::size_t> max_span_len;
};

// argmax over start <= end of p_start[start] * p_end[end]; ties go to the
// smaller start, then the smaller end. Linear time. Throws
// std::invalid_argument on empty or mismatched distributions.
TokenSpan select_span(const SpanDistributions& d, const SpanSelectConfig& cfg = {});

// Same contract as select_span by explicit quadratic enumeration.
TokenSpan select_span_bruteforce(const SpanDistributions& d, const SpanSelectConfig& cfg = {});

// Source position most attended by target column j (lowest on ties).
std::size_t project_position(const AttentionMatrix& a, std::size_t j);

// (min, max) of project_position over the pivot span's columns.
TokenSpan project_span(const AttentionMatrix& a, TokenSpan pivot_span);

// project_position restricted to the sentence block that owns column j,
// or over all rows when the record has no blocks.
std::size_t project_record_position(const TranslationRecord& record, std::size_t j);

struct ExtractedAnswer {
  TokenSpan pivot_span;
  TokenSpan source_span;
  CharRange char_range;
  std::string text;
  // Source span length minus pivot span length; positive when the
  // projected span picked up extra source tokens.
  long dilation = 0;
};

// Projects pivot_span (over record.target) onto record.source and reads
// the answer string off the source text. With sentence blocks, each column
// is argmaxed inside its own block before the global min/max.
ExtractedAnswer extract_answer(const TranslationRecord& record, TokenSpan pivot_span);

}  // namespace xrc

#endif  // XRC_SPAN_HPP_
