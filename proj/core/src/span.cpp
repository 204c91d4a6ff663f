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

#include "xrc/span.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <stdexcept>

namespace xrc {
namespace {

void check_distributions(const SpanDistributions& d, const SpanSelectConfig& cfg) {
  if (d.p_start.empty() || d.p_end.empty()) {
    throw std::invalid_argument("span selection over empty distributions");
  }
  if (d.p_start.size() != d.p_end.size()) {
    throw std::invalid_argument("p_start and p_end lengths differ");
  }
  if (cfg.max_span_len && *cfg.max_span_len == 0) {
    throw std::invalid_argument("max_span_len must be >= 1");
  }
}

std::string span_str(TokenSpan s) {
  return "(" + std::to_string(s.start) + ", " + std::to_string(s.end) + ")";
}

}  // namespace

TokenSpan select_span(const SpanDistributions& d, const SpanSelectConfig& cfg) {
  check_distributions(d, cfg);
  const std::size_t n = d.size();
  const std::size_t cap = cfg.max_span_len.value_or(n);

  // Window of admissible starts for end e is [e - cap + 1, e]. The deque
  // holds candidate starts with strictly decreasing p_start, so its front is
  // the lowest-index maximum of the window.
  std::deque<std::size_t> window;
  TokenSpan best{0, 0};
  double best_joint = -1.0;
  for (std::size_t e = 0; e < n; ++e) {
    while (!window.empty() && d.p_start[window.back()] < d.p_start[e]) window.pop_back();
    window.push_back(e);
    const std::size_t lo = e + 1 >= cap ? e + 1 - cap : 0;
    while (window.front() < lo) window.pop_front();

    // A zero end probability ties every start at zero; the smallest start wins.
    const std::size_t s = d.p_end[e] == 0.0 ? lo : window.front();
    const double joint = d.p_start[s] * d.p_end[e];
    if (joint > best_joint || (joint == best_joint && s < best.start)) {
      best_joint = joint;
      best = {s, e};
    }
  }
  assert(best.start <= best.end);
  return best;
}

TokenSpan select_span_bruteforce(const SpanDistributions& d, const SpanSelectConfig& cfg) {
  check_distributions(d, cfg);
  const std::size_t n = d.size();
  TokenSpan best{0, 0};
  double best_joint = -1.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t e = s; e < n; ++e) {
      if (cfg.max_span_len && e - s + 1 > *cfg.max_span_len) break;
      const double joint = d.p_start[s] * d.p_end[e];
      if (joint > best_joint) {
        best_joint = joint;
        best = {s, e};
      }
    }
  }
  return best;
}

std::size_t project_position(const AttentionMatrix& a, std::size_t j) {
  if (j >= a.target_len()) {
    throw std::out_of_range("project_position: column " + std::to_string(j) + " outside " +
                            std::to_string(a.target_len()) + " target tokens");
  }
  if (a.source_len() == 0) throw std::invalid_argument("project_position: empty source");
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.source_len(); ++i) {
    if (a(i, j) > a(best, j)) best = i;
  }
  return best;
}

TokenSpan project_span(const AttentionMatrix& a, TokenSpan pivot_span) {
  if (pivot_span.start > pivot_span.end || pivot_span.end >= a.target_len()) {
    throw std::out_of_range("project_span: span " + span_str(pivot_span) + " invalid for " +
                            std::to_string(a.target_len()) + " target tokens");
  }
  TokenSpan out{a.source_len(), 0};
  for (std::size_t j = pivot_span.start; j <= pivot_span.end; ++j) {
    const std::size_t l = project_position(a, j);
    out.start = std::min(out.start, l);
    out.end = std::max(out.end, l);
  }
  return out;
}

std::size_t project_record_position(const TranslationRecord& record, std::size_t j) {
  const AttentionMatrix& a = record.attention;
  if (!record.sentence_blocks) return project_position(a, j);
  const auto b = block_of_target(record, j);
  if (!b) throw std::out_of_range("target column " + std::to_string(j) + " lies in no sentence block");
  const SentenceBlock& blk = (*record.sentence_blocks)[*b];
  if (blk.source_end == blk.source_begin) {
    throw std::invalid_argument("sentence block " + std::to_string(*b) + " has no source rows");
  }
  std::size_t best = blk.source_begin;
  for (std::size_t i = blk.source_begin + 1; i < blk.source_end; ++i) {
    if (a(i, j) > a(best, j)) best = i;
  }
  return best;
}

ExtractedAnswer extract_answer(const TranslationRecord& record, TokenSpan pivot_span) {
  const AttentionMatrix& a = record.attention;
  if (pivot_span.start > pivot_span.end || pivot_span.end >= a.target_len() ||
      pivot_span.end >= record.target.size()) {
    throw std::out_of_range("extract_answer: span " + span_str(pivot_span) +
                            " outside attention with " + std::to_string(a.target_len()) +
                            " target columns");
  }

  TokenSpan source_span{a.source_len(), 0};
  for (std::size_t j = pivot_span.start; j <= pivot_span.end; ++j) {
    const std::size_t l = project_record_position(record, j);
    source_span.start = std::min(source_span.start, l);
    source_span.end = std::max(source_span.end, l);
  }

  ExtractedAnswer out;
  out.pivot_span = pivot_span;
  out.source_span = source_span;
  out.char_range = span_to_char_range(record.source, source_span);
  out.text = record.source.substr(out.char_range.start, out.char_range.end);
  out.dilation =
      static_cast<long>(source_span.length()) - static_cast<long>(pivot_span.length());
  return out;
}

}  // namespace xrc
