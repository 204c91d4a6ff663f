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

#include "xrc/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "xrc/attention.hpp"
#include "xrc/rng.hpp"
#include "xrc/span.hpp"
#include "xrc/utf8.hpp"

namespace xrc {
namespace {

constexpr std::uint64_t kReorderStream = 0x52454f52444552ULL;  // "REORDER"

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " " + std::to_string(rate) + " outside [0, 1]");
  }
}

struct TargetWord {
  std::string surface;
  std::size_t gold;  // source token index
};

// Half-open source token ranges, split after every terminator.
std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges(const TokenizedText& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (is_sentence_terminator(text.token(i).surface)) {
      out.emplace_back(begin, i + 1);
      begin = i + 1;
    }
  }
  if (begin < text.size()) out.emplace_back(begin, text.size());
  return out;
}

// Block-diagonal smoothed alignment: 1 - epsilon on the gold row, epsilon
// spread over the other rows of the same block.
AttentionMatrix block_alignment(const std::vector<std::size_t>& gold,
                                const std::vector<SentenceBlock>& blocks, std::size_t rows,
                                double epsilon) {
  const std::size_t cols = gold.size();
  std::vector<double> values(rows * cols, 0.0);
  for (const SentenceBlock& b : blocks) {
    const std::size_t n = b.source_end - b.source_begin;
    const double off = n > 1 ? epsilon / static_cast<double>(n - 1) : 0.0;
    const double on = n > 1 ? 1.0 - epsilon : 1.0;
    for (std::size_t j = b.target_begin; j < b.target_end; ++j) {
      for (std::size_t i = b.source_begin; i < b.source_end; ++i) values[i * cols + j] = off;
      values[gold[j] * cols + j] = on;
    }
  }
  return AttentionMatrix(rows, cols, std::move(values));
}

// Rebuilds text with new surfaces, keeping the original inter-token gaps.
TokenizedText replace_surfaces(const TokenizedText& text, const std::vector<std::string>& surfaces) {
  std::string raw;
  std::vector<Token> tokens;
  tokens.reserve(text.size());
  std::size_t src_pos = 0;  // code points consumed from the original
  std::size_t out_pos = 0;  // code points written
  for (std::size_t k = 0; k < text.size(); ++k) {
    const Token& t = text.token(k);
    const std::string gap = text.substr(src_pos, t.char_start);
    raw += gap;
    out_pos += t.char_start - src_pos;
    const std::size_t len = utf8::length(surfaces[k]);
    tokens.push_back({surfaces[k], out_pos, out_pos + len});
    raw += surfaces[k];
    out_pos += len;
    src_pos = t.char_end;
  }
  raw += text.substr(src_pos, text.char_length());
  return TokenizedText(std::move(raw), std::move(tokens), text.language());
}

std::string make_word(Rng& rng, std::string_view consonants, std::string_view vowels,
                      std::size_t syllables) {
  std::string w;
  for (std::size_t s = 0; s < syllables; ++s) {
    w.push_back(consonants[rng.below(consonants.size())]);
    w.push_back(vowels[rng.below(vowels.size())]);
  }
  return w;
}

// Disjoint consonant sets keep source, target and synonym words apart.
constexpr std::string_view kSourceConsonants = "kstnhmrgdbz";
constexpr std::string_view kSourceVowels = "aiueo";
constexpr std::string_view kTargetConsonants = "flpvwcj";
constexpr std::string_view kTargetVowels = "aeiouy";
constexpr std::string_view kSynonymConsonants = "qx";

std::vector<std::string> unique_words(Rng& rng, std::size_t n, std::string_view consonants,
                                      std::string_view vowels, const std::set<std::string>& avoid) {
  std::vector<std::string> out;
  std::set<std::string> seen = avoid;
  std::size_t syllables = 2;
  std::size_t misses = 0;
  while (out.size() < n) {
    std::string w = make_word(rng, consonants, vowels, syllables + rng.below(2));
    if (seen.insert(w).second) {
      out.push_back(std::move(w));
      misses = 0;
    } else if (++misses > 64) {
      ++syllables;
      misses = 0;
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lexicon

std::string ReorderRule::to_string() const {
  switch (kind) {
    case ReorderKind::kIdentity:
      return "identity";
    case ReorderKind::kReverse:
      return "reverse";
    case ReorderKind::kWindowShuffle:
      return "window-shuffle:" + std::to_string(window);
  }
  return "identity";
}

ReorderRule ReorderRule::parse(std::string_view s) {
  if (s == "identity") return {};
  if (s == "reverse") return {ReorderKind::kReverse, 0};
  constexpr std::string_view prefix = "window-shuffle:";
  if (s.substr(0, prefix.size()) == prefix) {
    const std::string num(s.substr(prefix.size()));
    std::size_t pos = 0;
    unsigned long w = 0;
    try {
      w = std::stoul(num, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == num.size() && !num.empty() && w >= 1) return {ReorderKind::kWindowShuffle, w};
  }
  throw std::invalid_argument("unknown reorder rule: " + std::string(s));
}

std::vector<std::string> SyntheticLexicon::violations() const {
  std::vector<std::string> out;
  for (const auto& [word, targets] : forward) {
    if (targets.empty()) out.push_back("lexicon entry \"" + word + "\" has no translation");
  }
  for (const auto& [key, value] : synonyms) {
    if (synonyms.count(value) != 0) {
      out.push_back("synonym value \"" + value + "\" is also a synonym key");
    }
  }
  if (reorder.kind == ReorderKind::kWindowShuffle && reorder.window == 0) {
    out.push_back("window-shuffle needs a positive window");
  }
  return out;
}

void to_json(Json& j, const SyntheticLexicon& v) {
  j = Json{{"forward", v.forward}, {"reorder", v.reorder.to_string()}, {"synonyms", v.synonyms}};
}

void from_json(const Json& j, SyntheticLexicon& v) {
  v.forward = j.at("forward").get<std::map<std::string, std::vector<std::string>>>();
  v.reorder = j.contains("reorder") ? ReorderRule::parse(j.at("reorder").get<std::string>())
                                    : ReorderRule{};
  v.synonyms = j.contains("synonyms") ? j.at("synonyms").get<std::map<std::string, std::string>>()
                                      : std::map<std::string, std::string>{};
}

std::vector<std::string> NoiseConfig::violations() const {
  std::vector<std::string> out;
  if (!(drop_rate >= 0.0 && drop_rate <= 1.0)) out.push_back("drop_rate outside [0, 1]");
  if (!(paraphrase_rate >= 0.0 && paraphrase_rate <= 1.0)) {
    out.push_back("paraphrase_rate outside [0, 1]");
  }
  if (!(epsilon >= 0.0 && epsilon < 1.0)) out.push_back("epsilon outside [0, 1)");
  return out;
}

bool is_sentence_terminator(std::string_view token) {
  return token == "." || token == "!" || token == "?" || token == "\xE3\x80\x82" /* 。 */ ||
         token == "\xEF\xBC\x81" /* ！ */ || token == "\xEF\xBC\x9F" /* ？ */;
}

// ---------------------------------------------------------------------------
// Translation

TranslationRecord toy_translate(const TokenizedText& text, const SyntheticLexicon& lex,
                                const NoiseConfig& noise, const LanguageTag& target_lang) {
  if (text.empty()) throw std::invalid_argument("toy_translate: empty input");
  if (auto v = noise.violations(); !v.empty()) throw ValidationError(std::move(v));

  const std::uint64_t text_hash = utf8::fnv1a64(text.raw());
  Rng noise_rng(mix_seed(noise.seed, text_hash));
  Rng order_rng(mix_seed(noise.seed ^ kReorderStream, text_hash));

  const auto sentences = sentence_ranges(text);
  std::vector<std::string> words;
  std::vector<std::size_t> gold;
  std::vector<SentenceBlock> blocks;
  for (const auto& [begin, end] : sentences) {
    std::vector<std::size_t> order(end - begin);
    std::iota(order.begin(), order.end(), begin);
    switch (lex.reorder.kind) {
      case ReorderKind::kIdentity:
        break;
      case ReorderKind::kReverse:
        std::reverse(order.begin(), order.end());
        break;
      case ReorderKind::kWindowShuffle:
        for (std::size_t w = 0; w < order.size(); w += lex.reorder.window) {
          const std::size_t len = std::min(lex.reorder.window, order.size() - w);
          order_rng.shuffle(std::span<std::size_t>(order.data() + w, len));
        }
        break;
    }

    SentenceBlock block{begin, end, words.size(), words.size()};
    for (std::size_t i : order) {
      const std::string& surface = text.token(i).surface;
      auto it = lex.forward.find(surface);
      const std::vector<std::string> fallback{surface};
      const auto& targets = it != lex.forward.end() ? it->second : fallback;
      for (const std::string& t : targets) {
        // Both draws are always taken so that, for a fixed seed, the set of
        // dropped tokens grows monotonically with drop_rate.
        const double u_drop = noise_rng.uniform();
        const double u_para = noise_rng.uniform();
        if (u_drop < noise.drop_rate) continue;
        auto syn = lex.synonyms.find(t);
        const bool paraphrase = u_para < noise.paraphrase_rate && syn != lex.synonyms.end();
        words.push_back(paraphrase ? syn->second : t);
        gold.push_back(i);
      }
    }
    block.target_end = words.size();
    blocks.push_back(block);
  }

  TranslationRecord rec;
  rec.source = text;
  rec.target = TokenizedText::from_words(words, target_lang);
  rec.attention = block_alignment(gold, blocks, text.size(), noise.epsilon);
  if (blocks.size() > 1) rec.sentence_blocks = std::move(blocks);
  return rec;
}

std::string toy_back_translate(std::string_view answer, const SyntheticLexicon& lex,
                               std::uint64_t seed) {
  const TokenizedText text = TokenizedText::whitespace(std::string(answer), LanguageTag());
  if (text.empty()) return "";

  std::map<std::string, std::string> unsynonym;
  for (const auto& [key, value] : lex.synonyms) unsynonym.emplace(value, key);
  std::vector<std::string> tokens;
  for (const Token& t : text.tokens()) {
    auto it = unsynonym.find(t.surface);
    tokens.push_back(it != unsynonym.end() ? it->second : t.surface);
  }

  std::map<std::vector<std::string>, std::vector<std::string>> inverse;
  std::size_t longest = 1;
  for (const auto& [source, targets] : lex.forward) {
    inverse[targets].push_back(source);
    longest = std::max(longest, targets.size());
  }

  Rng rng(mix_seed(seed, utf8::fnv1a64(answer)));
  std::vector<std::string> out;
  std::size_t k = 0;
  while (k < tokens.size()) {
    bool matched = false;
    for (std::size_t len = std::min(longest, tokens.size() - k); len >= 1; --len) {
      const std::vector<std::string> phrase(tokens.begin() + static_cast<long>(k),
                                            tokens.begin() + static_cast<long>(k + len));
      auto it = inverse.find(phrase);
      if (it == inverse.end()) continue;
      const auto& candidates = it->second;
      out.push_back(candidates.size() == 1 ? candidates.front()
                                           : candidates[rng.below(candidates.size())]);
      k += len;
      matched = true;
      break;
    }
    if (!matched) out.push_back(tokens[k++]);
  }
  std::string joined;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i > 0) joined.push_back(' ');
    joined += out[i];
  }
  return joined;
}

std::optional<TokenSpan> forward_project_span(const TranslationRecord& record,
                                              TokenSpan source_span) {
  std::optional<TokenSpan> out;
  for (std::size_t j = 0; j < record.attention.target_len(); ++j) {
    const std::size_t l = project_record_position(record, j);
    if (l < source_span.start || l > source_span.end) continue;
    if (!out) {
      out = TokenSpan{j, j};
    } else {
      out->end = j;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// RC oracles

SpanDistributions perfect_rc(const TranslationRecord& context, TokenSpan gold_pivot_span,
                             double peak) {
  const std::size_t n = context.target.size();
  if (gold_pivot_span.start > gold_pivot_span.end || gold_pivot_span.end >= n) {
    throw std::out_of_range("perfect_rc: gold span (" + std::to_string(gold_pivot_span.start) +
                            ", " + std::to_string(gold_pivot_span.end) + ") invalid for " +
                            std::to_string(n) + " pivot tokens");
  }
  if (!(peak > 0.0 && peak <= 1.0)) throw std::invalid_argument("perfect_rc: peak outside (0, 1]");
  const double rest = n > 1 ? (1.0 - peak) / static_cast<double>(n - 1) : 0.0;
  SpanDistributions d;
  d.p_start.assign(n, rest);
  d.p_end.assign(n, rest);
  d.p_start[gold_pivot_span.start] = n > 1 ? peak : 1.0;
  d.p_end[gold_pivot_span.end] = n > 1 ? peak : 1.0;
  return d;
}

SpanDistributions keyword_rc(const TokenizedText& context, const TokenizedText& question,
                             const RcOracleConfig& cfg) {
  if (context.empty()) throw std::invalid_argument("keyword_rc: empty context");
  if (!(cfg.temperature > 0.0)) throw std::invalid_argument("keyword_rc: temperature must be > 0");
  std::unordered_set<std::string> keywords;
  for (const Token& t : question.tokens()) keywords.insert(t.surface);

  const std::size_t n = context.size();
  // prefix[k] = keyword hits among tokens [0, k)
  std::vector<long> prefix(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) {
    prefix[k + 1] = prefix[k] + (keywords.count(context.token(k).surface) ? 1 : 0);
  }
  auto hits = [&](long lo, long hi) {  // inclusive, clamped
    lo = std::max(lo, 0L);
    hi = std::min(hi, static_cast<long>(n) - 1);
    return lo > hi ? 0L : prefix[static_cast<std::size_t>(hi) + 1] - prefix[static_cast<std::size_t>(lo)];
  };

  const long w = static_cast<long>(cfg.window);
  const long shift = static_cast<long>(cfg.end_shift);
  std::vector<double> start_scores(n);
  std::vector<double> end_scores(n);
  for (std::size_t k = 0; k < n; ++k) {
    const long kk = static_cast<long>(k);
    start_scores[k] = static_cast<double>(hits(kk - w, kk + w)) / cfg.temperature;
    end_scores[k] = static_cast<double>(hits(kk - w - shift, kk + w - shift)) / cfg.temperature;
  }
  return SpanDistributions{softmax(start_scores), softmax(end_scores)};
}

// ---------------------------------------------------------------------------
// Noise

TranslationRecord inject_under_translation(const TranslationRecord& rec, double rate,
                                           std::uint64_t seed) {
  check_rate(rate, "drop rate");
  Rng rng(mix_seed(seed, utf8::fnv1a64(rec.target.raw())));
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < rec.target.size(); ++j) {
    if (!(rng.uniform() < rate)) keep.push_back(j);
  }
  if (keep.size() == rec.target.size()) return rec;

  std::vector<std::string> words;
  words.reserve(keep.size());
  for (std::size_t j : keep) words.push_back(rec.target.token(j).surface);

  const AttentionMatrix& a = rec.attention;
  const std::size_t rows = a.source_len();
  const std::size_t cols = keep.size();
  std::vector<double> values(rows * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    const double sum = a.column_sum(keep[c]);
    for (std::size_t i = 0; i < rows; ++i) {
      values[i * cols + c] = sum > 0.0 ? a(i, keep[c]) / sum : a(i, keep[c]);
    }
  }

  TranslationRecord out;
  out.source = rec.source;
  out.target = TokenizedText::from_words(words, rec.target.language());
  out.attention = AttentionMatrix(rows, cols, std::move(values));
  if (rec.sentence_blocks) {
    std::vector<SentenceBlock> blocks = *rec.sentence_blocks;
    for (SentenceBlock& b : blocks) {
      const auto lower = [&keep](std::size_t j) {
        return static_cast<std::size_t>(std::lower_bound(keep.begin(), keep.end(), j) - keep.begin());
      };
      b.target_begin = lower(b.target_begin);
      b.target_end = lower(b.target_end);
    }
    out.sentence_blocks = std::move(blocks);
  }
  return out;
}

TranslationRecord inject_paraphrase(const TranslationRecord& rec, double rate,
                                    const std::map<std::string, std::string>& synonyms,
                                    std::uint64_t seed) {
  check_rate(rate, "paraphrase rate");
  Rng rng(mix_seed(seed, utf8::fnv1a64(rec.target.raw())));
  std::vector<std::string> surfaces = rec.target.surfaces();
  bool changed = false;
  for (auto& s : surfaces) {
    const double u = rng.uniform();
    auto it = synonyms.find(s);
    if (it != synonyms.end() && u < rate) {
      s = it->second;
      changed = true;
    }
  }
  if (!changed) return rec;
  TranslationRecord out = rec;
  out.target = replace_surfaces(rec.target, surfaces);
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic data

SyntheticDataset gen_synthetic_dataset(std::size_t n_examples, std::size_t lexicon_size,
                                       std::size_t ctx_len, std::uint64_t seed,
                                       const SyntheticOptions& opts) {
  if (lexicon_size == 0 || ctx_len == 0) {
    throw std::invalid_argument("gen_synthetic_dataset: sizes must be positive");
  }
  if (2 * opts.homographs > lexicon_size) {
    throw std::invalid_argument("gen_synthetic_dataset: too many homograph pairs for lexicon");
  }
  if (opts.max_answer_len == 0) throw std::invalid_argument("max_answer_len must be >= 1");

  Rng rng(seed);
  SyntheticDataset out;
  const std::vector<std::string> vocab =
      unique_words(rng, lexicon_size, kSourceConsonants, kSourceVowels, {});
  std::set<std::string> used;
  for (const auto& source : vocab) {
    const std::size_t fertility = rng.uniform() < opts.fertility_rate ? 2 : 1;
    out.lexicon.forward[source] =
        unique_words(rng, fertility, kTargetConsonants, kTargetVowels, used);
    for (const auto& t : out.lexicon.forward[source]) used.insert(t);
  }
  if (opts.homographs > 0) {
    std::vector<std::string> shuffled = vocab;
    rng.shuffle(std::span<std::string>(shuffled));
    for (std::size_t h = 0; h < opts.homographs; ++h) {
      out.lexicon.forward[shuffled[2 * h + 1]] = out.lexicon.forward[shuffled[2 * h]];
    }
  }
  out.lexicon.reorder = opts.reorder;

  const LanguageTag lang(opts.source_lang);
  for (std::size_t e = 0; e < n_examples; ++e) {
    Rng ex_rng(mix_seed(seed, e));
    std::vector<std::string> words;
    // Sentence-internal runs [begin, end) of content words.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t run_begin = 0;
    for (std::size_t k = 0; k < ctx_len; ++k) {
      words.push_back(vocab[ex_rng.below(vocab.size())]);
      const bool boundary = opts.sentence_len > 0 && (k + 1) % opts.sentence_len == 0;
      if (boundary && k + 1 < ctx_len) {
        runs.emplace_back(run_begin, words.size());
        words.push_back(".");
        run_begin = words.size();
      }
    }
    runs.emplace_back(run_begin, words.size());
    if (opts.sentence_len > 0) words.push_back(".");

    const auto [rb, re] = runs[ex_rng.below(runs.size())];
    const std::size_t max_len = std::min(opts.max_answer_len, re - rb);
    const std::size_t len = 1 + ex_rng.below(max_len);
    const std::size_t start = rb + ex_rng.below(re - rb - len + 1);
    const TokenSpan gold{start, start + len - 1};

    std::vector<std::string> question;
    auto add_keyword = [&](long pos) {
      if (pos < 0 || pos >= static_cast<long>(words.size())) return;
      const std::string& w = words[static_cast<std::size_t>(pos)];
      if (!is_sentence_terminator(w)) question.push_back(w);
    };
    const long s = static_cast<long>(gold.start);
    const long t = static_cast<long>(gold.end);
    add_keyword(s - 2);
    add_keyword(s - 1);
    add_keyword(t + 1);
    add_keyword(t + 2);
    question.push_back("?");

    QAExample ex;
    ex.id = "syn-" + std::to_string(seed) + "-" + std::to_string(e);
    ex.context = TokenizedText::from_words(words, lang);
    ex.question = TokenizedText::from_words(question, lang);
    const CharRange range = span_to_char_range(ex.context, gold);
    ex.answers.push_back({ex.context.substr(range.start, range.end), range.start});
    out.examples.push_back(std::move(ex));
    out.gold_spans.push_back(gold);
  }
  return out;
}

std::map<std::string, std::string> make_synonym_map(const SyntheticLexicon& lex, double coverage,
                                                    std::uint64_t seed) {
  check_rate(coverage, "synonym coverage");
  std::set<std::string> vocab;
  for (const auto& [source, targets] : lex.forward) vocab.insert(targets.begin(), targets.end());
  std::vector<std::string> words(vocab.begin(), vocab.end());
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(words));
  const auto count = static_cast<std::size_t>(std::llround(coverage * static_cast<double>(words.size())));
  const auto fresh = unique_words(rng, count, kSynonymConsonants, kTargetVowels, vocab);
  std::map<std::string, std::string> out;
  for (std::size_t k = 0; k < count; ++k) out.emplace(words[k], fresh[k]);
  return out;
}

}  // namespace xrc
