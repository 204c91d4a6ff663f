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

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "test_util.hpp"
#include "xrc/metrics.hpp"
#include "xrc/rng.hpp"

namespace xrc {
namespace {

using testing::words;

std::vector<std::string> toks(const std::string& s) {
  return TokenizedText::whitespace(s, LanguageTag()).surfaces();
}

// Independent character F1 over ASCII strings without normalization.
double f1_oracle(const std::string& p, const std::string& g) {
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<char, int> cp, cg;
  for (char c : p) ++cp[c];
  for (char c : g) ++cg[c];
  int common = 0;
  for (auto [c, n] : cp) common += std::min(n, cg[c]);
  if (common == 0) return 0.0;
  const double prec = static_cast<double>(common) / static_cast<double>(p.size());
  const double rec = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * prec * rec / (prec + rec);
}

QAExample example(const std::string& id, const std::string& ctx, const std::string& answer) {
  const auto context = TokenizedText::whitespace(ctx, LanguageTag("x"));
  const auto pos = ctx.find(answer);
  return QAExample{id, context, words({"q", "?"}, "x"), {{answer, pos}}};
}

TEST(NormalizeText, Examples) {
  EXPECT_EQ(normalize_text("Ｔｅｓｌａ"), "tesla");
  EXPECT_EQ(normalize_text("Le Chat"), "lechat");
  const NormalizationConfig off{false, false, false, false};
  EXPECT_EQ(normalize_text(" Ｔｅ, sla ", off), " Ｔｅ, sla ");
}

TEST(NormalizeText, PunctuationIsOptional) {
  EXPECT_EQ(normalize_text("a, b."), "a,b.");
  NormalizationConfig cfg;
  cfg.strip_punctuation = true;
  EXPECT_EQ(normalize_text("a, b.「c」", cfg), "abc");
}

TEST(NormalizeText, Idempotent) {
  for (const char* s : {"Ｈｅｌｌｏ Wörld", "ＡＢＣ　ｄｅｆ", "ﬁ ligature", "東京タワー"}) {
    const auto once = normalize_text(s);
    EXPECT_EQ(normalize_text(once), once) << s;
  }
}

TEST(CharF1, Examples) {
  EXPECT_DOUBLE_EQ(char_f1("paris", "paris"), 1.0);
  EXPECT_EQ(char_f1("abc", "ab"), 0.8);
  EXPECT_EQ(char_f1("abc", "xyz"), 0.0);
  EXPECT_EQ(char_f1("", "abc"), 0.0);
  EXPECT_EQ(char_f1("abc", ""), 0.0);
}

TEST(CharF1, BothEmptyScoresOne) {
  EXPECT_EQ(char_f1("", ""), 1.0);
  EXPECT_EQ(char_f1(" ", ""), 1.0);
  EXPECT_EQ(exact_match(" ", ""), 1);
}

TEST(CharF1, MaxOverGolds) {
  const std::vector<std::string> golds{"xyz", "ab", "abc"};
  EXPECT_EQ(char_f1("abc", golds), 1.0);
  EXPECT_THROW(char_f1("abc", std::vector<std::string>{}), std::invalid_argument);
}

TEST(CharF1, CountsCodePointsNotBytes) {
  // Two of three code points shared; a byte count would differ.
  EXPECT_NEAR(char_f1("東京都", "東京"), 0.8, 1e-15);
}

TEST(CharF1, MatchesOracleAndIsSymmetric) {
  Rng rng(9);
  const std::string alphabet = "abcde";
  NormalizationConfig off{false, false, false, false};
  for (int trial = 0; trial < 2000; ++trial) {
    std::string p, g;
    for (std::size_t n = rng.below(8); n > 0; --n) p += alphabet[rng.below(alphabet.size())];
    for (std::size_t n = rng.below(8); n > 0; --n) g += alphabet[rng.below(alphabet.size())];
    const double f = char_f1(p, g, off);
    EXPECT_NEAR(f, f1_oracle(p, g), 1e-15) << p << " / " << g;
    EXPECT_EQ(f, char_f1(g, p, off));
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0);
    if (exact_match(p, g, off)) EXPECT_EQ(f, 1.0);
  }
}

TEST(ExactMatch, Examples) {
  EXPECT_EQ(exact_match("Paris ", "paris"), 1);
  EXPECT_EQ(exact_match("paris", "lyon"), 0);
  EXPECT_EQ(exact_match("ab c", "abc"), 1);
  const std::vector<std::string> golds{"lyon", "Paris"};
  EXPECT_EQ(exact_match("paris", golds), 1);
}

TEST(EvaluateDataset, PerfectPredictions) {
  const std::vector<QAExample> ex{example("a", "le chat dort", "chat"),
                                  example("b", "il pleut", "pleut")};
  const std::vector<Prediction> preds{{"a", "chat", CharRange{3, 7}, PredictionMode::kExtractive},
                                      {"b", "pleut", CharRange{3, 8}, PredictionMode::kExtractive}};
  const auto r = evaluate_dataset(preds, ex);
  EXPECT_EQ(r.f1, 100.0);
  EXPECT_EQ(r.em, 100.0);
  EXPECT_EQ(r.n, 2u);
  EXPECT_EQ(r.substring_rate, 1.0);
  ASSERT_EQ(r.per_example.size(), 2u);
  EXPECT_EQ(r.per_example[1].id, "b");
}

TEST(EvaluateDataset, OnePerfectOneEmpty) {
  const std::vector<QAExample> ex{example("a", "le chat dort", "chat"),
                                  example("b", "il pleut", "pleut")};
  const std::vector<Prediction> preds{{"a", "chat", CharRange{3, 7}, PredictionMode::kExtractive},
                                      {"b", "", std::nullopt, PredictionMode::kGenerated}};
  const auto r = evaluate_dataset(preds, ex);
  EXPECT_EQ(r.em, 50.0);
  EXPECT_EQ(r.f1, 50.0);
}

TEST(EvaluateDataset, MissingPredictionScoresZero) {
  const std::vector<QAExample> ex{example("a", "le chat dort", "chat"),
                                  example("b", "il pleut", "pleut")};
  const std::vector<Prediction> preds{{"b", "pleut", CharRange{3, 8}, PredictionMode::kExtractive}};
  const auto r = evaluate_dataset(preds, ex);
  EXPECT_EQ(r.em, 50.0);
  EXPECT_EQ(r.n, 2u);
}

TEST(EvaluateDataset, RejectsDuplicateAndUnknownIds) {
  const std::vector<QAExample> ex{example("a", "le chat dort", "chat")};
  const Prediction p{"a", "chat", CharRange{3, 7}, PredictionMode::kExtractive};
  EXPECT_THROW(evaluate_dataset(std::vector<Prediction>{p, p}, ex), std::invalid_argument);
  const Prediction q{"zz", "chat", std::nullopt, PredictionMode::kGenerated};
  EXPECT_THROW(evaluate_dataset(std::vector<Prediction>{q}, ex), std::invalid_argument);
}

TEST(EvaluateDataset, EmptyDataset) {
  const auto r = evaluate_dataset(std::vector<Prediction>{}, std::vector<QAExample>{});
  EXPECT_EQ(r.n, 0u);
  EXPECT_EQ(r.em, 0.0);
  EXPECT_EQ(r.substring_rate, 1.0);
}

TEST(EvaluateDataset, MultipleGoldsTakeBest) {
  QAExample ex = example("a", "le chat noir dort", "chat");
  ex.answers.push_back({"chat noir", 3});
  const std::vector<Prediction> preds{
      {"a", "chat noir", CharRange{3, 12}, PredictionMode::kExtractive}};
  const std::vector<QAExample> exs{ex};
  EXPECT_EQ(evaluate_dataset(preds, exs).em, 100.0);
}

TEST(SubstringRate, Examples) {
  const std::vector<QAExample> ex{example("a", "le chat dort", "chat"),
                                  example("b", "il pleut", "pleut"),
                                  example("c", "un deux trois", "deux"),
                                  example("d", "rouge vert", "vert")};
  const std::vector<Prediction> absent{{"a", "chien", std::nullopt, PredictionMode::kGenerated},
                                       {"b", "neige", std::nullopt, PredictionMode::kGenerated}};
  EXPECT_EQ(substring_rate(absent, ex).rate, 0.0);
  const std::vector<Prediction> mixed{{"a", "chat", std::nullopt, PredictionMode::kGenerated},
                                      {"b", "pleut", std::nullopt, PredictionMode::kGenerated},
                                      {"c", "quatre", std::nullopt, PredictionMode::kGenerated},
                                      {"d", "vert", std::nullopt, PredictionMode::kGenerated}};
  const auto r = substring_rate(mixed, ex);
  EXPECT_EQ(r.numerator, 3u);
  EXPECT_EQ(r.denominator, 4u);
  EXPECT_EQ(r.rate, 0.75);
}

TEST(SubstringRate, IsCaseSensitive) {
  const std::vector<QAExample> ex{example("a", "le chat dort", "chat")};
  const std::vector<Prediction> p{{"a", "Chat", std::nullopt, PredictionMode::kGenerated}};
  EXPECT_EQ(substring_rate(p, ex).rate, 0.0);
}

TEST(SubstringRate, ArithmeticOnLargeFixture) {
  std::vector<QAExample> ex;
  std::vector<Prediction> preds;
  for (int i = 0; i < 327; ++i) {
    const std::string id = "q" + std::to_string(i);
    ex.push_back(example(id, "alpha beta", "beta"));
    preds.push_back({id, i < 143 ? "beta" : "gamma", std::nullopt, PredictionMode::kGenerated});
  }
  const auto r = substring_rate(preds, ex);
  EXPECT_EQ(r.numerator, 143u);
  EXPECT_NEAR(r.rate, 0.4373, 1e-4);
}

TEST(CorpusBleu, HandComputedPair) {
  const std::vector<std::vector<std::string>> hyp{toks("the cat sat on mat")};
  const std::vector<std::vector<std::string>> ref{toks("the cat sat on the mat")};
  const auto d = corpus_bleu_detail(hyp, ref);
  ASSERT_EQ(d.precisions.size(), 4u);
  EXPECT_DOUBLE_EQ(d.precisions[0], 1.0);
  EXPECT_DOUBLE_EQ(d.precisions[1], 0.75);
  EXPECT_DOUBLE_EQ(d.precisions[2], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(d.precisions[3], 0.5);
  EXPECT_NEAR(d.brevity_penalty, std::exp(-0.2), 1e-12);
  const double oracle = 100 * std::exp(-0.2) * std::pow(1.0 * 0.75 * (2.0 / 3.0) * 0.5, 0.25);
  EXPECT_NEAR(d.score, oracle, 1e-9);
  EXPECT_NEAR(d.score, 57.89, 0.01);
}

TEST(CorpusBleu, IdenticalCorpusScoresHundred) {
  Rng rng(4);
  std::vector<std::vector<std::string>> corpus;
  for (int s = 0; s < 20; ++s) {
    std::vector<std::string> sent;
    for (std::size_t n = 4 + rng.below(10); n > 0; --n) sent.push_back("w" + std::to_string(rng.below(30)));
    corpus.push_back(sent);
  }
  EXPECT_NEAR(corpus_bleu(corpus, corpus), 100.0, 1e-9);
}

TEST(CorpusBleu, EmptyHypothesisScoresZero) {
  const std::vector<std::vector<std::string>> hyp{{}};
  const std::vector<std::vector<std::string>> ref{toks("a b c d")};
  EXPECT_EQ(corpus_bleu(hyp, ref), 0.0);
}

TEST(CorpusBleu, ClipsRepeatedNgrams) {
  const std::vector<std::vector<std::string>> hyp{toks("the the the the")};
  const std::vector<std::vector<std::string>> ref{toks("the cat is here")};
  const auto d = corpus_bleu_detail(hyp, ref, {1, false});
  EXPECT_DOUBLE_EQ(d.precisions[0], 0.25);
}

TEST(CorpusBleu, RejectsMismatchedCorpora) {
  const std::vector<std::vector<std::string>> one{toks("a b")};
  const std::vector<std::vector<std::string>> two{toks("a b"), toks("c d")};
  EXPECT_THROW(corpus_bleu(one, two), std::invalid_argument);
  EXPECT_THROW(corpus_bleu(std::vector<std::vector<std::string>>{},
                           std::vector<std::vector<std::string>>{}),
               std::invalid_argument);
}

TEST(CorpusBleu, SmoothingKeepsShortMatchesPositive) {
  const std::vector<std::vector<std::string>> hyp{toks("a b x y")};
  const std::vector<std::vector<std::string>> ref{toks("a b c d")};
  EXPECT_EQ(corpus_bleu(hyp, ref), 0.0);
  EXPECT_GT(corpus_bleu(hyp, ref, {4, true}), 0.0);
}

}  // namespace
}  // namespace xrc
