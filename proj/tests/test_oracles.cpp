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

#include <algorithm>
#include <set>

#include "test_util.hpp"
#include "xrc/attention.hpp"
#include "xrc/oracles.hpp"
#include "xrc/span.hpp"

namespace xrc {
namespace {

using testing::words;

SyntheticLexicon small_lexicon(ReorderRule reorder = {}) {
  SyntheticLexicon lex;
  lex.forward = {{"ka", {"fa"}}, {"si", {"le"}}, {"tu", {"po", "vi"}}, {"mo", {"wu"}}, {"ne", {"ja"}}};
  lex.reorder = reorder;
  return lex;
}

std::vector<std::size_t> projections(const TranslationRecord& r) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < r.target.size(); ++j) out.push_back(project_record_position(r, j));
  return out;
}

TEST(ToyTranslate, IdentityLexicon) {
  SyntheticLexicon lex;
  for (const char* w : {"a", "b", "c"}) lex.forward[w] = {w};
  const auto r = toy_translate(words({"a", "b", "c"}), lex, {});
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(r.target.language().code(), "synP");
  EXPECT_EQ(r.attention, AttentionMatrix(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
  EXPECT_TRUE(validate_record(r).empty());
}

TEST(ToyTranslate, ReverseReorder) {
  const auto r = toy_translate(words({"ka", "si", "mo", "ne"}), small_lexicon({ReorderKind::kReverse, 0}), {});
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{"ja", "wu", "le", "fa"}));
  EXPECT_EQ(projections(r), (std::vector<std::size_t>{3, 2, 1, 0}));
}

TEST(ToyTranslate, FertilityGroupProjectsToOneToken) {
  const auto r = toy_translate(words({"ka", "tu", "si"}), small_lexicon(), {});
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{"fa", "po", "vi", "le"}));
  EXPECT_EQ(projections(r), (std::vector<std::size_t>{0, 1, 1, 2}));
  EXPECT_EQ(project_span(r.attention, {1, 2}), (TokenSpan{1, 1}));
}

TEST(ToyTranslate, FertilityGroupStaysContiguousUnderReversal) {
  const auto r = toy_translate(words({"ka", "tu", "si"}), small_lexicon({ReorderKind::kReverse, 0}), {});
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{"le", "po", "vi", "fa"}));
}

TEST(ToyTranslate, UnknownWordsAreCopied) {
  const auto r = toy_translate(words({"ka", "zzz"}), small_lexicon(), {});
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{"fa", "zzz"}));
  EXPECT_EQ(projections(r), (std::vector<std::size_t>{0, 1}));
}

TEST(ToyTranslate, EpsilonSmoothsButKeepsArgmax) {
  NoiseConfig noise;
  noise.epsilon = 0.3;
  const auto r = toy_translate(words({"ka", "si", "mo"}), small_lexicon(), noise);
  EXPECT_TRUE(validate_record(r).empty());
  EXPECT_NEAR(r.attention(1, 0), 0.15, 1e-15);
  EXPECT_EQ(projections(r), (std::vector<std::size_t>{0, 1, 2}));
}

TEST(ToyTranslate, SentencesBecomeBlocks) {
  const auto r = toy_translate(words({"ka", "si", ".", "mo", "ne", "."}),
                               small_lexicon({ReorderKind::kReverse, 0}), {});
  ASSERT_TRUE(r.sentence_blocks.has_value());
  ASSERT_EQ(r.sentence_blocks->size(), 2u);
  EXPECT_EQ(r.sentence_blocks->at(1), (SentenceBlock{3, 6, 3, 6}));
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{".", "le", "fa", ".", "ja", "wu"}));
  EXPECT_TRUE(validate_record(r).empty());
  EXPECT_EQ(projections(r), (std::vector<std::size_t>{2, 1, 0, 5, 4, 3}));
}

TEST(ToyTranslate, WindowShuffleIsAPermutationWithinWindows) {
  const auto src = words({"ka", "si", "mo", "ne", "ka", "si", "mo"});
  const auto r = toy_translate(src, small_lexicon({ReorderKind::kWindowShuffle, 3}), {0, 0, 0, 5});
  const auto p = projections(r);
  ASSERT_EQ(p.size(), 7u);
  for (std::size_t j = 0; j < p.size(); ++j) EXPECT_EQ(p[j] / 3, j / 3);
  std::set<std::size_t> seen(p.begin(), p.end());
  EXPECT_EQ(seen.size(), 7u);
  EXPECT_EQ(toy_translate(src, small_lexicon({ReorderKind::kWindowShuffle, 3}), {0, 0, 0, 5}), r);
}

TEST(ToyTranslate, DropSetsAreNestedAcrossRates) {
  const auto src = words({"ka", "si", "mo", "ne", "ka", "si", "mo", "ne", "tu", "ka", "si", "mo"});
  std::vector<std::size_t> prev;
  for (double rate : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
    const auto r = toy_translate(src, small_lexicon(), {rate, 0, 0, 99});
    EXPECT_TRUE(validate_record(r).empty());
    const auto p = projections(r);
    if (rate > 0) EXPECT_TRUE(std::includes(prev.begin(), prev.end(), p.begin(), p.end()));
    prev = p;
  }
  EXPECT_TRUE(prev.empty());
}

TEST(ToyTranslate, FullDropOnMultiSentenceInputIsValid) {
  const auto r = toy_translate(words({"ka", ".", "si", "."}), small_lexicon(), {1.0, 0, 0, 1});
  EXPECT_TRUE(r.target.empty());
  EXPECT_EQ(r.attention.target_len(), 0u);
  EXPECT_TRUE(validate_record(r).empty());
}

TEST(ToyTranslate, ParaphraseUsesSynonyms) {
  auto lex = small_lexicon();
  lex.synonyms = {{"fa", "qfa"}};
  const auto r = toy_translate(words({"ka", "si", "ka"}), lex, {0, 1.0, 0, 3});
  EXPECT_EQ(r.target.surfaces(), (std::vector<std::string>{"qfa", "le", "qfa"}));
}

TEST(ToyTranslate, RejectsEmptyInputAndBadNoise) {
  EXPECT_THROW(toy_translate(TokenizedText(), small_lexicon(), {}), std::invalid_argument);
  EXPECT_THROW(toy_translate(words({"ka"}), small_lexicon(), {1.5, 0, 0, 0}), ValidationError);
}

TEST(ToyBackTranslate, InvertsUnambiguousLexicon) {
  const auto lex = small_lexicon();
  EXPECT_EQ(toy_back_translate("fa po vi le", lex), "ka tu si");
  EXPECT_EQ(toy_back_translate("", lex), "");
  EXPECT_EQ(toy_back_translate("fa unknown", lex), "ka unknown");
}

TEST(ToyBackTranslate, UndoesParaphrase) {
  auto lex = small_lexicon();
  lex.synonyms = {{"fa", "qfa"}};
  EXPECT_EQ(toy_back_translate("qfa le", lex), "ka si");
}

TEST(ToyBackTranslate, AmbiguousInverseIsSeededChoice) {
  auto lex = small_lexicon();
  lex.forward["ri"] = {"fa"};  // homograph of "ka"
  std::set<std::string> outputs;
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto a = toy_back_translate("fa le", lex, seed);
    EXPECT_EQ(a, toy_back_translate("fa le", lex, seed));
    outputs.insert(a);
  }
  EXPECT_EQ(outputs, (std::set<std::string>{"ka si", "ri si"}));
}

TEST(PerfectRc, OneHotRecoversGold) {
  const auto r = toy_translate(words({"ka", "si", "mo", "ne"}), small_lexicon(), {});
  const auto d = perfect_rc(r, {1, 2});
  EXPECT_EQ(d.p_start, (std::vector<double>{0, 1, 0, 0}));
  EXPECT_EQ(d.p_end, (std::vector<double>{0, 0, 1, 0}));
  EXPECT_EQ(select_span(d), (TokenSpan{1, 2}));
  const auto single = perfect_rc(r, {3, 3});
  EXPECT_EQ(argmax(single.p_start), 3u);
  EXPECT_EQ(argmax(single.p_end), 3u);
}

TEST(PerfectRc, SoftPeakStillRecoversGold) {
  std::vector<std::string> src;
  for (int i = 0; i < 50; ++i) src.push_back("w" + std::to_string(i));
  const auto r = toy_translate(words(src), SyntheticLexicon{}, {});
  for (std::size_t s = 0; s < 50; s += 7) {
    for (std::size_t e = s; e < std::min<std::size_t>(50, s + 5); ++e) {
      const auto d = perfect_rc(r, {s, e}, 0.9);
      EXPECT_TRUE(d.violations().empty());
      EXPECT_EQ(select_span_bruteforce(d), (TokenSpan{s, e}));
      EXPECT_EQ(select_span(d), (TokenSpan{s, e}));
    }
  }
}

TEST(PerfectRc, RejectsBadArguments) {
  const auto r = toy_translate(words({"ka", "si"}), small_lexicon(), {});
  EXPECT_THROW(perfect_rc(r, {1, 2}), std::out_of_range);
  EXPECT_THROW(perfect_rc(r, {0, 1}, 0.0), std::invalid_argument);
}

TEST(ForwardProjectSpan, CoversFertilityGroup) {
  const auto r = toy_translate(words({"ka", "tu", "si"}), small_lexicon(), {});
  EXPECT_EQ(forward_project_span(r, {1, 1}), (TokenSpan{1, 2}));
  const auto dropped = toy_translate(words({"ka"}), small_lexicon(), {1.0, 0, 0, 0});
  EXPECT_EQ(forward_project_span(dropped, {0, 0}), std::nullopt);
}

TEST(KeywordRc, AbsentKeywordsGiveUniform) {
  const auto d = keyword_rc(words({"a", "b", "c", "d"}), words({"x", "y"}));
  for (double p : d.p_start) EXPECT_DOUBLE_EQ(p, 0.25);
  for (double p : d.p_end) EXPECT_DOUBLE_EQ(p, 0.25);
}

TEST(KeywordRc, SingleMatchHandTrace) {
  // Match at 5, window 1, shift 1: start scores are 1 on 4..6, end scores
  // on 5..7.
  std::vector<std::string> ctx(12, "z");
  ctx[5] = "key";
  const RcOracleConfig cfg{RcOracleMode::kKeyword, 1.0, 1, 1};
  const auto d = keyword_rc(words(ctx), words({"key", "?"}), cfg);
  const double hi = std::exp(1.0) / (3 * std::exp(1.0) + 9);
  const double lo = 1.0 / (3 * std::exp(1.0) + 9);
  for (std::size_t k = 0; k < 12; ++k) {
    EXPECT_NEAR(d.p_start[k], k >= 4 && k <= 6 ? hi : lo, 1e-15) << k;
    EXPECT_NEAR(d.p_end[k], k >= 5 && k <= 7 ? hi : lo, 1e-15) << k;
  }
  EXPECT_EQ(select_span(d), (TokenSpan{4, 5}));
}

TEST(KeywordRc, ParaphraseMovesTheArgmax) {
  // The answer sits between two question words; replacing one of them with
  // a synonym pulls the window onto the surviving match only.
  const auto ctx = words({"z", "z", "kw1", "ans", "kw2", "z", "z", "z", "z", "z", "kw1", "z"});
  const auto q = words({"kw1", "kw2", "?"});
  const RcOracleConfig cfg{RcOracleMode::kKeyword, 0.2, 1, 0};
  const auto before = select_span(keyword_rc(ctx, q, cfg), {1});
  EXPECT_EQ(before, (TokenSpan{3, 3}));
  const auto para = words({"z", "z", "kw1", "ans", "kw2x", "z", "z", "z", "z", "z", "kw1", "z"});
  const auto after = select_span(keyword_rc(para, q, cfg), {1});
  EXPECT_NE(after, before);
}

TEST(InjectUnderTranslation, RateZeroIsIdentity) {
  const auto r = toy_translate(words({"ka", "tu", "si"}), small_lexicon(), {0, 0, 0.1, 0});
  EXPECT_EQ(inject_under_translation(r, 0.0, 5), r);
}

TEST(InjectUnderTranslation, RateOneEmptiesTarget) {
  const auto r = toy_translate(words({"ka", "tu", "si"}), small_lexicon(), {});
  const auto out = inject_under_translation(r, 1.0, 5);
  EXPECT_TRUE(out.target.empty());
  EXPECT_EQ(out.attention.target_len(), 0u);
  EXPECT_EQ(out.attention.source_len(), 3u);
  EXPECT_TRUE(validate_record(out).empty());
}

TEST(InjectUnderTranslation, SeededSubsetIsReproducible) {
  std::vector<std::string> src;
  for (int i = 0; i < 40; ++i) src.push_back("w" + std::to_string(i));
  const auto r = toy_translate(words(src), SyntheticLexicon{}, {0, 0, 0.05, 0});
  const auto a = inject_under_translation(r, 0.3, 11);
  EXPECT_EQ(a, inject_under_translation(r, 0.3, 11));
  EXPECT_LT(a.target.size(), r.target.size());
  EXPECT_TRUE(validate_record(a).empty());
  // Surviving columns keep their original alignment.
  for (std::size_t j = 0; j < a.target.size(); ++j) {
    const auto& w = a.target.token(j).surface;
    EXPECT_EQ(project_position(a.attention, j), static_cast<std::size_t>(std::stoi(w.substr(1))));
  }
}

TEST(InjectUnderTranslation, KeepsSentenceBlocksConsistent) {
  const auto r = toy_translate(words({"ka", "si", ".", "mo", "ne", ".", "tu"}), small_lexicon(), {});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_TRUE(validate_record(inject_under_translation(r, 0.5, seed)).empty());
  }
}

TEST(InjectParaphrase, Behaviour) {
  const auto r = toy_translate(words({"ka", "si", "mo", "ka"}), small_lexicon(), {});
  const std::map<std::string, std::string> total{{"fa", "F"}, {"le", "L"}, {"wu", "W"}};
  EXPECT_EQ(inject_paraphrase(r, 0.0, total, 1), r);
  const auto all = inject_paraphrase(r, 1.0, total, 1);
  EXPECT_EQ(all.target.surfaces(), (std::vector<std::string>{"F", "L", "W", "F"}));
  EXPECT_EQ(all.attention, r.attention);
  const std::map<std::string, std::string> partial{{"fa", "F"}};
  const auto part = inject_paraphrase(r, 1.0, partial, 1);
  EXPECT_EQ(part.target.surfaces(), (std::vector<std::string>{"F", "le", "wu", "F"}));
  EXPECT_TRUE(validate_record(part).empty());
}

TEST(InjectParaphrase, OnlyMappedTokensChange) {
  std::vector<std::string> src;
  for (int i = 0; i < 60; ++i) src.push_back("w" + std::to_string(i % 6));
  const auto r = toy_translate(words(src), SyntheticLexicon{}, {});
  const std::map<std::string, std::string> partial{{"w0", "S0"}, {"w3", "S3"}};
  const auto out = inject_paraphrase(r, 0.5, partial, 8);
  std::size_t changed = 0;
  for (std::size_t j = 0; j < r.target.size(); ++j) {
    const auto& before = r.target.token(j).surface;
    const auto& after = out.target.token(j).surface;
    if (before != after) {
      ++changed;
      EXPECT_EQ(partial.at(before), after);
    }
  }
  EXPECT_GT(changed, 0u);
  EXPECT_LT(changed, 20u);
}

TEST(GenSyntheticDataset, SingleExample) {
  const auto ds = gen_synthetic_dataset(1, 20, 5, 3);
  ASSERT_EQ(ds.examples.size(), 1u);
  const auto& ex = ds.examples[0];
  EXPECT_TRUE(ex.violations().empty());
  EXPECT_NE(ex.context.raw().find(ex.answers[0].text), std::string::npos);
  const auto span = char_range_to_span(
      ex.context, {ex.answers[0].char_start, ex.answers[0].char_start + ex.answers[0].text.size()});
  EXPECT_EQ(span, ds.gold_spans[0]);
}

TEST(GenSyntheticDataset, Deterministic) {
  const auto a = gen_synthetic_dataset(30, 100, 25, 9);
  const auto b = gen_synthetic_dataset(30, 100, 25, 9);
  EXPECT_EQ(Json(a.examples).dump(), Json(b.examples).dump());
  EXPECT_EQ(a.lexicon, b.lexicon);
  EXPECT_NE(Json(gen_synthetic_dataset(30, 100, 25, 10).examples).dump(), Json(a.examples).dump());
}

TEST(GenSyntheticDataset, TwoHundredWellFormedExamples) {
  SyntheticOptions opts;
  opts.sentence_len = 8;
  opts.homographs = 10;
  const auto ds = gen_synthetic_dataset(200, 300, 40, 7, opts);
  ASSERT_EQ(ds.examples.size(), 200u);
  EXPECT_TRUE(ds.lexicon.violations().empty());
  std::set<std::string> ids;
  for (const auto& ex : ds.examples) {
    EXPECT_TRUE(ex.violations().empty()) << ex.id;
    EXPECT_TRUE(ex.context.violations().empty());
    EXPECT_TRUE(ex.question.violations().empty());
    EXPECT_FALSE(ex.question.empty());
    ids.insert(ex.id);
  }
  EXPECT_EQ(ids.size(), 200u);
}

TEST(GenSyntheticDataset, HomographsShareTranslations) {
  SyntheticOptions opts;
  opts.homographs = 5;
  const auto ds = gen_synthetic_dataset(1, 50, 10, 1, opts);
  std::map<std::vector<std::string>, int> count;
  for (const auto& [src, tgt] : ds.lexicon.forward) ++count[tgt];
  int shared = 0;
  for (const auto& [tgt, c] : count) shared += c > 1;
  EXPECT_EQ(shared, 5);
}

TEST(MakeSynonymMap, CoverageAndFreshness) {
  const auto ds = gen_synthetic_dataset(1, 100, 10, 1);
  std::set<std::string> vocab;
  for (const auto& [src, tgt] : ds.lexicon.forward) vocab.insert(tgt.begin(), tgt.end());
  const auto syn = make_synonym_map(ds.lexicon, 0.3, 4);
  EXPECT_EQ(syn.size(), static_cast<std::size_t>(std::llround(0.3 * static_cast<double>(vocab.size()))));
  for (const auto& [word, alt] : syn) {
    EXPECT_TRUE(vocab.count(word));
    EXPECT_FALSE(vocab.count(alt));
  }
  EXPECT_EQ(syn, make_synonym_map(ds.lexicon, 0.3, 4));
}

TEST(ReorderRule, ParseRoundTrip) {
  for (const char* s : {"identity", "reverse", "window-shuffle:4"}) {
    EXPECT_EQ(ReorderRule::parse(s).to_string(), s);
  }
  EXPECT_THROW(ReorderRule::parse("window-shuffle:0"), std::invalid_argument);
  EXPECT_THROW(ReorderRule::parse("sideways"), std::invalid_argument);
}

TEST(SyntheticLexicon, JsonRoundTrip) {
  auto lex = small_lexicon({ReorderKind::kWindowShuffle, 2});
  lex.synonyms = {{"fa", "qfa"}};
  EXPECT_EQ(Json(lex).get<SyntheticLexicon>(), lex);
}

}  // namespace
}  // namespace xrc
