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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "xrc/metrics.hpp"
#include "xrc/pipeline.hpp"
#include "xrc/rng.hpp"
#include "xrc/span.hpp"

namespace {

using namespace xrc;

std::vector<double> random_dist(std::size_t n, Rng& rng) {
  std::vector<double> p(n);
  double z = 0;
  for (auto& x : p) z += (x = rng.uniform() + 1e-9);
  for (auto& x : p) x /= z;
  return p;
}

SpanDistributions random_span_dists(std::size_t n) {
  Rng rng(n);
  return {random_dist(n, rng), random_dist(n, rng)};
}

void BM_SelectSpan(benchmark::State& state) {
  const auto d = random_span_dists(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_span(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelectSpan)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oN);

void BM_SelectSpanBruteforce(benchmark::State& state) {
  const auto d = random_span_dists(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(select_span_bruteforce(d));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SelectSpanBruteforce)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oNSquared);

void BM_ProjectSpan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<double> values;
  values.reserve(n * n);
  for (std::size_t c = 0; c < n * n; ++c) values.push_back(rng.uniform());
  // column-normalise
  for (std::size_t c = 0; c < n; ++c) {
    double z = 0;
    for (std::size_t i = 0; i < n; ++i) z += values[i * n + c];
    for (std::size_t i = 0; i < n; ++i) values[i * n + c] /= z;
  }
  const AttentionMatrix a(n, n, std::move(values));
  const TokenSpan pivot{n / 4, n / 2};
  for (auto _ : state) benchmark::DoNotOptimize(project_span(a, pivot));
}
BENCHMARK(BM_ProjectSpan)->Arg(32)->Arg(128)->Arg(512);

void BM_CharF1(benchmark::State& state) {
  const std::string pred = "the quick brown fox jumps over the lazy dog near the river bank";
  const std::string gold = "a quick brown fox jumped over a lazy dog by the river";
  for (auto _ : state) benchmark::DoNotOptimize(char_f1(pred, gold));
}
BENCHMARK(BM_CharF1);

void BM_CorpusBleu(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(11);
  std::vector<std::vector<std::string>> hyps(n), refs(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (int t = 0; t < 20; ++t) {
      refs[k].push_back("w" + std::to_string(rng.below(200)));
      hyps[k].push_back(rng.uniform() < 0.7 ? refs[k].back() : "w" + std::to_string(rng.below(200)));
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(corpus_bleu(hyps, refs));
}
BENCHMARK(BM_CorpusBleu)->Arg(100)->Arg(1000);

void BM_PipelineRun(benchmark::State& state) {
  PipelineConfig cfg;
  cfg.seed = 7;
  SyntheticDatasetSpec syn;
  syn.n = 100;
  cfg.dataset.synthetic = syn;
  const PipelineInputs in = load_inputs(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(in.dataset, cfg, in.synthetic_lexicon));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_PipelineRun)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
