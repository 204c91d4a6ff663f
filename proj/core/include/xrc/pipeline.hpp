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

// End-to-end orchestration: translate context and question into the pivot
// language, run an RC back-end there, select the answer span and either
// project it back through attention (runtime MT) or back-translate the
// answer string on its own (baseline).
//
// Config JSON (paths resolve against the config file's directory):
//
//   {
//     "mode": "runtime_mt" | "back_translation",
//     "seed": 7, "workers": 4, "cache": true,
//     "source_lang": "synL", "pivot_lang": "synP",
//     "dataset": "squad.json" | "examples.jsonl"
//              | {"synthetic": {"n": 200, "lexicon_size": 300, "ctx_len": 40, "seed": 7,
//                               "sentence_len": 10, "homographs": 0, "reorder": "identity",
//                               "fertility_rate": 0.1, "max_answer_len": 3}},
//     "translator": {"kind": "oracle", "lexicon": "lex.json" | {...} | "synthetic",
//                    "noise": {"drop_rate": 0, "paraphrase_rate": 0, "epsilon": 0, "seed": 1}}
//                 | {"kind": "file", "path": "records.jsonl"}
//                 | {"kind": "http", "endpoint": "http://host:port/translate",
//                    "timeout_ms": 5000, "attempts": 3, "backoff_ms": 100, "max_in_flight": 4},
//     "back_translator": same shape as "translator",
//     "rc": {"kind": "perfect", "peak": 1.0}
//         | {"kind": "keyword", "temperature": 1.0, "window": 3, "end_shift": 1}
//         | {"kind": "file", "path": "dists.jsonl"} | {"kind": "http", "endpoint": "..."},
//     "span": {"max_span_len": null},
//     "normalization": {"unicode_nfkc": true, "lowercase": true,
//                       "strip_whitespace_chars": true, "strip_punctuation": false}
//   }

#ifndef XRC_PIPELINE_HPP_
#define XRC_PIPELINE_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xrc/backends.hpp"
#include "xrc/json_io.hpp"
#include "xrc/metrics.hpp"
#include "xrc/oracles.hpp"
#include "xrc/span.hpp"
#include "xrc/types.hpp"

namespace xrc {

enum class PipelineMode { kRuntimeMt, kBackTranslation };
enum class BackendKind { kOracle, kFile, kHttp };
enum class RcKind { kPerfect, kKeyword, kFile, kHttp };

struct TranslatorSpec {
  BackendKind kind = BackendKind::kOracle;
  // Oracle only. Empty means "the synthetic dataset's lexicon".
  std::optional<SyntheticLexicon> lexicon;
  NoiseConfig noise;
  // When unset the oracle uses the pipeline seed for its noise.
  std::optional<std::uint64_t> noise_seed;
  std::filesystem::path path;
  std::string endpoint;
  HttpOptions http;
};

struct RcSpec {
  RcKind kind = RcKind::kPerfect;
  double peak = 1.0;
  RcOracleConfig keyword;
  std::filesystem::path path;
  std::string endpoint;
  HttpOptions http;
};

struct SyntheticDatasetSpec {
  std::size_t n = 200;
  std::size_t lexicon_size = 300;
  std::size_t ctx_len = 40;
  std::uint64_t seed = 7;
  SyntheticOptions options;
};

struct DatasetSpec {
  std::optional<std::filesystem::path> path;
  std::optional<SyntheticDatasetSpec> synthetic;
};

struct PipelineConfig {
  PipelineMode mode = PipelineMode::kRuntimeMt;
  TranslatorSpec translator;
  std::optional<TranslatorSpec> back_translator;
  RcSpec rc;
  SpanSelectConfig span_cfg;
  NormalizationConfig norm_cfg;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool cache = true;
  std::string source_lang = "synL";
  std::string pivot_lang = "synP";
  DatasetSpec dataset;

  std::vector<std::string> violations() const;
};

// Throws std::invalid_argument on schema errors, std::runtime_error when a
// referenced file cannot be read.
PipelineConfig parse_pipeline_config(const Json& j, const std::filesystem::path& base_dir = {});
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

struct PipelineInputs {
  std::vector<QAExample> dataset;
  std::optional<SyntheticLexicon> synthetic_lexicon;
};

PipelineInputs load_inputs(const PipelineConfig& cfg);

struct ExampleError {
  std::string id;
  std::string message;
};

struct ExampleDiagnostic {
  std::string id;
  TokenSpan pivot_span;
  std::optional<TokenSpan> source_span;  // runtime MT only
  long dilation = 0;
};

struct PipelineResult {
  std::vector<Prediction> predictions;  // dataset order, failed examples omitted
  std::vector<ExampleError> errors;
  std::vector<ExampleDiagnostic> diagnostics;
  EvalReport report;
};

class Pipeline {
 public:
  // Builds back-ends from the config. synthetic_lexicon backs oracle
  // specs that do not name a lexicon.
  explicit Pipeline(const PipelineConfig& cfg,
                    const std::optional<SyntheticLexicon>& synthetic_lexicon = std::nullopt);
  Pipeline(const PipelineConfig& cfg, std::shared_ptr<const Translator> translator,
           std::shared_ptr<const RcModel> rc,
           std::shared_ptr<const AnswerBackTranslator> back_translator = nullptr);

  // Per-example failures are recorded in errors and score 0; the run
  // itself throws only for configuration errors.
  PipelineResult run(std::span<const QAExample> dataset, PipelineMode mode) const;

 private:
  PipelineConfig cfg_;
  std::shared_ptr<const Translator> translator_;
  std::shared_ptr<const RcModel> rc_;
  std::shared_ptr<const AnswerBackTranslator> back_translator_;
};

PipelineResult run_pipeline(std::span<const QAExample> dataset, const PipelineConfig& cfg,
                            const std::optional<SyntheticLexicon>& synthetic_lexicon = std::nullopt);
PipelineResult run_baseline(std::span<const QAExample> dataset, const PipelineConfig& cfg,
                            const std::optional<SyntheticLexicon>& synthetic_lexicon = std::nullopt);

enum class SweepParam { kDropRate, kParaphraseRate };

std::string_view to_string(SweepParam p);
SweepParam parse_sweep_param(std::string_view s);

struct SweepRow {
  SweepParam param = SweepParam::kDropRate;
  double value = 0.0;
  double f1 = 0.0;
  double em = 0.0;
  std::size_t n_seeds = 0;
};

// run_pipeline for every (value, seed) with the oracle translator's noise
// parameter set to value and the pipeline/noise seed set to seed; rows hold
// the mean over seeds. Requires an oracle translator and ascending values.
std::vector<SweepRow> noise_sweep(std::span<const QAExample> dataset,
                                  const PipelineConfig& base_cfg, SweepParam param,
                                  std::span<const double> values,
                                  std::span<const std::uint64_t> seeds,
                                  const std::optional<SyntheticLexicon>& synthetic_lexicon = std::nullopt);

// Header "param,value,f1,em,n_seeds".
std::string sweep_csv(std::span<const SweepRow> rows);
Json sweep_json(std::span<const SweepRow> rows);

// Serialisations used by the CLI for run outputs.
std::string predictions_jsonl(std::span<const Prediction> predictions);
std::string errors_jsonl(std::span<const ExampleError> errors);
std::string diagnostics_jsonl(std::span<const ExampleDiagnostic> diagnostics);

}  // namespace xrc

#endif  // XRC_PIPELINE_HPP_
