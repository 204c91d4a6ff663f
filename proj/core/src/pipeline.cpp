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

#include "xrc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "xrc/corpus.hpp"
#include "xrc/rng.hpp"

namespace xrc {
namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_absolute() || base.empty()) return path;
  return base / path;
}

HttpOptions parse_http(const Json& j) {
  HttpOptions o;
  o.timeout_ms = j.value("timeout_ms", o.timeout_ms);
  o.attempts = j.value("attempts", o.attempts);
  o.backoff_ms = j.value("backoff_ms", o.backoff_ms);
  o.max_in_flight = j.value("max_in_flight", o.max_in_flight);
  return o;
}

TranslatorSpec parse_translator(const Json& j, const std::filesystem::path& base) {
  TranslatorSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "oracle") {
    spec.kind = BackendKind::kOracle;
    if (j.contains("lexicon")) {
      const Json& lex = j.at("lexicon");
      if (lex.is_string() && lex.get<std::string>() != "synthetic") {
        spec.lexicon = Json::parse(read_file(resolve(base, lex.get<std::string>())))
                           .get<SyntheticLexicon>();
      } else if (lex.is_object()) {
        spec.lexicon = lex.get<SyntheticLexicon>();
      }
    }
    if (j.contains("noise")) {
      const Json& n = j.at("noise");
      spec.noise.drop_rate = n.value("drop_rate", 0.0);
      spec.noise.paraphrase_rate = n.value("paraphrase_rate", 0.0);
      spec.noise.epsilon = n.value("epsilon", 0.0);
      if (n.contains("seed")) spec.noise_seed = n.at("seed").get<std::uint64_t>();
    }
  } else if (kind == "file") {
    spec.kind = BackendKind::kFile;
    spec.path = resolve(base, j.at("path").get<std::string>());
  } else if (kind == "http") {
    spec.kind = BackendKind::kHttp;
    spec.endpoint = j.at("endpoint").get<std::string>();
    spec.http = parse_http(j);
  } else {
    throw std::invalid_argument("unknown translator kind: " + kind);
  }
  return spec;
}

RcSpec parse_rc(const Json& j, const std::filesystem::path& base) {
  RcSpec spec;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "perfect") {
    spec.kind = RcKind::kPerfect;
    spec.peak = j.value("peak", 1.0);
  } else if (kind == "keyword") {
    spec.kind = RcKind::kKeyword;
    spec.keyword.mode = RcOracleMode::kKeyword;
    spec.keyword.temperature = j.value("temperature", spec.keyword.temperature);
    spec.keyword.window = j.value("window", spec.keyword.window);
    spec.keyword.end_shift = j.value("end_shift", spec.keyword.end_shift);
  } else if (kind == "file") {
    spec.kind = RcKind::kFile;
    spec.path = resolve(base, j.at("path").get<std::string>());
  } else if (kind == "http") {
    spec.kind = RcKind::kHttp;
    spec.endpoint = j.at("endpoint").get<std::string>();
    spec.http = parse_http(j);
  } else {
    throw std::invalid_argument("unknown rc kind: " + kind);
  }
  return spec;
}

DatasetSpec parse_dataset(const Json& j, const std::filesystem::path& base) {
  DatasetSpec spec;
  if (j.is_string()) {
    spec.path = resolve(base, j.get<std::string>());
    return spec;
  }
  const Json& s = j.at("synthetic");
  SyntheticDatasetSpec syn;
  syn.n = s.value("n", syn.n);
  syn.lexicon_size = s.value("lexicon_size", syn.lexicon_size);
  syn.ctx_len = s.value("ctx_len", syn.ctx_len);
  syn.seed = s.value("seed", syn.seed);
  syn.options.sentence_len = s.value("sentence_len", syn.options.sentence_len);
  syn.options.max_answer_len = s.value("max_answer_len", syn.options.max_answer_len);
  syn.options.fertility_rate = s.value("fertility_rate", syn.options.fertility_rate);
  syn.options.homographs = s.value("homographs", syn.options.homographs);
  if (s.contains("reorder")) syn.options.reorder = ReorderRule::parse(s.at("reorder").get<std::string>());
  spec.synthetic = syn;
  return spec;
}

std::shared_ptr<const Translator> build_translator(const TranslatorSpec& spec,
                                                   const PipelineConfig& cfg,
                                                   const std::optional<SyntheticLexicon>& fallback) {
  switch (spec.kind) {
    case BackendKind::kOracle: {
      const auto& lex = spec.lexicon ? spec.lexicon : fallback;
      if (!lex) throw std::invalid_argument("oracle translator needs a lexicon");
      NoiseConfig noise = spec.noise;
      noise.seed = spec.noise_seed.value_or(cfg.seed);
      return std::make_shared<OracleTranslator>(*lex, noise, LanguageTag(cfg.pivot_lang));
    }
    case BackendKind::kFile:
      return std::make_shared<FileTranslator>(spec.path);
    case BackendKind::kHttp:
      return std::make_shared<HttpTranslator>(spec.endpoint, LanguageTag(cfg.pivot_lang), spec.http);
  }
  throw std::invalid_argument("unknown translator kind");
}

std::shared_ptr<const AnswerBackTranslator> build_back_translator(
    const TranslatorSpec& spec, const PipelineConfig& cfg,
    const std::optional<SyntheticLexicon>& fallback) {
  switch (spec.kind) {
    case BackendKind::kOracle: {
      const auto& lex = spec.lexicon ? spec.lexicon
                        : cfg.translator.lexicon ? cfg.translator.lexicon
                                                 : fallback;
      if (!lex) throw std::invalid_argument("oracle back-translator needs a lexicon");
      return std::make_shared<LexiconBackTranslator>(*lex);
    }
    case BackendKind::kFile:
      return std::make_shared<RecordBackTranslator>(std::make_shared<FileTranslator>(spec.path),
                                                    LanguageTag(cfg.pivot_lang));
    case BackendKind::kHttp:
      return std::make_shared<RecordBackTranslator>(
          std::make_shared<HttpTranslator>(spec.endpoint, LanguageTag(cfg.source_lang), spec.http),
          LanguageTag(cfg.pivot_lang));
  }
  throw std::invalid_argument("unknown back-translator kind");
}

std::shared_ptr<const RcModel> build_rc(const RcSpec& spec) {
  switch (spec.kind) {
    case RcKind::kPerfect:
      return std::make_shared<PerfectRcModel>(spec.peak);
    case RcKind::kKeyword:
      return std::make_shared<KeywordRcModel>(spec.keyword);
    case RcKind::kFile:
      return std::make_shared<FileRcModel>(spec.path);
    case RcKind::kHttp:
      return std::make_shared<HttpRcModel>(spec.endpoint, spec.http);
  }
  throw std::invalid_argument("unknown rc kind");
}

struct ExampleOutcome {
  std::optional<Prediction> prediction;
  std::optional<ExampleDiagnostic> diagnostic;
  std::optional<ExampleError> error;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

}  // namespace

std::vector<std::string> PipelineConfig::violations() const {
  std::vector<std::string> out;
  if (mode == PipelineMode::kBackTranslation && !back_translator) {
    out.push_back("back_translation mode requires a back_translator");
  }
  if (source_lang.empty() || pivot_lang.empty()) out.push_back("language tags must be non-empty");
  if (source_lang == pivot_lang) out.push_back("source and pivot languages must differ");
  if (span_cfg.max_span_len && *span_cfg.max_span_len == 0) out.push_back("max_span_len must be >= 1");
  for (const auto& v : translator.noise.violations()) out.push_back("translator noise: " + v);
  if (rc.kind == RcKind::kPerfect && !(rc.peak > 0.0 && rc.peak <= 1.0)) {
    out.push_back("rc peak outside (0, 1]");
  }
  if (rc.kind == RcKind::kKeyword && !(rc.keyword.temperature > 0.0)) {
    out.push_back("rc temperature must be > 0");
  }
  return out;
}

PipelineConfig parse_pipeline_config(const Json& j, const std::filesystem::path& base_dir) {
  PipelineConfig cfg;
  try {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    const std::string mode = j.value("mode", std::string("runtime_mt"));
    if (mode == "runtime_mt") {
      cfg.mode = PipelineMode::kRuntimeMt;
    } else if (mode == "back_translation") {
      cfg.mode = PipelineMode::kBackTranslation;
    } else {
      throw std::invalid_argument("unknown mode: " + mode);
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.workers = j.value("workers", cfg.workers);
    cfg.cache = j.value("cache", cfg.cache);
    cfg.source_lang = j.value("source_lang", cfg.source_lang);
    cfg.pivot_lang = j.value("pivot_lang", cfg.pivot_lang);
    if (j.contains("dataset")) cfg.dataset = parse_dataset(j.at("dataset"), base_dir);
    if (j.contains("translator")) cfg.translator = parse_translator(j.at("translator"), base_dir);
    if (j.contains("back_translator") && !j.at("back_translator").is_null()) {
      cfg.back_translator = parse_translator(j.at("back_translator"), base_dir);
    }
    if (j.contains("rc")) cfg.rc = parse_rc(j.at("rc"), base_dir);
    if (j.contains("span")) {
      const Json& s = j.at("span");
      if (s.contains("max_span_len") && !s.at("max_span_len").is_null()) {
        cfg.span_cfg.max_span_len = s.at("max_span_len").get<std::size_t>();
      }
    }
    if (j.contains("normalization")) {
      const Json& n = j.at("normalization");
      cfg.norm_cfg.unicode_nfkc = n.value("unicode_nfkc", cfg.norm_cfg.unicode_nfkc);
      cfg.norm_cfg.lowercase = n.value("lowercase", cfg.norm_cfg.lowercase);
      cfg.norm_cfg.strip_whitespace_chars =
          n.value("strip_whitespace_chars", cfg.norm_cfg.strip_whitespace_chars);
      cfg.norm_cfg.strip_punctuation = n.value("strip_punctuation", cfg.norm_cfg.strip_punctuation);
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("invalid pipeline config: ") + e.what());
  }
  auto v = cfg.violations();
  if (!v.empty()) throw ValidationError(std::move(v));
  return cfg;
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  return parse_pipeline_config(j, path.parent_path());
}

PipelineInputs load_inputs(const PipelineConfig& cfg) {
  PipelineInputs in;
  const LanguageTag lang(cfg.source_lang);
  if (cfg.dataset.synthetic) {
    const auto& s = *cfg.dataset.synthetic;
    SyntheticOptions opts = s.options;
    opts.source_lang = cfg.source_lang;
    SyntheticDataset ds = gen_synthetic_dataset(s.n, s.lexicon_size, s.ctx_len, s.seed, opts);
    in.dataset = std::move(ds.examples);
    in.synthetic_lexicon = std::move(ds.lexicon);
  } else if (cfg.dataset.path) {
    in.dataset = load_dataset(*cfg.dataset.path, lang);
  } else {
    throw std::invalid_argument("config names no dataset");
  }
  return in;
}

// ---------------------------------------------------------------------------

Pipeline::Pipeline(const PipelineConfig& cfg, const std::optional<SyntheticLexicon>& synthetic_lexicon)
    : cfg_(cfg) {
  if (auto v = cfg_.violations(); !v.empty()) throw ValidationError(std::move(v));
  translator_ = build_translator(cfg_.translator, cfg_, synthetic_lexicon);
  if (cfg_.cache) translator_ = std::make_shared<CachingTranslator>(translator_);
  rc_ = build_rc(cfg_.rc);
  if (cfg_.back_translator) {
    back_translator_ = build_back_translator(*cfg_.back_translator, cfg_, synthetic_lexicon);
  }
}

Pipeline::Pipeline(const PipelineConfig& cfg, std::shared_ptr<const Translator> translator,
                   std::shared_ptr<const RcModel> rc,
                   std::shared_ptr<const AnswerBackTranslator> back_translator)
    : cfg_(cfg),
      translator_(std::move(translator)),
      rc_(std::move(rc)),
      back_translator_(std::move(back_translator)) {
  if (!translator_ || !rc_) throw std::invalid_argument("pipeline needs a translator and an RC model");
}

PipelineResult Pipeline::run(std::span<const QAExample> dataset, PipelineMode mode) const {
  if (mode == PipelineMode::kBackTranslation && !back_translator_) {
    throw std::invalid_argument("back_translation mode requires a back_translator");
  }

  auto process = [&](std::size_t index) {
    const QAExample& ex = dataset[index];
    ExampleOutcome out;
    try {
      const TranslationRecord context = translator_->translate(ex.context);
      const TranslationRecord question = translator_->translate(ex.question);
      if (context.source.raw() != ex.context.raw()) {
        throw std::runtime_error("translation source differs from the example context");
      }
      if (context.target.empty()) throw std::runtime_error("context translation is empty");

      const SpanDistributions d = rc_->predict(RcInput{ex, context, question});
      if (d.size() != context.target.size()) {
        throw std::runtime_error("RC returned " + std::to_string(d.size()) +
                                 " positions for a pivot context of " +
                                 std::to_string(context.target.size()) + " tokens");
      }
      if (auto v = d.violations(); !v.empty()) throw ValidationError(std::move(v));
      const TokenSpan pivot = select_span(d, cfg_.span_cfg);

      if (mode == PipelineMode::kRuntimeMt) {
        const ExtractedAnswer ans = extract_answer(context, pivot);
        out.prediction = Prediction{ex.id, ans.text, ans.char_range, PredictionMode::kExtractive};
        out.diagnostic = ExampleDiagnostic{ex.id, pivot, ans.source_span, ans.dilation};
      } else {
        const CharRange r = span_to_char_range(context.target, pivot);
        const std::string pivot_answer = context.target.substr(r.start, r.end);
        std::string answer = back_translator_->back_translate(pivot_answer, mix_seed(cfg_.seed, index));
        out.prediction = Prediction{ex.id, std::move(answer), std::nullopt, PredictionMode::kGenerated};
        out.diagnostic = ExampleDiagnostic{ex.id, pivot, std::nullopt, 0};
      }
    } catch (const std::exception& e) {
      out.error = ExampleError{ex.id, e.what()};
    }
    return out;
  };

  std::vector<ExampleOutcome> outcomes(dataset.size());
  const std::size_t workers = std::min(std::max<std::size_t>(cfg_.workers, 1), dataset.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < dataset.size(); ++i) outcomes[i] = process(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < dataset.size(); i = next++) outcomes[i] = process(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  PipelineResult result;
  for (auto& o : outcomes) {
    if (o.prediction) result.predictions.push_back(std::move(*o.prediction));
    if (o.diagnostic) result.diagnostics.push_back(std::move(*o.diagnostic));
    if (o.error) result.errors.push_back(std::move(*o.error));
  }
  result.report = evaluate_dataset(result.predictions, dataset, cfg_.norm_cfg);
  return result;
}

PipelineResult run_pipeline(std::span<const QAExample> dataset, const PipelineConfig& cfg,
                            const std::optional<SyntheticLexicon>& synthetic_lexicon) {
  return Pipeline(cfg, synthetic_lexicon).run(dataset, PipelineMode::kRuntimeMt);
}

PipelineResult run_baseline(std::span<const QAExample> dataset, const PipelineConfig& cfg,
                            const std::optional<SyntheticLexicon>& synthetic_lexicon) {
  if (!cfg.back_translator) throw std::invalid_argument("baseline requires a back_translator");
  return Pipeline(cfg, synthetic_lexicon).run(dataset, PipelineMode::kBackTranslation);
}

// ---------------------------------------------------------------------------

std::string_view to_string(SweepParam p) {
  return p == SweepParam::kDropRate ? "drop_rate" : "paraphrase_rate";
}

SweepParam parse_sweep_param(std::string_view s) {
  if (s == "drop_rate") return SweepParam::kDropRate;
  if (s == "paraphrase_rate") return SweepParam::kParaphraseRate;
  throw std::invalid_argument("unknown sweep parameter: " + std::string(s));
}

std::vector<SweepRow> noise_sweep(std::span<const QAExample> dataset,
                                  const PipelineConfig& base_cfg, SweepParam param,
                                  std::span<const double> values,
                                  std::span<const std::uint64_t> seeds,
                                  const std::optional<SyntheticLexicon>& synthetic_lexicon) {
  if (base_cfg.translator.kind != BackendKind::kOracle) {
    throw std::invalid_argument("noise_sweep needs an oracle translator");
  }
  if (!std::is_sorted(values.begin(), values.end())) {
    throw std::invalid_argument("noise_sweep values must be sorted ascending");
  }
  if (seeds.empty()) throw std::invalid_argument("noise_sweep needs at least one seed");

  std::vector<SweepRow> rows;
  for (double value : values) {
    SweepRow row{param, value, 0.0, 0.0, seeds.size()};
    for (std::uint64_t seed : seeds) {
      PipelineConfig cfg = base_cfg;
      cfg.mode = PipelineMode::kRuntimeMt;
      cfg.seed = seed;
      cfg.translator.noise_seed = seed;
      if (param == SweepParam::kDropRate) {
        cfg.translator.noise.drop_rate = value;
      } else {
        cfg.translator.noise.paraphrase_rate = value;
      }
      const PipelineResult r = run_pipeline(dataset, cfg, synthetic_lexicon);
      row.f1 += r.report.f1;
      row.em += r.report.em;
    }
    row.f1 /= static_cast<double>(seeds.size());
    row.em /= static_cast<double>(seeds.size());
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "param,value,f1,em,n_seeds\n";
  for (const SweepRow& r : rows) {
    out += std::string(to_string(r.param)) + "," + fmt("%.6g", r.value) + "," + fmt("%.6f", r.f1) +
           "," + fmt("%.6f", r.em) + "," + std::to_string(r.n_seeds) + "\n";
  }
  return out;
}

Json sweep_json(std::span<const SweepRow> rows) {
  Json out = Json::array();
  for (const SweepRow& r : rows) {
    out.push_back(Json{{"param", std::string(to_string(r.param))},
                       {"value", r.value},
                       {"f1", r.f1},
                       {"em", r.em},
                       {"n_seeds", r.n_seeds}});
  }
  return out;
}

std::string predictions_jsonl(std::span<const Prediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    nlohmann::ordered_json row;
    row["id"] = p.example_id;
    row["answer"] = p.answer_text;
    row["char_start"] = p.char_range ? Json(p.char_range->start) : Json(nullptr);
    row["char_end"] = p.char_range ? Json(p.char_range->end) : Json(nullptr);
    row["mode"] = std::string(to_string(p.mode));
    out += row.dump();
    out += '\n';
  }
  return out;
}

std::string errors_jsonl(std::span<const ExampleError> errors) {
  std::string out;
  for (const auto& e : errors) {
    out += Json{{"id", e.id}, {"error", e.message}}.dump();
    out += '\n';
  }
  return out;
}

std::string diagnostics_jsonl(std::span<const ExampleDiagnostic> diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    Json row{{"id", d.id}, {"pivot_span", {d.pivot_span.start, d.pivot_span.end}}};
    if (d.source_span) {
      row["source_span"] = {d.source_span->start, d.source_span->end};
      row["dilation"] = d.dilation;
    }
    out += row.dump();
    out += '\n';
  }
  return out;
}

}  // namespace xrc
