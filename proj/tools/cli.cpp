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

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>

#include "CLI11.hpp"
#include "xrc/corpus.hpp"
#include "xrc/json_io.hpp"
#include "xrc/metrics.hpp"
#include "xrc/oracles.hpp"
#include "xrc/pipeline.hpp"

namespace xrc::cli {
namespace {

namespace fs = std::filesystem;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void print_report(std::ostream& out, const EvalReport& r, std::size_t n_errors) {
  out << "  examples        " << r.n << "\n"
      << "  exact match     " << fixed(r.em, 2) << "\n"
      << "  f1              " << fixed(r.f1, 2) << "\n"
      << "  substring rate  " << fixed(r.substring_rate, 4) << "\n"
      << "  errors          " << n_errors << "\n";
}

void write_pairs(const fs::path& path, const std::vector<AlignedPair>& pairs) {
  write_file_atomic(path, pairs_to_jsonl(pairs));
}

// Options shared by the pipeline subcommands.
struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out = "out";
};

void add_run_args(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--config", a.config, "pipeline config JSON")->required();
  cmd->add_option("--seed", a.seed, "override the config seed");
  cmd->add_option("--workers", a.workers, "override the worker count");
  cmd->add_option("--out", a.out, "output directory")->capture_default_str();
}

PipelineConfig load_config(const RunArgs& a) {
  PipelineConfig cfg = load_pipeline_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  if (a.workers) cfg.workers = *a.workers;
  return cfg;
}

void write_run(const fs::path& dir, const PipelineResult& r) {
  write_file_atomic(dir / "predictions.jsonl", predictions_jsonl(r.predictions));
  write_file_atomic(dir / "report.json", Json(r.report).dump(2) + "\n");
  write_file_atomic(dir / "errors.jsonl", errors_jsonl(r.errors));
  write_file_atomic(dir / "diagnostics.jsonl", diagnostics_jsonl(r.diagnostics));
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual extractive reading comprehension through a pivot language", "xrc"};
  app.require_subcommand(1);
  app.fallthrough(false);

  std::function<void()> action;

  // corpus ---------------------------------------------------------------
  auto* corpus = app.add_subcommand("corpus", "parallel corpus preparation");
  corpus->require_subcommand(1);

  struct {
    std::string in, out, lang;
    std::optional<double> min_score;
    std::optional<std::size_t> min_len, max_len, best;
  } filter;
  auto* c_filter = corpus->add_subcommand("filter", "drop pairs by alignment score and length");
  c_filter->add_option("--in", filter.in, "pairs JSONL {src, tgt, score}")->required();
  c_filter->add_option("--out", filter.out, "output JSONL")->required();
  c_filter->add_option("--lang", filter.lang, "threshold preset (ja, fr)");
  c_filter->add_option("--min-score", filter.min_score);
  c_filter->add_option("--min-len", filter.min_len);
  c_filter->add_option("--max-len", filter.max_len);
  c_filter->add_option("--best", filter.best, "keep only the k highest-scoring survivors");
  c_filter->callback([&] {
    action = [&] {
      FilterConfig cfg = filter.lang.empty() ? FilterConfig{} : FilterConfig::for_language(filter.lang);
      if (filter.min_score) cfg.min_score = *filter.min_score;
      if (filter.min_len) cfg.min_len = *filter.min_len;
      if (filter.max_len) cfg.max_len = *filter.max_len;
      const auto pairs = read_pairs(filter.in);
      auto kept = filter_pairs(pairs, cfg);
      if (filter.best) kept = sort_and_take_best(kept, *filter.best);
      write_pairs(filter.out, kept);
      out << "kept " << kept.size() << " of " << pairs.size() << " pairs\n";
    };
  });

  struct {
    std::string corpus, questions, out;
    std::size_t factor = OversampleConfig{}.duplication_factor;
  } over;
  auto* c_over = corpus->add_subcommand("oversample", "append l copies of a question corpus");
  c_over->add_option("--corpus", over.corpus)->required();
  c_over->add_option("--questions", over.questions)->required();
  c_over->add_option("--factor", over.factor)->capture_default_str();
  c_over->add_option("--out", over.out)->required();
  c_over->callback([&] {
    action = [&] {
      const auto base = read_pairs(over.corpus);
      const auto qs = read_pairs(over.questions);
      const auto merged = oversample_questions(base, qs, OversampleConfig{over.factor});
      write_pairs(over.out, merged);
      out << "wrote " << merged.size() << " pairs\n";
    };
  });

  struct {
    std::string in, out = "out";
    std::size_t n_dev = 0;
    std::uint64_t seed = 0;
  } split;
  auto* c_split = corpus->add_subcommand("split", "shuffle and split into train.jsonl and dev.jsonl");
  c_split->add_option("--in", split.in)->required();
  c_split->add_option("--n-dev", split.n_dev)->required();
  c_split->add_option("--seed", split.seed)->capture_default_str();
  c_split->add_option("--out", split.out, "output directory")->capture_default_str();
  c_split->callback([&] {
    action = [&] {
      auto [train, dev] = split_corpus(read_pairs(split.in), split.n_dev, split.seed);
      write_pairs(fs::path(split.out) / "train.jsonl", train);
      write_pairs(fs::path(split.out) / "dev.jsonl", dev);
      out << "train " << train.size() << ", dev " << dev.size() << "\n";
    };
  });

  // dataset --------------------------------------------------------------
  auto* dataset = app.add_subcommand("dataset", "QA datasets");
  dataset->require_subcommand(1);

  struct {
    std::size_t n = 200, lexicon_size = 300, ctx_len = 40;
    std::uint64_t seed = 7;
    SyntheticOptions opts;
    std::string reorder = "identity";
    double synonym_coverage = 0.0;
    std::string out = "out";
  } gen;
  auto* d_gen = dataset->add_subcommand("gen", "generate a synthetic-language dataset and lexicon");
  d_gen->add_option("--n", gen.n)->capture_default_str();
  d_gen->add_option("--lexicon-size", gen.lexicon_size)->capture_default_str();
  d_gen->add_option("--ctx-len", gen.ctx_len)->capture_default_str();
  d_gen->add_option("--seed", gen.seed)->capture_default_str();
  d_gen->add_option("--sentence-len", gen.opts.sentence_len)->capture_default_str();
  d_gen->add_option("--max-answer-len", gen.opts.max_answer_len)->capture_default_str();
  d_gen->add_option("--fertility-rate", gen.opts.fertility_rate)->capture_default_str();
  d_gen->add_option("--homographs", gen.opts.homographs)->capture_default_str();
  d_gen->add_option("--reorder", gen.reorder, "identity | reverse | window-shuffle:<w>")
      ->capture_default_str();
  d_gen->add_option("--synonym-coverage", gen.synonym_coverage)->capture_default_str();
  d_gen->add_option("--out", gen.out, "output directory")->capture_default_str();
  d_gen->callback([&] {
    action = [&] {
      gen.opts.reorder = ReorderRule::parse(gen.reorder);
      SyntheticDataset ds = gen_synthetic_dataset(gen.n, gen.lexicon_size, gen.ctx_len, gen.seed, gen.opts);
      if (gen.synonym_coverage > 0.0) {
        ds.lexicon.synonyms = make_synonym_map(ds.lexicon, gen.synonym_coverage, gen.seed);
      }
      const fs::path dir(gen.out);
      write_file_atomic(dir / "examples.jsonl", to_jsonl(ds.examples));
      write_file_atomic(dir / "squad.json", to_squad_json(ds.examples).dump(2) + "\n");
      write_file_atomic(dir / "lexicon.json", Json(ds.lexicon).dump(2) + "\n");
      out << "generated " << ds.examples.size() << " examples, "
          << ds.lexicon.forward.size() << " lexicon entries\n";
    };
  });

  struct {
    std::string in, out, lang = "und";
  } load;
  auto* d_load = dataset->add_subcommand("load", "validate a SQuAD file and convert it to JSONL");
  d_load->add_option("--in", load.in)->required();
  d_load->add_option("--lang", load.lang)->capture_default_str();
  d_load->add_option("--out", load.out, "QAExample JSONL");
  d_load->callback([&] {
    action = [&] {
      const auto examples = load_dataset(load.in, LanguageTag(load.lang));
      if (!load.out.empty()) write_file_atomic(load.out, to_jsonl(examples));
      out << "loaded " << examples.size() << " examples\n";
    };
  });

  // pipeline -------------------------------------------------------------
  auto* pipeline = app.add_subcommand("pipeline", "run the QA pipeline");
  pipeline->require_subcommand(1);

  RunArgs run_args;
  auto* p_run = pipeline->add_subcommand("run", "runtime MT with attention answer projection");
  add_run_args(p_run, run_args);
  p_run->callback([&] {
    action = [&] {
      PipelineConfig cfg = load_config(run_args);
      const PipelineInputs in = load_inputs(cfg);
      const PipelineResult r = run_pipeline(in.dataset, cfg, in.synthetic_lexicon);
      write_run(run_args.out, r);
      print_report(out, r.report, r.errors.size());
    };
  });

  RunArgs base_args;
  auto* p_base = pipeline->add_subcommand("baseline", "back-translate the pivot answer string");
  add_run_args(p_base, base_args);
  p_base->callback([&] {
    action = [&] {
      PipelineConfig cfg = load_config(base_args);
      const PipelineInputs in = load_inputs(cfg);
      const PipelineResult r = run_baseline(in.dataset, cfg, in.synthetic_lexicon);
      write_run(base_args.out, r);
      print_report(out, r.report, r.errors.size());
    };
  });

  RunArgs sweep_args;
  struct {
    std::string param = "drop_rate";
    std::vector<double> values{0.0, 0.1, 0.2, 0.3};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    double synonym_coverage = 0.0;
  } sweep;
  auto* p_sweep = pipeline->add_subcommand("sweep", "mean F1/EM over seeds per noise level");
  add_run_args(p_sweep, sweep_args);
  p_sweep->add_option("--param", sweep.param, "drop_rate | paraphrase_rate")->capture_default_str();
  p_sweep->add_option("--values", sweep.values)->delimiter(',')->capture_default_str();
  p_sweep->add_option("--seeds", sweep.seeds)->delimiter(',')->capture_default_str();
  p_sweep->add_option("--synonym-coverage", sweep.synonym_coverage,
                      "generate a synonym map covering this share of pivot words")
      ->capture_default_str();
  p_sweep->callback([&] {
    action = [&] {
      PipelineConfig cfg = load_config(sweep_args);
      PipelineInputs in = load_inputs(cfg);
      if (sweep.synonym_coverage > 0.0) {
        auto& lex = cfg.translator.lexicon ? cfg.translator.lexicon : in.synthetic_lexicon;
        if (!lex) throw std::invalid_argument("--synonym-coverage needs an oracle lexicon");
        lex->synonyms = make_synonym_map(*lex, sweep.synonym_coverage, cfg.seed);
      }
      const auto rows = noise_sweep(in.dataset, cfg, parse_sweep_param(sweep.param), sweep.values,
                                    sweep.seeds, in.synthetic_lexicon);
      const fs::path dir(sweep_args.out);
      write_file_atomic(dir / "sweep.csv", sweep_csv(rows));
      write_file_atomic(dir / "sweep.json", sweep_json(rows).dump(2) + "\n");
      out << sweep_csv(rows);
    };
  });

  // eval -----------------------------------------------------------------
  struct {
    std::string dataset, predictions, out;
  } ev;
  auto* eval = app.add_subcommand("eval", "score a predictions file against a dataset");
  eval->add_option("--dataset", ev.dataset, "SQuAD JSON or QAExample JSONL")->required();
  eval->add_option("--predictions", ev.predictions, "predictions JSONL")->required();
  eval->add_option("--out", ev.out, "report JSON");
  eval->callback([&] {
    action = [&] {
      const auto examples = load_dataset(ev.dataset);
      std::vector<Prediction> preds;
      for (const Json& row : read_jsonl_file(ev.predictions)) preds.push_back(row.get<Prediction>());
      const EvalReport r = evaluate_dataset(preds, examples);
      if (!ev.out.empty()) write_file_atomic(ev.out, Json(r).dump(2) + "\n");
      print_report(out, r, 0);
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "xrc: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (!action) {
    err << app.help();
    return kExitUsage;
  }
  try {
    action();
  } catch (const ValidationError& e) {
    err << "xrc: " << e.what() << "\n";
    return kExitRunError;
  } catch (const std::exception& e) {
    err << "xrc: " << e.what() << "\n";
    return kExitRunError;
  }
  return kExitOk;
}

}  // namespace xrc::cli
