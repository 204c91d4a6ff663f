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

#include "xrc/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "xrc/rng.hpp"
#include "xrc/utf8.hpp"

namespace xrc {

void to_json(Json& j, const AlignedPair& v) {
  j = Json{{"src", v.source_sentence}, {"tgt", v.target_sentence}, {"score", v.alignment_score}};
}

void from_json(const Json& j, AlignedPair& v) {
  v.source_sentence = j.at("src").get<std::vector<std::string>>();
  v.target_sentence = j.at("tgt").get<std::vector<std::string>>();
  v.alignment_score = j.at("score").get<double>();
}

std::vector<AlignedPair> read_pairs(const std::filesystem::path& path) {
  std::vector<AlignedPair> pairs;
  const auto rows = read_jsonl_file(path);
  pairs.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    AlignedPair p = rows[k].get<AlignedPair>();
    if (p.source_sentence.empty() || p.target_sentence.empty()) {
      throw std::runtime_error(path.string() + ": pair " + std::to_string(k + 1) +
                               " has an empty side");
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::string pairs_to_jsonl(std::span<const AlignedPair> pairs) {
  std::string out;
  for (const auto& p : pairs) {
    out += Json(p).dump();
    out += '\n';
  }
  return out;
}

FilterConfig FilterConfig::for_language(std::string_view lang) {
  if (lang == "ja") return FilterConfig{-0.3, 5, 50};
  if (lang == "fr") return FilterConfig{0.0, 5, 50};
  throw std::invalid_argument("no default filter thresholds for language \"" + std::string(lang) +
                              "\"");
}

std::vector<AlignedPair> filter_pairs(std::span<const AlignedPair> pairs, const FilterConfig& cfg) {
  if (cfg.min_len > cfg.max_len) throw std::invalid_argument("filter: min_len > max_len");
  auto in_bounds = [&cfg](std::size_t n) { return n >= cfg.min_len && n <= cfg.max_len; };
  std::vector<AlignedPair> out;
  for (const auto& p : pairs) {
    if (p.alignment_score >= cfg.min_score && in_bounds(p.source_sentence.size()) &&
        in_bounds(p.target_sentence.size())) {
      out.push_back(p);
    }
  }
  return out;
}

std::vector<AlignedPair> sort_and_take_best(std::span<const AlignedPair> pairs, std::size_t k) {
  if (k > pairs.size()) {
    throw std::invalid_argument("sort_and_take_best: k = " + std::to_string(k) + " exceeds " +
                                std::to_string(pairs.size()) + " pairs");
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&pairs](std::size_t a, std::size_t b) {
    return pairs[a].alignment_score > pairs[b].alignment_score;
  });
  std::vector<AlignedPair> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(pairs[order[i]]);
  return out;
}

std::pair<std::vector<AlignedPair>, std::vector<AlignedPair>> split_corpus(
    std::vector<AlignedPair> pairs, std::size_t n_dev, std::uint64_t seed) {
  if (n_dev > 0 && n_dev >= pairs.size()) {
    throw std::invalid_argument("split_corpus: n_dev = " + std::to_string(n_dev) +
                                " must be smaller than " + std::to_string(pairs.size()) + " pairs");
  }
  Rng rng(seed);
  rng.shuffle(std::span<AlignedPair>(pairs));
  std::vector<AlignedPair> dev(std::make_move_iterator(pairs.begin()),
                               std::make_move_iterator(pairs.begin() + static_cast<long>(n_dev)));
  pairs.erase(pairs.begin(), pairs.begin() + static_cast<long>(n_dev));
  return {std::move(pairs), std::move(dev)};
}

std::vector<AlignedPair> oversample_questions(std::span<const AlignedPair> corpus,
                                              std::span<const AlignedPair> questions,
                                              const OversampleConfig& cfg) {
  if (cfg.duplication_factor == 0) throw std::invalid_argument("duplication factor must be >= 1");
  std::vector<AlignedPair> out;
  out.reserve(corpus.size() + cfg.duplication_factor * questions.size());
  out.insert(out.end(), corpus.begin(), corpus.end());
  for (const auto& q : questions) {
    for (std::size_t r = 0; r < cfg.duplication_factor; ++r) out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// SQuAD

std::vector<QAExample> load_squad_json(const Json& doc, const LanguageTag& lang) {
  if (!doc.is_object() || !doc.contains("data") || !doc.at("data").is_array()) {
    throw std::runtime_error("SQuAD JSON must be an object with a \"data\" array");
  }
  std::vector<QAExample> out;
  std::vector<std::string> bad;
  for (const Json& article : doc.at("data")) {
    for (const Json& para : article.at("paragraphs")) {
      const TokenizedText context =
          TokenizedText::whitespace(para.at("context").get<std::string>(), lang);
      for (const Json& qa : para.at("qas")) {
        QAExample ex;
        ex.id = qa.at("id").get<std::string>();
        ex.context = context;
        ex.question = TokenizedText::whitespace(qa.at("question").get<std::string>(), lang);
        for (const Json& a : qa.at("answers")) {
          ex.answers.push_back(
              {a.at("text").get<std::string>(), a.at("answer_start").get<std::size_t>()});
        }
        if (!ex.violations().empty()) bad.push_back(ex.id);
        out.push_back(std::move(ex));
      }
    }
  }
  if (!bad.empty()) {
    std::string msg = "answer_start does not match answer text for qa id(s):";
    for (const auto& id : bad) msg += " " + id;
    throw std::runtime_error(msg);
  }
  return out;
}

std::vector<QAExample> load_squad(std::istream& in, const LanguageTag& lang) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::runtime_error(std::string("malformed SQuAD JSON: ") + e.what());
  }
  try {
    return load_squad_json(doc, lang);
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed SQuAD JSON: ") + e.what());
  }
}

std::vector<QAExample> load_squad_file(const std::filesystem::path& path, const LanguageTag& lang) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return load_squad(in, lang);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

Json to_squad_json(std::span<const QAExample> examples, std::string_view title) {
  Json paragraphs = Json::array();
  for (const auto& ex : examples) {
    if (paragraphs.empty() || paragraphs.back().at("context") != ex.context.raw()) {
      paragraphs.push_back(Json{{"context", ex.context.raw()}, {"qas", Json::array()}});
    }
    Json answers = Json::array();
    for (const auto& a : ex.answers) answers.push_back(Json{{"text", a.text}, {"answer_start", a.char_start}});
    paragraphs.back()["qas"].push_back(
        Json{{"id", ex.id}, {"question", ex.question.raw()}, {"answers", std::move(answers)}});
  }
  return Json{{"version", "1.1"},
              {"data", Json::array({Json{{"title", std::string(title)}, {"paragraphs", paragraphs}}})}};
}

std::vector<QAExample> load_dataset(const std::filesystem::path& path, const LanguageTag& lang) {
  if (path.extension() != ".jsonl") return load_squad_file(path, lang);
  std::vector<QAExample> out;
  for (const Json& row : read_jsonl_file(path)) {
    QAExample ex = row.get<QAExample>();
    auto v = ex.violations();
    if (!v.empty()) throw ValidationError(std::move(v));
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace xrc
