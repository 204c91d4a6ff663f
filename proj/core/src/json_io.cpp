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

#include "xrc/json_io.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace xrc {

void to_json(Json& j, const LanguageTag& v) { j = v.code(); }
void from_json(const Json& j, LanguageTag& v) { v = LanguageTag(j.get<std::string>()); }

void to_json(Json& j, const TokenizedText& v) {
  Json tokens = Json::array();
  for (const Token& t : v.tokens()) tokens.push_back(Json::array({t.surface, t.char_start, t.char_end}));
  j = Json{{"raw", v.raw()}, {"lang", v.language()}, {"tokens", std::move(tokens)}};
}

void from_json(const Json& j, TokenizedText& v) {
  std::vector<Token> tokens;
  for (const Json& t : j.at("tokens")) {
    if (!t.is_array() || t.size() != 3) {
      throw std::invalid_argument("token must be a [surface, char_start, char_end] triple");
    }
    tokens.push_back({t[0].get<std::string>(), t[1].get<std::size_t>(), t[2].get<std::size_t>()});
  }
  LanguageTag lang = j.contains("lang") ? j.at("lang").get<LanguageTag>() : LanguageTag();
  v = TokenizedText(j.at("raw").get<std::string>(), std::move(tokens), std::move(lang));
}

void to_json(Json& j, const AttentionMatrix& v) {
  j = Json::array();
  for (std::size_t i = 0; i < v.source_len(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < v.target_len(); ++c) row.push_back(v(i, c));
    j.push_back(std::move(row));
  }
}

// A matrix with no rows carries no column count; callers that know the
// target length fix it up (see TranslationRecord below).
void from_json(const Json& j, AttentionMatrix& v) {
  const std::size_t rows = j.size();
  const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
  std::vector<double> values;
  values.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const Json& row = j.at(i);
    if (row.size() != cols) {
      throw std::invalid_argument("attention row " + std::to_string(i) + " has " +
                                  std::to_string(row.size()) + " entries, expected " +
                                  std::to_string(cols));
    }
    for (const Json& x : row) values.push_back(x.get<double>());
  }
  v = AttentionMatrix(rows, cols, std::move(values));
}

void to_json(Json& j, const TranslationRecord& v) {
  j = Json{{"source", v.source}, {"target", v.target}, {"attention", v.attention}};
  if (v.sentence_blocks) {
    Json blocks = Json::array();
    for (const SentenceBlock& b : *v.sentence_blocks) {
      blocks.push_back(Json{{"source", {b.source_begin, b.source_end}},
                            {"target", {b.target_begin, b.target_end}}});
    }
    j["sentence_blocks"] = std::move(blocks);
  }
}

void from_json(const Json& j, TranslationRecord& v) {
  v.source = j.at("source").get<TokenizedText>();
  v.target = j.at("target").get<TokenizedText>();
  v.attention = j.at("attention").get<AttentionMatrix>();
  // Rows but no columns: [[], [], ...] already round-trips. A zero-row
  // matrix never carries its column count.
  if (v.attention.source_len() == 0 && v.target.size() > 0) {
    v.attention = AttentionMatrix(0, v.target.size(), {});
  }
  v.sentence_blocks.reset();
  if (j.contains("sentence_blocks") && !j.at("sentence_blocks").is_null()) {
    std::vector<SentenceBlock> blocks;
    for (const Json& b : j.at("sentence_blocks")) {
      const Json& s = b.at("source");
      const Json& t = b.at("target");
      blocks.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>(),
                        t.at(0).get<std::size_t>(), t.at(1).get<std::size_t>()});
    }
    v.sentence_blocks = std::move(blocks);
  }
}

void to_json(Json& j, const SpanDistributions& v) {
  j = Json{{"p_start", v.p_start}, {"p_end", v.p_end}};
}

void from_json(const Json& j, SpanDistributions& v) {
  v.p_start = j.at("p_start").get<std::vector<double>>();
  v.p_end = j.at("p_end").get<std::vector<double>>();
}

void to_json(Json& j, const QAExample& v) {
  Json answers = Json::array();
  for (const GoldAnswer& a : v.answers) {
    answers.push_back(Json{{"text", a.text}, {"answer_start", a.char_start}});
  }
  j = Json{{"id", v.id}, {"context", v.context}, {"question", v.question}, {"answers", answers}};
}

void from_json(const Json& j, QAExample& v) {
  v.id = j.at("id").get<std::string>();
  v.context = j.at("context").get<TokenizedText>();
  v.question = j.at("question").get<TokenizedText>();
  v.answers.clear();
  for (const Json& a : j.at("answers")) {
    v.answers.push_back({a.at("text").get<std::string>(), a.at("answer_start").get<std::size_t>()});
  }
}

void to_json(Json& j, const Prediction& v) {
  j = Json{{"id", v.example_id}, {"answer", v.answer_text}};
  if (v.char_range) {
    j["char_start"] = v.char_range->start;
    j["char_end"] = v.char_range->end;
  } else {
    j["char_start"] = nullptr;
    j["char_end"] = nullptr;
  }
  j["mode"] = std::string(to_string(v.mode));
}

void from_json(const Json& j, Prediction& v) {
  v.example_id = j.at("id").get<std::string>();
  v.answer_text = j.at("answer").get<std::string>();
  v.char_range.reset();
  if (j.contains("char_start") && !j.at("char_start").is_null()) {
    v.char_range = CharRange{j.at("char_start").get<std::size_t>(), j.at("char_end").get<std::size_t>()};
  }
  v.mode = j.contains("mode") ? parse_prediction_mode(j.at("mode").get<std::string>())
                              : PredictionMode::kExtractive;
}

void to_json(Json& j, const EvalReport& v) {
  Json per = Json::array();
  for (const ExampleScore& s : v.per_example) per.push_back(Json{{"id", s.id}, {"f1", s.f1}, {"em", s.em}});
  j = Json{{"f1", v.f1},
           {"em", v.em},
           {"n", v.n},
           {"substring_rate", v.substring_rate},
           {"per_example", std::move(per)}};
}

void from_json(const Json& j, EvalReport& v) {
  v.f1 = j.at("f1").get<double>();
  v.em = j.at("em").get<double>();
  v.n = j.at("n").get<std::size_t>();
  v.substring_rate = j.at("substring_rate").get<double>();
  v.per_example.clear();
  for (const Json& s : j.at("per_example")) {
    v.per_example.push_back({s.at("id").get<std::string>(), s.at("f1").get<double>(), s.at("em").get<double>()});
  }
}

std::vector<Json> read_jsonl(std::istream& in) {
  std::vector<Json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rows.push_back(Json::parse(line));
    } catch (const Json::parse_error& e) {
      throw std::runtime_error("JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<Json> read_jsonl_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return read_jsonl(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::string to_jsonl(const std::vector<Json>& rows) {
  std::string out;
  for (const Json& r : rows) {
    out += r.dump();
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace xrc
