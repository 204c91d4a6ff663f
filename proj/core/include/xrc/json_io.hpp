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

// JSON / JSONL encodings of the data model.
//
//   TokenizedText      {"raw": str, "lang": str, "tokens": [[surface, start, end], ...]}
//   TranslationRecord  {"source": text, "target": text, "attention": [[row], ...],
//                       "sentence_blocks": [{"source": [b, e], "target": [b, e]}, ...]}
//   QAExample          {"id": str, "context": text, "question": text,
//                       "answers": [{"text": str, "answer_start": int}, ...]}
//   Prediction         {"id", "answer", "char_start", "char_end", "mode"}
//   EvalReport         {"f1", "em", "n", "substring_rate", "per_example": [{"id", "f1", "em"}]}
//
// Attention rows are source tokens. Block ranges are half-open. Offsets
// are code points.

#ifndef XRC_JSON_IO_HPP_
#define XRC_JSON_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "xrc/metrics.hpp"
#include "xrc/types.hpp"

namespace xrc {

using Json = nlohmann::json;

void to_json(Json& j, const LanguageTag& v);
void from_json(const Json& j, LanguageTag& v);
void to_json(Json& j, const TokenizedText& v);
void from_json(const Json& j, TokenizedText& v);
void to_json(Json& j, const AttentionMatrix& v);
void from_json(const Json& j, AttentionMatrix& v);
void to_json(Json& j, const TranslationRecord& v);
void from_json(const Json& j, TranslationRecord& v);
void to_json(Json& j, const SpanDistributions& v);
void from_json(const Json& j, SpanDistributions& v);
void to_json(Json& j, const QAExample& v);
void from_json(const Json& j, QAExample& v);
void to_json(Json& j, const Prediction& v);
void from_json(const Json& j, Prediction& v);
void to_json(Json& j, const EvalReport& v);
void from_json(const Json& j, EvalReport& v);

// One compact JSON document per line; blank lines are skipped on read.
// Parse errors carry the 1-based line number.
std::vector<Json> read_jsonl(std::istream& in);
std::vector<Json> read_jsonl_file(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<Json>& rows);

template <typename T>
std::string to_jsonl(const std::vector<T>& items) {
  std::string out;
  for (const auto& item : items) {
    out += Json(item).dump();
    out += '\n';
  }
  return out;
}

// Throws std::runtime_error naming the path on failure.
std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace xrc

#endif  // XRC_JSON_IO_HPP_
