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

// Pluggable translation and reading-comprehension back-ends.
//
// All implementations are safe for concurrent calls: oracle and file
// back-ends are immutable after construction, HTTP back-ends bound their
// in-flight requests with a semaphore, and CachingTranslator locks its map.
//
// HTTP wire format (UTF-8 JSON over POST):
//   translate  request  {"tokens": [str, ...], "lang": str}
//              response {"target_tokens": [str, ...], "attention": [[row], ...]}
//              attention rows are source tokens, columns target tokens.
//   rc         request  {"id": str, "context_tokens": [str, ...], "question_tokens": [str, ...]}
//              response {"p_start": [num, ...], "p_end": [num, ...]}

#ifndef XRC_BACKENDS_HPP_
#define XRC_BACKENDS_HPP_

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

#include "xrc/oracles.hpp"
#include "xrc/types.hpp"

namespace xrc {

class Translator {
 public:
  virtual ~Translator() = default;
  virtual TranslationRecord translate(const TokenizedText& text) const = 0;
};

class OracleTranslator : public Translator {
 public:
  OracleTranslator(SyntheticLexicon lexicon, NoiseConfig noise,
                   LanguageTag target_lang = LanguageTag("synP"));
  TranslationRecord translate(const TokenizedText& text) const override;

 private:
  SyntheticLexicon lexicon_;
  NoiseConfig noise_;
  LanguageTag target_lang_;
};

// Precomputed records, one JSON TranslationRecord per line, looked up by
// the hash of the input's raw text (see input_key). Every record is
// validated on load.
class FileTranslator : public Translator {
 public:
  explicit FileTranslator(const std::filesystem::path& path);
  TranslationRecord translate(const TokenizedText& text) const override;

  // Hex FNV-1a 64 of the raw text.
  static std::string input_key(const TokenizedText& text);
  std::size_t size() const { return records_.size(); }

 private:
  std::unordered_map<std::string, TranslationRecord> records_;
};

struct HttpOptions {
  int timeout_ms = 5000;
  int attempts = 3;
  int backoff_ms = 100;  // doubled after every failed attempt
  std::size_t max_in_flight = 4;
};

// Counting gate for concurrent requests.
class RequestGate {
 public:
  explicit RequestGate(std::size_t limit);
  void acquire();
  void release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t available_;
};

// POSTs text to endpoint and validates the response as a record whose
// source is text. Network failures and 5xx responses are retried with
// exponential backoff; an invalid response throws ValidationError at once.
TranslationRecord translate_remote(const std::string& endpoint, const TokenizedText& text,
                                   const LanguageTag& target_lang, const HttpOptions& opts = {});

class HttpTranslator : public Translator {
 public:
  HttpTranslator(std::string endpoint, LanguageTag target_lang, HttpOptions opts = {});
  TranslationRecord translate(const TokenizedText& text) const override;

 private:
  std::string endpoint_;
  LanguageTag target_lang_;
  HttpOptions opts_;
  mutable RequestGate gate_;
};

// Memoises another translator by input text. No semantic effect for pure
// back-ends.
class CachingTranslator : public Translator {
 public:
  explicit CachingTranslator(std::shared_ptr<const Translator> inner);
  TranslationRecord translate(const TokenizedText& text) const override;
  std::size_t hits() const;
  std::size_t misses() const;

 private:
  std::shared_ptr<const Translator> inner_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, TranslationRecord> cache_;
  mutable std::size_t hits_ = 0;
  mutable std::size_t misses_ = 0;
};

// Pivot-to-target translation of an isolated answer string.
class AnswerBackTranslator {
 public:
  virtual ~AnswerBackTranslator() = default;
  virtual std::string back_translate(std::string_view answer, std::uint64_t seed) const = 0;
};

class LexiconBackTranslator : public AnswerBackTranslator {
 public:
  explicit LexiconBackTranslator(SyntheticLexicon lexicon) : lexicon_(std::move(lexicon)) {}
  std::string back_translate(std::string_view answer, std::uint64_t seed) const override;

 private:
  SyntheticLexicon lexicon_;
};

// Back-translates through a record-producing translator and returns the
// target text.
class RecordBackTranslator : public AnswerBackTranslator {
 public:
  RecordBackTranslator(std::shared_ptr<const Translator> inner, LanguageTag answer_lang);
  std::string back_translate(std::string_view answer, std::uint64_t seed) const override;

 private:
  std::shared_ptr<const Translator> inner_;
  LanguageTag answer_lang_;
};

struct RcInput {
  const QAExample& example;
  const TranslationRecord& context;
  const TranslationRecord& question;
};

class RcModel {
 public:
  virtual ~RcModel() = default;
  // Distributions over the pivot context tokens (context.target).
  virtual SpanDistributions predict(const RcInput& input) const = 0;
};

// Locates the first gold answer's pivot span through the attention and
// peaks the distributions on it.
class PerfectRcModel : public RcModel {
 public:
  explicit PerfectRcModel(double peak = 1.0) : peak_(peak) {}
  SpanDistributions predict(const RcInput& input) const override;

 private:
  double peak_;
};

class KeywordRcModel : public RcModel {
 public:
  explicit KeywordRcModel(RcOracleConfig cfg = {}) : cfg_(cfg) {}
  SpanDistributions predict(const RcInput& input) const override;

 private:
  RcOracleConfig cfg_;
};

// JSONL rows {"id": str, "p_start": [...], "p_end": [...]}.
class FileRcModel : public RcModel {
 public:
  explicit FileRcModel(const std::filesystem::path& path);
  SpanDistributions predict(const RcInput& input) const override;

 private:
  std::unordered_map<std::string, SpanDistributions> by_id_;
};

class HttpRcModel : public RcModel {
 public:
  HttpRcModel(std::string endpoint, HttpOptions opts = {});
  SpanDistributions predict(const RcInput& input) const override;

 private:
  std::string endpoint_;
  HttpOptions opts_;
  mutable RequestGate gate_;
};

}  // namespace xrc

#endif  // XRC_BACKENDS_HPP_
