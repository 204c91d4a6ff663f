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

#include "xrc/backends.hpp"

#include <chrono>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "xrc/json_io.hpp"
#include "xrc/utf8.hpp"

namespace xrc {
namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) throw std::invalid_argument("endpoint needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

class GateGuard {
 public:
  explicit GateGuard(RequestGate& gate) : gate_(gate) { gate_.acquire(); }
  ~GateGuard() { gate_.release(); }
  GateGuard(const GateGuard&) = delete;
  GateGuard& operator=(const GateGuard&) = delete;

 private:
  RequestGate& gate_;
};

Json post_json(const std::string& endpoint, const Json& body, const HttpOptions& opts) {
  const Endpoint ep = split_endpoint(endpoint);
  const std::string payload = body.dump();
  const int attempts = std::max(opts.attempts, 1);
  std::string last_error;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(opts.backoff_ms << (attempt - 1)));
    }
    httplib::Client client(ep.base);
    const auto timeout = std::chrono::milliseconds(opts.timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    auto res = client.Post(ep.path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw std::runtime_error(endpoint + " answered HTTP " + std::to_string(res->status));
    }
    try {
      return Json::parse(res->body);
    } catch (const Json::parse_error& e) {
      throw ValidationError({std::string("response is not JSON: ") + e.what()});
    }
  }
  throw std::runtime_error(endpoint + " unreachable after " + std::to_string(attempts) +
                           " attempts: " + last_error);
}

}  // namespace

// ---------------------------------------------------------------------------

OracleTranslator::OracleTranslator(SyntheticLexicon lexicon, NoiseConfig noise,
                                   LanguageTag target_lang)
    : lexicon_(std::move(lexicon)), noise_(noise), target_lang_(std::move(target_lang)) {
  auto v = lexicon_.violations();
  auto n = noise_.violations();
  v.insert(v.end(), n.begin(), n.end());
  if (!v.empty()) throw ValidationError(std::move(v));
}

TranslationRecord OracleTranslator::translate(const TokenizedText& text) const {
  return toy_translate(text, lexicon_, noise_, target_lang_);
}

FileTranslator::FileTranslator(const std::filesystem::path& path) {
  const auto rows = read_jsonl_file(path);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    TranslationRecord rec = rows[k].get<TranslationRecord>();
    auto v = validate_record(rec);
    if (!v.empty()) {
      for (auto& s : v) s = path.string() + ":" + std::to_string(k + 1) + ": " + s;
      throw ValidationError(std::move(v));
    }
    records_.insert_or_assign(input_key(rec.source), std::move(rec));
  }
}

std::string FileTranslator::input_key(const TokenizedText& text) {
  return utf8::hex64(utf8::fnv1a64(text.raw()));
}

TranslationRecord FileTranslator::translate(const TokenizedText& text) const {
  auto it = records_.find(input_key(text));
  if (it == records_.end() || it->second.source.raw() != text.raw()) {
    throw std::runtime_error("no precomputed translation for input " + input_key(text));
  }
  return it->second;
}

RequestGate::RequestGate(std::size_t limit) : available_(limit == 0 ? 1 : limit) {}

void RequestGate::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return available_ > 0; });
  --available_;
}

void RequestGate::release() {
  {
    std::lock_guard lock(mu_);
    ++available_;
  }
  cv_.notify_one();
}

TranslationRecord translate_remote(const std::string& endpoint, const TokenizedText& text,
                                   const LanguageTag& target_lang, const HttpOptions& opts) {
  const Json response =
      post_json(endpoint, Json{{"tokens", text.surfaces()}, {"lang", text.language().code()}}, opts);
  if (!response.is_object() || !response.contains("target_tokens") ||
      !response.contains("attention")) {
    throw ValidationError({"response lacks \"target_tokens\" or \"attention\""});
  }
  TranslationRecord rec;
  try {
    const auto words = response.at("target_tokens").get<std::vector<std::string>>();
    rec.source = text;
    rec.target = TokenizedText::from_words(words, target_lang);
    rec.attention = response.at("attention").get<AttentionMatrix>();
  } catch (const Json::exception& e) {
    throw ValidationError({std::string("malformed response: ") + e.what()});
  } catch (const std::invalid_argument& e) {
    throw ValidationError({std::string("malformed response: ") + e.what()});
  }
  if (rec.attention.source_len() == 0 && rec.target.size() > 0) {
    rec.attention = AttentionMatrix(0, rec.target.size(), {});
  }
  auto v = validate_record(rec);
  if (!v.empty()) throw ValidationError(std::move(v));
  return rec;
}

HttpTranslator::HttpTranslator(std::string endpoint, LanguageTag target_lang, HttpOptions opts)
    : endpoint_(std::move(endpoint)),
      target_lang_(std::move(target_lang)),
      opts_(opts),
      gate_(opts.max_in_flight) {
  split_endpoint(endpoint_);
}

TranslationRecord HttpTranslator::translate(const TokenizedText& text) const {
  GateGuard guard(gate_);
  return translate_remote(endpoint_, text, target_lang_, opts_);
}

CachingTranslator::CachingTranslator(std::shared_ptr<const Translator> inner)
    : inner_(std::move(inner)) {}

TranslationRecord CachingTranslator::translate(const TokenizedText& text) const {
  std::string key = text.language().code();
  key.push_back('\x1f');
  key += text.raw();
  for (const Token& t : text.tokens()) {
    key.push_back('\x1f');
    key += std::to_string(t.char_start) + ":" + std::to_string(t.char_end);
  }
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++hits_;
      return it->second;
    }
  }
  // Computed outside the lock; a concurrent duplicate computes the same value.
  TranslationRecord rec = inner_->translate(text);
  std::lock_guard lock(mu_);
  ++misses_;
  cache_.emplace(std::move(key), rec);
  return rec;
}

std::size_t CachingTranslator::hits() const {
  std::lock_guard lock(mu_);
  return hits_;
}

std::size_t CachingTranslator::misses() const {
  std::lock_guard lock(mu_);
  return misses_;
}

std::string LexiconBackTranslator::back_translate(std::string_view answer,
                                                  std::uint64_t seed) const {
  return toy_back_translate(answer, lexicon_, seed);
}

RecordBackTranslator::RecordBackTranslator(std::shared_ptr<const Translator> inner,
                                           LanguageTag answer_lang)
    : inner_(std::move(inner)), answer_lang_(std::move(answer_lang)) {}

std::string RecordBackTranslator::back_translate(std::string_view answer, std::uint64_t) const {
  const TokenizedText text = TokenizedText::whitespace(std::string(answer), answer_lang_);
  if (text.empty()) return "";
  return inner_->translate(text).target.raw();
}

// ---------------------------------------------------------------------------

SpanDistributions PerfectRcModel::predict(const RcInput& input) const {
  const QAExample& ex = input.example;
  if (ex.answers.empty()) throw std::runtime_error("perfect RC needs a gold answer");
  const GoldAnswer& gold = ex.answers.front();
  const CharRange range{gold.char_start, gold.char_start + utf8::length(gold.text)};
  const auto source_span = char_range_to_span(input.context.source, range);
  if (!source_span) throw std::runtime_error("gold answer overlaps no context token");
  const auto pivot = forward_project_span(input.context, *source_span);
  if (!pivot) throw std::runtime_error("gold answer has no surviving pivot tokens");
  return perfect_rc(input.context, *pivot, peak_);
}

SpanDistributions KeywordRcModel::predict(const RcInput& input) const {
  return keyword_rc(input.context.target, input.question.target, cfg_);
}

FileRcModel::FileRcModel(const std::filesystem::path& path) {
  for (const Json& row : read_jsonl_file(path)) {
    by_id_.insert_or_assign(row.at("id").get<std::string>(), row.get<SpanDistributions>());
  }
}

SpanDistributions FileRcModel::predict(const RcInput& input) const {
  auto it = by_id_.find(input.example.id);
  if (it == by_id_.end()) {
    throw std::runtime_error("no span distributions for example " + input.example.id);
  }
  return it->second;
}

HttpRcModel::HttpRcModel(std::string endpoint, HttpOptions opts)
    : endpoint_(std::move(endpoint)), opts_(opts), gate_(opts.max_in_flight) {
  split_endpoint(endpoint_);
}

SpanDistributions HttpRcModel::predict(const RcInput& input) const {
  GateGuard guard(gate_);
  const Json response = post_json(endpoint_,
                                  Json{{"id", input.example.id},
                                       {"context_tokens", input.context.target.surfaces()},
                                       {"question_tokens", input.question.target.surfaces()}},
                                  opts_);
  try {
    return response.get<SpanDistributions>();
  } catch (const Json::exception& e) {
    throw ValidationError({std::string("malformed RC response: ") + e.what()});
  }
}

}  // namespace xrc
