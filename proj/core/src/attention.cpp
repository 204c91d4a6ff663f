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

#include "xrc/attention.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xrc {
namespace {

std::string dims(std::size_t a, std::size_t b) {
  return std::to_string(a) + "x" + std::to_string(b);
}

}  // namespace

HiddenStates::HiddenStates(std::vector<std::vector<double>> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw std::invalid_argument("hidden states must be non-empty");
  dim_ = vectors_.front().size();
  if (dim_ == 0) throw std::invalid_argument("hidden state dimension must be positive");
  for (std::size_t i = 0; i < vectors_.size(); ++i) {
    if (vectors_[i].size() != dim_) {
      throw std::invalid_argument("hidden state " + std::to_string(i) + " has dimension " +
                                  std::to_string(vectors_[i].size()) + ", expected " +
                                  std::to_string(dim_));
    }
  }
}

BilinearWeights::BilinearWeights(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    throw std::invalid_argument("bilinear weights " + dims(rows_, cols_) + " need " +
                                std::to_string(rows_ * cols_) + " values, got " +
                                std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("bilinear weights must be finite");
  }
}

BilinearWeights BilinearWeights::identity(std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  return BilinearWeights(n, n, std::move(v));
}

BilinearWeights BilinearWeights::zeros(std::size_t rows, std::size_t cols) {
  return BilinearWeights(rows, cols, std::vector<double>(rows * cols, 0.0));
}

std::vector<double> bilinear_scores(const HiddenStates& encoder,
                                    std::span<const double> decoder_state,
                                    const BilinearWeights& w) {
  if (w.rows() != encoder.dim() || w.cols() != decoder_state.size()) {
    throw std::invalid_argument("bilinear_scores: expected W of shape " +
                                dims(encoder.dim(), decoder_state.size()) + ", got " +
                                dims(w.rows(), w.cols()));
  }
  std::vector<double> projected(w.rows(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < w.cols(); ++c) acc += w(r, c) * decoder_state[c];
    projected[r] = acc;
  }
  std::vector<double> scores(encoder.size());
  for (std::size_t i = 0; i < encoder.size(); ++i) {
    const auto h = encoder[i];
    double acc = 0.0;
    for (std::size_t r = 0; r < h.size(); ++r) acc += h[r] * projected[r];
    scores[i] = acc;
  }
  return scores;
}

std::vector<double> softmax(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("softmax of an empty vector");
  const double m = *std::max_element(scores.begin(), scores.end());
  std::vector<double> out(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - m);
    z += out[i];
  }
  for (double& v : out) v /= z;
  return out;
}

AttentionMatrix attention_from_states(const HiddenStates& encoder, const HiddenStates& decoder,
                                      const BilinearWeights& w) {
  const std::size_t rows = encoder.size();
  const std::size_t cols = decoder.size();
  std::vector<double> values(rows * cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const auto column = softmax(bilinear_scores(encoder, decoder[j], w));
    for (std::size_t i = 0; i < rows; ++i) values[i * cols + j] = column[i];
  }
  return AttentionMatrix(rows, cols, std::move(values));
}

AttentionMatrix attention_from_alignment(std::span<const std::size_t> gold,
                                         std::size_t source_len, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("attention_from_alignment: epsilon " + std::to_string(epsilon) +
                                " outside [0, 1)");
  }
  if (source_len == 0) throw std::invalid_argument("attention_from_alignment: empty source");
  const std::size_t cols = gold.size();
  const double off = source_len > 1 ? epsilon / static_cast<double>(source_len - 1) : 0.0;
  const double on = source_len > 1 ? 1.0 - epsilon : 1.0;
  std::vector<double> values(source_len * cols, off);
  for (std::size_t j = 0; j < cols; ++j) {
    if (gold[j] >= source_len) {
      throw std::invalid_argument("attention_from_alignment: gold[" + std::to_string(j) + "] = " +
                                  std::to_string(gold[j]) + " outside [0, " +
                                  std::to_string(source_len) + ")");
    }
    values[gold[j] * cols + j] = on;
  }
  return AttentionMatrix(source_len, cols, std::move(values));
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax of an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace xrc
