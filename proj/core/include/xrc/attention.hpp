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

#ifndef XRC_ATTENTION_HPP_
#define XRC_ATTENTION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "xrc/types.hpp"

namespace xrc {

// A non-empty sequence of equal-length real vectors.
class HiddenStates {
 public:
  explicit HiddenStates(std::vector<std::vector<double>> vectors);

  std::size_t size() const { return vectors_.size(); }
  std::size_t dim() const { return dim_; }
  std::span<const double> operator[](std::size_t i) const { return vectors_[i]; }

 private:
  std::vector<std::vector<double>> vectors_;
  std::size_t dim_ = 0;
};

// Bilinear form W of shape encoder_dim x decoder_dim.
class BilinearWeights {
 public:
  BilinearWeights(std::size_t rows, std::size_t cols, std::vector<double> values);
  static BilinearWeights identity(std::size_t n);
  static BilinearWeights zeros(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
};

// score_i = h_i . (W h~). Throws std::invalid_argument on dimension mismatch.
std::vector<double> bilinear_scores(const HiddenStates& encoder,
                                    std::span<const double> decoder_state,
                                    const BilinearWeights& w);

// Max-subtracted softmax. Throws std::invalid_argument on empty input.
std::vector<double> softmax(std::span<const double> scores);

// Column j is softmax(bilinear_scores(encoder, decoder[j], w)).
AttentionMatrix attention_from_states(const HiddenStates& encoder, const HiddenStates& decoder,
                                      const BilinearWeights& w);

// Column j puts 1 - epsilon on row gold[j] and spreads epsilon uniformly
// over the other rows (all mass on the single row when source_len == 1).
// Requires 0 <= epsilon < 1 and gold[j] < source_len.
AttentionMatrix attention_from_alignment(std::span<const std::size_t> gold,
                                         std::size_t source_len, double epsilon);

// Lowest index among maximal entries. Throws on empty input.
std::size_t argmax(std::span<const double> values);

}  // namespace xrc

#endif  // XRC_ATTENTION_HPP_
