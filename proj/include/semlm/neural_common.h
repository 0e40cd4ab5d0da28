// Copyright 2026 The SemLM Authors.
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

#ifndef SEMLM_NEURAL_COMMON_H_
#define SEMLM_NEURAL_COMMON_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "semlm/language_model.h"

namespace semlm {

struct TrainConfig {
  int dim = 300;
  int window = 5;
  int epochs = 5;
  double learning_rate = 0.025;  // decays linearly to min_learning_rate
  double min_learning_rate = 1e-4;
  int negatives = 5;
  uint64_t seed = 1;

  static TrainConfig SkipGramDefaults();     // window 10, d 300, k 5
  static TrainConfig CbowDefaults();         // window 5, d 300, k 5
  static TrainConfig LogBilinearDefaults();  // window 5, d 150, k 25

  void Validate() const;
};

// Draws noise tokens from unigram counts raised to `power`.
class NoiseSampler {
 public:
  NoiseSampler(const EncodedCorpus &corpus, int vocab_size, double power);

  TokenId Sample(std::mt19937_64 &rng) const;
  double prob(TokenId id) const { return probs_[id]; }
  std::span<const double> probs() const { return probs_; }

 private:
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

// Gradient restricted to a few rows of a V x d parameter matrix.
class SparseRows {
 public:
  explicit SparseRows(int dim = 0) : dim_(dim) {}

  void Reset(int dim) {
    dim_ = dim;
    ids_.clear();
    used_ = 0;
  }
  // Zero-initialized on first access.
  std::span<double> Row(TokenId id);
  size_t size() const { return used_; }
  TokenId id(size_t i) const { return ids_[i]; }
  std::span<const double> values(size_t i) const {
    return {rows_[i].data(), static_cast<size_t>(dim_)};
  }

 private:
  int dim_;
  std::vector<TokenId> ids_;
  std::vector<std::vector<double>> rows_;
  size_t used_ = 0;
};

// Linearly decayed step size for the given fraction of training done.
inline double DecayedRate(const TrainConfig &config, double progress) {
  const double rate = config.learning_rate +
                      (config.min_learning_rate - config.learning_rate) * progress;
  return rate < config.min_learning_rate ? config.min_learning_rate : rate;
}

}  // namespace semlm

#endif  // SEMLM_NEURAL_COMMON_H_
