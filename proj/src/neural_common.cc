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

#include "semlm/neural_common.h"

#include <algorithm>
#include <cmath>

#include "semlm/common.h"

namespace semlm {

TrainConfig TrainConfig::SkipGramDefaults() {
  TrainConfig config;
  config.dim = 300;
  config.window = 10;
  config.learning_rate = 0.025;
  config.negatives = 5;
  return config;
}

TrainConfig TrainConfig::CbowDefaults() {
  TrainConfig config;
  config.dim = 300;
  config.window = 5;
  config.learning_rate = 0.025;
  config.negatives = 5;
  return config;
}

TrainConfig TrainConfig::LogBilinearDefaults() {
  TrainConfig config;
  config.dim = 150;
  config.window = 5;
  config.learning_rate = 0.05;
  config.negatives = 25;
  return config;
}

void TrainConfig::Validate() const {
  if (dim <= 0 || window <= 0 || epochs <= 0 || negatives <= 0 ||
      !(learning_rate > 0.0) || !(min_learning_rate > 0.0)) {
    throw Error("training configuration values must all be positive");
  }
}

NoiseSampler::NoiseSampler(const EncodedCorpus &corpus, int vocab_size,
                           double power)
    : probs_(vocab_size, 0.0), cumulative_(vocab_size, 0.0) {
  std::vector<int64_t> counts(vocab_size, 0);
  for (const EncodedSequence &seq : corpus) {
    for (TokenId id : seq) ++counts.at(id);
  }
  double total = 0.0;
  for (TokenId w = 0; w < vocab_size; ++w) {
    probs_[w] = counts[w] > 0 ? std::pow(static_cast<double>(counts[w]), power)
                              : 0.0;
    total += probs_[w];
  }
  if (total == 0.0) {
    std::fill(probs_.begin(), probs_.end(), 1.0);
    total = vocab_size;
  }
  double running = 0.0;
  for (TokenId w = 0; w < vocab_size; ++w) {
    probs_[w] /= total;
    running += probs_[w];
    cumulative_[w] = running;
  }
}

TokenId NoiseSampler::Sample(std::mt19937_64 &rng) const {
  const double u = UnitDouble(rng()) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<TokenId>(it - cumulative_.begin());
}

std::span<double> SparseRows::Row(TokenId id) {
  for (size_t i = 0; i < used_; ++i) {
    if (ids_[i] == id) return {rows_[i].data(), static_cast<size_t>(dim_)};
  }
  if (used_ == rows_.size()) rows_.emplace_back();
  if (used_ == ids_.size()) ids_.push_back(id);
  ids_[used_] = id;
  rows_[used_].assign(dim_, 0.0);
  return {rows_[used_++].data(), static_cast<size_t>(dim_)};
}

}  // namespace semlm
