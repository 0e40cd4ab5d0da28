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

#ifndef SEMLM_ORDERED_PMI_H_
#define SEMLM_ORDERED_PMI_H_

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semlm/cloze.h"
#include "semlm/language_model.h"

namespace semlm {

inline constexpr double kOrderedPmiAlpha = 0.5;

// Directional co-occurrence counts: C(a->b) counts pairs with a strictly
// before b anywhere in the same sequence. EOS is not counted.
struct OrderedPmiModel {
  int vocab_size = 0;
  TokenId eos = -1;
  double alpha = kOrderedPmiAlpha;
  std::vector<int64_t> counts;  // C(a)
  std::unordered_map<uint64_t, int64_t> pairs;  // (a << 32 | b) -> C(a->b)
  int64_t total = 0;  // T, number of counted tokens

  int64_t PairCount(TokenId a, TokenId b) const;
  // log[(C(a->b) + alpha) T / ((C(a) + alpha)(C(b) + alpha))].
  double Score(TokenId a, TokenId b) const;
};

OrderedPmiModel TrainOrderedPmi(const EncodedCorpus &corpus, int vocab_size,
                                TokenId eos, double alpha = kOrderedPmiAlpha);

// Candidate score: OP(t, w) summed over observed tokens before the gap plus
// OP(w, t) over those after it.
class OrderedPmiScorer : public GapScorer {
 public:
  explicit OrderedPmiScorer(const OrderedPmiModel &model) : model_(model) {}
  int vocab_size() const override { return model_.vocab_size; }
  std::string name() const override { return "op"; }
  void ScoreGap(std::span<const TokenId> seq, size_t gap,
                std::span<double> scores) const override;

 private:
  const OrderedPmiModel &model_;
};

std::vector<TokenId> OpPredict(const OrderedPmiModel &model,
                               const ClozeInstance &instance,
                               std::span<const int64_t> tie_counts);

void SaveOrderedPmiModel(const OrderedPmiModel &model, const std::string &path);
OrderedPmiModel LoadOrderedPmiModel(const std::string &path);

}  // namespace semlm

#endif  // SEMLM_ORDERED_PMI_H_
