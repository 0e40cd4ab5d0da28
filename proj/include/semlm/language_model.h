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

#ifndef SEMLM_LANGUAGE_MODEL_H_
#define SEMLM_LANGUAGE_MODEL_H_

#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "semlm/common.h"

namespace semlm {

using EncodedSequence = std::vector<TokenId>;
using EncodedCorpus = std::vector<EncodedSequence>;

// Left-to-right conditional distribution over a closed vocabulary.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;

  virtual int vocab_size() const = 0;
  // Number of preceding tokens the conditional depends on.
  virtual int context_size() const = 0;
  virtual std::string name() const = 0;

  // log p(token | history). `history` holds the preceding tokens of the
  // sequence, most recent last; only the last context_size() matter.
  virtual double LogProb(std::span<const TokenId> history,
                         TokenId token) const = 0;

  // out[w] = log p(w | history) for every w. The default calls LogProb per
  // token; models with a shared normalizer override it.
  virtual void LogProbAll(std::span<const TokenId> history,
                          std::span<double> out) const;

  double Prob(std::span<const TokenId> history, TokenId token) const {
    return std::exp(LogProb(history, token));
  }
};

// Sum of log p(w_t | w_<t) over every position, EOS included.
double SequenceLogProb(const LanguageModel &model,
                       std::span<const TokenId> seq);

// Perplexity over all prediction events whose target is not `eos`. EOS still
// conditions later events. Reference implementation, single running sum.
double PerplexitySerial(const LanguageModel &model, const EncodedCorpus &corpus,
                        TokenId eos);
// Same quantity with sequences scored in parallel and reduced in order.
double Perplexity(const LanguageModel &model, const EncodedCorpus &corpus,
                  TokenId eos);

// p(w) = 1/V for every history.
class UniformModel : public LanguageModel {
 public:
  explicit UniformModel(int vocab_size) : vocab_size_(vocab_size) {}
  int vocab_size() const override { return vocab_size_; }
  int context_size() const override { return 0; }
  std::string name() const override { return "uniform"; }
  double LogProb(std::span<const TokenId>, TokenId) const override {
    return -std::log(static_cast<double>(vocab_size_));
  }

 private:
  int vocab_size_;
};

// lambda * p_primary + (1 - lambda) * p_secondary.
class InterpolatedModel : public LanguageModel {
 public:
  InterpolatedModel(const LanguageModel &primary,
                    const LanguageModel &secondary, double lambda);
  int vocab_size() const override { return primary_.vocab_size(); }
  int context_size() const override;
  std::string name() const override;
  double LogProb(std::span<const TokenId> history,
                 TokenId token) const override;
  void LogProbAll(std::span<const TokenId> history,
                  std::span<double> out) const override;

 private:
  const LanguageModel &primary_;
  const LanguageModel &secondary_;
  double lambda_;
};

// Numerically stable log(sum(exp(x))).
double LogSumExp(std::span<const double> values);

}  // namespace semlm

#endif  // SEMLM_LANGUAGE_MODEL_H_
