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

#ifndef SEMLM_LOG_BILINEAR_H_
#define SEMLM_LOG_BILINEAR_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semlm/language_model.h"
#include "semlm/matrix.h"
#include "semlm/neural_common.h"

namespace semlm {

class Vocabulary;

// Log-bilinear LM. With context slots c_0 (nearest) .. c_{k-1}:
//   u = sum_i q_i * v'(c_i)          (elementwise)
//   p(w | c) = softmax_w(v(w) . u + b(w))
struct LogBilinearModel {
  int window = 0;
  int dim = 0;
  Matrix target;    // v, V x d
  Matrix context;   // v', V x d
  std::vector<double> bias;  // b, V
  Matrix position;  // q, window x d

  int vocab_size() const { return target.rows; }
  bool AllFinite() const;
  bool operator==(const LogBilinearModel &other) const = default;
};

struct LogBilinearGradient {
  SparseRows target;
  SparseRows context;
  std::vector<std::pair<TokenId, double>> bias;
  Matrix position;
};

// Context representation u for the preceding tokens (most recent last).
std::vector<double> LbContextVector(const LogBilinearModel &model,
                                    std::span<const TokenId> history);

// NCE loss of one event with self-normalized scores (log Z fixed to 0):
//   d(x) = s(x) - log(k * P_n(x))
//   loss = -log s(d(target)) - sum_j log s(-d(noise_j))
// `noise_probs` is the noise distribution indexed by token id.
double NceLoss(const LogBilinearModel &model, std::span<const TokenId> history,
               TokenId target, std::span<const TokenId> noise,
               std::span<const double> noise_probs, LogBilinearGradient *grad);

// Causal NCE training over every event of every sequence; noise is the
// empirical unigram. Deterministic under the seed.
LogBilinearModel TrainLogBilinear(const EncodedCorpus &corpus, int vocab_size,
                                  const TrainConfig &config,
                                  std::vector<double> *epoch_losses = nullptr);

// Exact softmax over the full vocabulary.
double LbCondProb(const LogBilinearModel &model,
                  std::span<const TokenId> history, TokenId token);
void LbLogProbAll(const LogBilinearModel &model,
                  std::span<const TokenId> history, std::span<double> out);

class LogBilinearLanguageModel : public LanguageModel {
 public:
  explicit LogBilinearLanguageModel(const LogBilinearModel &model)
      : model_(model) {}
  int vocab_size() const override { return model_.vocab_size(); }
  int context_size() const override { return model_.window; }
  std::string name() const override { return "lb"; }
  double LogProb(std::span<const TokenId> history,
                 TokenId token) const override;
  void LogProbAll(std::span<const TokenId> history,
                  std::span<double> out) const override;

 private:
  const LogBilinearModel &model_;
};

// Target vectors in word-vector layout, then "# context", "# bias" and
// "# position" sections.
void WriteLogBilinearDump(std::ostream &out, const LogBilinearModel &model,
                          const Vocabulary &vocab);

void SaveLogBilinearModel(const LogBilinearModel &model, const std::string &path);
LogBilinearModel LoadLogBilinearModel(const std::string &path);

}  // namespace semlm

#endif  // SEMLM_LOG_BILINEAR_H_
