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

#ifndef SEMLM_EMBEDDING_H_
#define SEMLM_EMBEDDING_H_

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "semlm/language_model.h"
#include "semlm/matrix.h"
#include "semlm/neural_common.h"

namespace semlm {

class Vocabulary;

enum class EmbeddingFlavor { kSkipGram, kCbow };

// word2vec-style model: input and output embedding matrices (V x d).
struct EmbeddingModel {
  EmbeddingFlavor flavor = EmbeddingFlavor::kSkipGram;
  int window = 0;
  int dim = 0;
  Matrix input;
  Matrix output;

  int vocab_size() const { return input.rows; }
  bool operator==(const EmbeddingModel &other) const = default;
};

struct EmbeddingGradient {
  SparseRows input;
  SparseRows output;
};

// Negative-sampling loss for one (center, context) pair:
//   -log s(out[c] . in[w]) - sum_n log s(-out[n] . in[w])
// Fills `grad` (d loss / d params) when non-null.
double SkipGramLoss(const EmbeddingModel &model, TokenId center,
                    TokenId context, std::span<const TokenId> negatives,
                    EmbeddingGradient *grad);

// Same with h = mean of in[c] over the context predicting `target`.
double CbowLoss(const EmbeddingModel &model, std::span<const TokenId> context,
                TokenId target, std::span<const TokenId> negatives,
                EmbeddingGradient *grad);

// Single-threaded SGD with a symmetric window; deterministic under the seed.
// Appends one average loss per epoch to `epoch_losses` when non-null.
EmbeddingModel TrainSkipGram(const EncodedCorpus &corpus, int vocab_size,
                             const TrainConfig &config,
                             std::vector<double> *epoch_losses = nullptr);
EmbeddingModel TrainCbow(const EncodedCorpus &corpus, int vocab_size,
                         const TrainConfig &config,
                         std::vector<double> *epoch_losses = nullptr);

// Exact softmax of out[w] . mean(in[c]) over the vocabulary; `context` is the
// preceding tokens, most recent last, of which the last `window` are used.
double CbowCondProb(const EmbeddingModel &model,
                    std::span<const TokenId> context, TokenId token);
void CbowLogProbAll(const EmbeddingModel &model,
                    std::span<const TokenId> context, std::span<double> out);

// Skip-gram log normalizers: log sum_c exp(out[c] . in[w]) for every w.
std::vector<double> SkipGramLogNormalizers(const EmbeddingModel &model);

// sum over c in context of log p(c | candidate). A ranking score, not a
// chain-rule probability. Pass precomputed normalizers to avoid an O(V^2 d)
// recomputation per call.
double SgScore(const EmbeddingModel &model, TokenId candidate,
               std::span<const TokenId> context,
               std::span<const double> log_normalizers = {});

class CbowLanguageModel : public LanguageModel {
 public:
  explicit CbowLanguageModel(const EmbeddingModel &model) : model_(model) {}
  int vocab_size() const override { return model_.vocab_size(); }
  int context_size() const override { return model_.window; }
  std::string name() const override { return "cbow"; }
  double LogProb(std::span<const TokenId> history,
                 TokenId token) const override;
  void LogProbAll(std::span<const TokenId> history,
                  std::span<double> out) const override;

 private:
  const EmbeddingModel &model_;
};

// Non-probabilistic left-to-right reading of a skip-gram model: softmax over
// candidates of SgScore against the preceding window. Only for reporting a
// clearly labelled pseudo-perplexity.
class SkipGramPseudoModel : public LanguageModel {
 public:
  explicit SkipGramPseudoModel(const EmbeddingModel &model);
  int vocab_size() const override { return model_.vocab_size(); }
  int context_size() const override { return model_.window; }
  std::string name() const override { return "sg-pseudo"; }
  double LogProb(std::span<const TokenId> history,
                 TokenId token) const override;
  void LogProbAll(std::span<const TokenId> history,
                  std::span<double> out) const override;

 private:
  const EmbeddingModel &model_;
  std::vector<double> log_normalizers_;
};

// Standard word-vector text layout: "V d" then "token v1 ... vd".
void WriteEmbeddingDump(std::ostream &out, const Matrix &vectors,
                        const Vocabulary &vocab);

void SaveEmbeddingModel(const EmbeddingModel &model, const std::string &path);
EmbeddingModel LoadEmbeddingModel(const std::string &path);

}  // namespace semlm

#endif  // SEMLM_EMBEDDING_H_
