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

#ifndef SEMLM_CLOZE_H_
#define SEMLM_CLOZE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semlm/embedding.h"
#include "semlm/language_model.h"

namespace semlm {

struct ClozeInstance {
  size_t sequence = 0;    // index in the source corpus
  EncodedSequence tokens;  // original tokens, EOS included
  size_t position = 0;     // removed position
  TokenId gold = 0;        // tokens[position]
};

// One instance per sequence, removing a uniformly chosen non-EOS position.
// When `eligible` is given only positions whose token passes it are
// candidates, and sequences without such a position are skipped.
std::vector<ClozeInstance> MakeClozeSet(
    const EncodedCorpus &corpus, TokenId eos, uint64_t seed,
    const std::function<bool(TokenId)> &eligible = {});

// Scores every vocabulary candidate for a gap; higher is better.
class GapScorer {
 public:
  virtual ~GapScorer() = default;
  virtual int vocab_size() const = 0;
  virtual std::string name() const = 0;
  // scores[w] for w substituted at seq[gap]. The value at seq[gap] itself is
  // ignored.
  virtual void ScoreGap(std::span<const TokenId> seq, size_t gap,
                        std::span<double> scores) const = 0;
};

// Sum of log p over the events whose history window includes the gap:
// positions gap .. gap + context_size(). The remaining factors of the
// sequence probability do not depend on the candidate.
class LanguageModelScorer : public GapScorer {
 public:
  explicit LanguageModelScorer(const LanguageModel &model) : model_(model) {}
  int vocab_size() const override { return model_.vocab_size(); }
  std::string name() const override { return model_.name(); }
  void ScoreGap(std::span<const TokenId> seq, size_t gap,
                std::span<double> scores) const override;

 private:
  const LanguageModel &model_;
};

// SgScore of each candidate against the observed tokens within `window` of
// the gap on both sides.
class SkipGramScorer : public GapScorer {
 public:
  explicit SkipGramScorer(const EmbeddingModel &model);
  int vocab_size() const override { return model_.vocab_size(); }
  std::string name() const override { return "sg"; }
  void ScoreGap(std::span<const TokenId> seq, size_t gap,
                std::span<double> scores) const override;

 private:
  const EmbeddingModel &model_;
  std::vector<double> log_normalizers_;
};

// Total order over the vocabulary: descending score, then descending tie
// count (unigram frequency), then ascending id.
std::vector<TokenId> RankFromScores(std::span<const double> scores,
                                    std::span<const int64_t> tie_counts);
// 1-based rank of `gold` under the same order, without sorting.
int64_t GoldRank(std::span<const double> scores,
                 std::span<const int64_t> tie_counts, TokenId gold);

std::vector<TokenId> RankCandidates(const GapScorer &scorer,
                                    const ClozeInstance &instance,
                                    std::span<const int64_t> tie_counts);

inline constexpr int kDefaultRecallK = 30;

struct ClozeReport {
  double mrr = 0.0;
  double recall = 0.0;
  int k = kDefaultRecallK;
  int64_t instances = 0;
};

ClozeReport ScoreClozeRanks(std::span<const int64_t> gold_ranks,
                            int k = kDefaultRecallK);
ClozeReport ScoreCloze(const std::vector<std::vector<TokenId>> &rankings,
                       std::span<const TokenId> golds, int k = kDefaultRecallK);

// Gold ranks for every instance. The serial version is the reference; the
// parallel one fans instances out over OpenMP threads and returns identical
// ranks for any thread count.
std::vector<int64_t> ClozeRanksSerial(const GapScorer &scorer,
                                      std::span<const ClozeInstance> instances,
                                      std::span<const int64_t> tie_counts);
std::vector<int64_t> ClozeRanks(const GapScorer &scorer,
                                std::span<const ClozeInstance> instances,
                                std::span<const int64_t> tie_counts);

}  // namespace semlm

#endif  // SEMLM_CLOZE_H_
