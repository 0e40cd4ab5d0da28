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

#include "semlm/cloze.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "semlm/parallel.h"

namespace semlm {

std::vector<ClozeInstance> MakeClozeSet(
    const EncodedCorpus &corpus, TokenId eos, uint64_t seed,
    const std::function<bool(TokenId)> &eligible) {
  if (corpus.empty()) throw Error("cannot build a cloze set from an empty corpus");
  std::mt19937_64 rng(seed);
  std::vector<ClozeInstance> out;
  std::vector<size_t> positions;
  for (size_t s = 0; s < corpus.size(); ++s) {
    const EncodedSequence &seq = corpus[s];
    positions.clear();
    for (size_t t = 0; t < seq.size(); ++t) {
      if (seq[t] == eos) continue;
      if (eligible && !eligible(seq[t])) continue;
      positions.push_back(t);
    }
    if (positions.empty()) {
      if (eligible) continue;
      throw Error("cloze sequence " + std::to_string(s) + " has no token");
    }
    const auto pick = static_cast<size_t>(UnitDouble(rng()) * positions.size());
    const size_t position = positions[std::min(pick, positions.size() - 1)];
    out.push_back({s, seq, position, seq[position]});
  }
  return out;
}

void LanguageModelScorer::ScoreGap(std::span<const TokenId> seq, size_t gap,
                                   std::span<double> scores) const {
  const int vocab = model_.vocab_size();
  model_.LogProbAll(seq.first(gap), scores);
  const size_t last = std::min(seq.size() - 1,
                               gap + static_cast<size_t>(model_.context_size()));
  if (last <= gap) return;
  std::vector<TokenId> buffer(seq.begin(), seq.end());
  std::span<const TokenId> view(buffer);
  for (TokenId w = 0; w < vocab; ++w) {
    buffer[gap] = w;
    double sum = 0.0;
    for (size_t j = gap + 1; j <= last; ++j) {
      sum += model_.LogProb(view.first(j), buffer[j]);
    }
    scores[w] += sum;
  }
}

SkipGramScorer::SkipGramScorer(const EmbeddingModel &model)
    : model_(model), log_normalizers_(SkipGramLogNormalizers(model)) {}

void SkipGramScorer::ScoreGap(std::span<const TokenId> seq, size_t gap,
                              std::span<double> scores) const {
  std::vector<TokenId> context;
  const size_t lo = gap >= static_cast<size_t>(model_.window) ? gap - model_.window : 0;
  const size_t hi = std::min(seq.size() - 1, gap + model_.window);
  for (size_t j = lo; j <= hi; ++j) {
    if (j != gap) context.push_back(seq[j]);
  }
  for (TokenId w = 0; w < model_.vocab_size(); ++w) {
    scores[w] = SgScore(model_, w, context, log_normalizers_);
  }
}

namespace {

bool Better(std::span<const double> scores, std::span<const int64_t> counts,
            TokenId a, TokenId b) {
  if (scores[a] != scores[b]) return scores[a] > scores[b];
  if (counts[a] != counts[b]) return counts[a] > counts[b];
  return a < b;
}

}  // namespace

std::vector<TokenId> RankFromScores(std::span<const double> scores,
                                    std::span<const int64_t> tie_counts) {
  std::vector<TokenId> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](TokenId a, TokenId b) {
    return Better(scores, tie_counts, a, b);
  });
  return order;
}

int64_t GoldRank(std::span<const double> scores,
                 std::span<const int64_t> tie_counts, TokenId gold) {
  int64_t rank = 1;
  for (TokenId w = 0; w < static_cast<TokenId>(scores.size()); ++w) {
    if (w != gold && Better(scores, tie_counts, w, gold)) ++rank;
  }
  return rank;
}

std::vector<TokenId> RankCandidates(const GapScorer &scorer,
                                    const ClozeInstance &instance,
                                    std::span<const int64_t> tie_counts) {
  std::vector<double> scores(scorer.vocab_size());
  scorer.ScoreGap(instance.tokens, instance.position, scores);
  return RankFromScores(scores, tie_counts);
}

ClozeReport ScoreClozeRanks(std::span<const int64_t> gold_ranks, int k) {
  if (gold_ranks.empty()) throw Error("cannot score an empty cloze set");
  ClozeReport report;
  report.k = k;
  report.instances = static_cast<int64_t>(gold_ranks.size());
  double reciprocal = 0.0;
  int64_t hits = 0;
  for (int64_t rank : gold_ranks) {
    reciprocal += 1.0 / static_cast<double>(rank);
    if (rank <= k) ++hits;
  }
  report.mrr = reciprocal / static_cast<double>(report.instances);
  report.recall = static_cast<double>(hits) / static_cast<double>(report.instances);
  return report;
}

ClozeReport ScoreCloze(const std::vector<std::vector<TokenId>> &rankings,
                       std::span<const TokenId> golds, int k) {
  if (rankings.size() != golds.size()) {
    throw Error("rankings and golds differ in length");
  }
  std::vector<int64_t> ranks;
  ranks.reserve(golds.size());
  for (size_t i = 0; i < golds.size(); ++i) {
    auto it = std::find(rankings[i].begin(), rankings[i].end(), golds[i]);
    if (it == rankings[i].end()) throw Error("gold token missing from ranking");
    ranks.push_back(it - rankings[i].begin() + 1);
  }
  return ScoreClozeRanks(ranks, k);
}

std::vector<int64_t> ClozeRanksSerial(const GapScorer &scorer,
                                      std::span<const ClozeInstance> instances,
                                      std::span<const int64_t> tie_counts) {
  std::vector<int64_t> ranks;
  ranks.reserve(instances.size());
  for (const ClozeInstance &instance : instances) {
    std::vector<TokenId> ranking = RankCandidates(scorer, instance, tie_counts);
    auto it = std::find(ranking.begin(), ranking.end(), instance.gold);
    ranks.push_back(it - ranking.begin() + 1);
  }
  return ranks;
}

std::vector<int64_t> ClozeRanks(const GapScorer &scorer,
                                std::span<const ClozeInstance> instances,
                                std::span<const int64_t> tie_counts) {
  const int64_t n = static_cast<int64_t>(instances.size());
  std::vector<int64_t> ranks(n, 0);
#pragma omp parallel
  {
    std::vector<double> scores(scorer.vocab_size());
#pragma omp for schedule(dynamic, 4)
    for (int64_t i = 0; i < n; ++i) {
      const ClozeInstance &instance = instances[i];
      scorer.ScoreGap(instance.tokens, instance.position, scores);
      ranks[i] = GoldRank(scores, tie_counts, instance.gold);
    }
  }
  return ranks;
}

}  // namespace semlm
