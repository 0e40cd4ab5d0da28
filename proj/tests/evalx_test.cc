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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "gtest/gtest.h"
#include "semlm/cloze.h"
#include "semlm/ngram.h"
#include "semlm/ordered_pmi.h"
#include "semlm/parallel.h"
#include "semlm/report.h"
#include "test_util.h"

namespace semlm {
namespace {

std::vector<int64_t> Counts(const EncodedCorpus &corpus, int vocab) {
  std::vector<int64_t> counts(vocab, 0);
  for (const auto &seq : corpus) {
    for (TokenId id : seq) ++counts[id];
  }
  return counts;
}

// Scores every candidate by a hash of (instance, candidate); a ranker with no
// information about the gold token.
class RandomScorer : public GapScorer {
 public:
  explicit RandomScorer(int vocab) : vocab_(vocab) {}
  int vocab_size() const override { return vocab_; }
  std::string name() const override { return "random"; }
  void ScoreGap(std::span<const TokenId> seq, size_t gap,
                std::span<double> scores) const override {
    uint64_t h = 1469598103934665603ULL ^ gap;
    for (TokenId id : seq) h = (h ^ static_cast<uint64_t>(id)) * 1099511628211ULL;
    std::mt19937_64 rng(h);
    for (int w = 0; w < vocab_; ++w) scores[w] = UnitDouble(rng());
  }

 private:
  int vocab_;
};

// Puts the removed token first.
class OracleScorer : public GapScorer {
 public:
  OracleScorer(int vocab, const std::vector<ClozeInstance> &instances)
      : vocab_(vocab), instances_(instances) {}
  int vocab_size() const override { return vocab_; }
  std::string name() const override { return "oracle"; }
  void ScoreGap(std::span<const TokenId> seq, size_t gap,
                std::span<double> scores) const override {
    std::fill(scores.begin(), scores.end(), 0.0);
    for (const ClozeInstance &inst : instances_) {
      if (inst.position == gap &&
          std::equal(seq.begin(), seq.end(), inst.tokens.begin(), inst.tokens.end())) {
        scores[inst.gold] = 1.0;
        return;
      }
    }
  }

 private:
  int vocab_;
  const std::vector<ClozeInstance> &instances_;
};

TEST(ClozeSetTest, OnePositionPerSequenceNeverEos) {
  const EncodedCorpus corpus = testing::RandomCorpus(3, 200, 6, 9);
  const auto instances = MakeClozeSet(corpus, 8, 42);
  ASSERT_EQ(instances.size(), corpus.size());
  for (size_t i = 0; i < instances.size(); ++i) {
    EXPECT_EQ(instances[i].sequence, i);
    EXPECT_EQ(instances[i].tokens, corpus[i]);
    EXPECT_NE(instances[i].gold, 8);
    EXPECT_EQ(instances[i].gold, corpus[i][instances[i].position]);
  }
  const auto again = MakeClozeSet(corpus, 8, 42);
  for (size_t i = 0; i < instances.size(); ++i) {
    EXPECT_EQ(again[i].position, instances[i].position);
  }
}

TEST(ClozeSetTest, FilterAndErrors) {
  const EncodedCorpus corpus = {{0, 1, 2, 3}, {1, 1, 3}, {2, 3}};
  const auto filtered = MakeClozeSet(corpus, 3, 1, [](TokenId id) { return id == 2; });
  ASSERT_EQ(filtered.size(), 2u);
  EXPECT_EQ(filtered[0].position, 2u);
  EXPECT_EQ(filtered[1].sequence, 2u);
  EXPECT_THROW(MakeClozeSet({}, 3, 1), Error);
  EXPECT_THROW(MakeClozeSet({{3}}, 3, 1), Error);
}

TEST(RankingTest, PermutationWithTieBreak) {
  const std::vector<double> scores = {0.5, 2.0, 0.5, 0.5, -1.0};
  const std::vector<int64_t> counts = {3, 0, 7, 3, 9};
  const std::vector<TokenId> ranking = RankFromScores(scores, counts);
  EXPECT_EQ(ranking, (std::vector<TokenId>{1, 2, 0, 3, 4}));
  for (TokenId w = 0; w < 5; ++w) {
    const auto pos = std::find(ranking.begin(), ranking.end(), w) - ranking.begin();
    EXPECT_EQ(GoldRank(scores, counts, w), pos + 1);
  }
}

TEST(RankingTest, TwoTokenVocabulary) {
  const EncodedCorpus corpus = {{0, 0, 1}, {0, 1}};
  const NGramModel uni = NGramModel::Train(corpus, 2, {.order = 1});
  const LanguageModelScorer scorer(uni);
  const auto counts = Counts(corpus, 2);
  const auto instances = MakeClozeSet(corpus, 1, 5);
  for (const auto &inst : instances) {
    const auto ranking = RankCandidates(scorer, inst, counts);
    ASSERT_EQ(ranking.size(), 2u);
    EXPECT_EQ(ranking[0], 0);
  }
}

TEST(MetricsTest, PerfectAndSecondRank) {
  const std::vector<int64_t> first(40, 1);
  const ClozeReport perfect = ScoreClozeRanks(first);
  EXPECT_EQ(perfect.mrr, 1.0);
  EXPECT_EQ(perfect.recall, 1.0);
  const std::vector<int64_t> second(40, 2);
  EXPECT_EQ(ScoreClozeRanks(second).mrr, 0.5);
  const std::vector<int64_t> mixed = {1, 31, 30};
  const ClozeReport report = ScoreClozeRanks(mixed, 30);
  EXPECT_NEAR(report.mrr, (1.0 + 1.0 / 31 + 1.0 / 30) / 3, 1e-15);
  EXPECT_NEAR(report.recall, 2.0 / 3, 1e-15);
  EXPECT_THROW(ScoreClozeRanks({}), Error);
}

TEST(MetricsTest, SmallVocabularyAlwaysRecalled) {
  const int vocab = 25;
  const EncodedCorpus corpus = testing::RandomCorpus(2, 300, 8, vocab);
  const auto instances = MakeClozeSet(corpus, vocab - 1, 3);
  const RandomScorer scorer(vocab);
  const auto ranks = ClozeRanks(scorer, instances, Counts(corpus, vocab));
  EXPECT_EQ(ScoreClozeRanks(ranks).recall, 1.0);
}

TEST(MetricsTest, OracleRankerIsPerfect) {
  const int vocab = 100;
  const EncodedCorpus corpus = testing::RandomCorpus(4, 500, 8, vocab);
  const auto instances = MakeClozeSet(corpus, vocab - 1, 3);
  const OracleScorer scorer(vocab, instances);
  const ClozeReport report =
      ScoreClozeRanks(ClozeRanks(scorer, instances, Counts(corpus, vocab)));
  EXPECT_EQ(report.mrr, 1.0);
  EXPECT_EQ(report.recall, 1.0);
}

TEST(MetricsTest, UninformedRankerMatchesHarmonicExpectation) {
  const int vocab = 100;
  const EncodedCorpus corpus = testing::RandomCorpus(5, 10000, 10, vocab);
  const auto instances = MakeClozeSet(corpus, vocab - 1, 6);
  const RandomScorer scorer(vocab);
  const ClozeReport report =
      ScoreClozeRanks(ClozeRanks(scorer, instances, Counts(corpus, vocab)));
  double h1 = 0.0, h2 = 0.0;
  for (int r = 1; r <= vocab; ++r) {
    h1 += 1.0 / r;
    h2 += 1.0 / (static_cast<double>(r) * r);
  }
  const double mean = h1 / vocab;
  const double sd = std::sqrt(h2 / vocab - mean * mean);
  EXPECT_LT(std::abs(report.mrr - mean), 3.0 * sd / std::sqrt(10000.0));
}

// Full-sequence log probability with every candidate substituted.
std::vector<double> BruteForceScores(const LanguageModel &model,
                                     const ClozeInstance &inst) {
  std::vector<double> out(model.vocab_size());
  EncodedSequence seq = inst.tokens;
  for (TokenId w = 0; w < model.vocab_size(); ++w) {
    seq[inst.position] = w;
    out[w] = SequenceLogProb(model, seq);
  }
  return out;
}

TEST(TrigramClozeTest, MatchesSubstituteAndScore) {
  const int vocab = 15;
  const EncodedCorpus train = testing::MarkovCorpus(7, 400, 10, vocab);
  const EncodedCorpus test = testing::RandomCorpus(8, 200, 9, vocab);
  const NGramModel tri = NGramModel::Train(train, vocab);
  const LanguageModelScorer scorer(tri);
  const auto counts = Counts(train, vocab);
  std::vector<double> scores(vocab);
  for (const auto &inst : MakeClozeSet(test, vocab - 1, 9)) {
    scorer.ScoreGap(inst.tokens, inst.position, scores);
    const std::vector<double> oracle = BruteForceScores(tri, inst);
    // Equal up to a candidate-independent offset.
    const double offset = oracle[0] - scores[0];
    for (TokenId w = 0; w < vocab; ++w) {
      EXPECT_NEAR(oracle[w] - scores[w], offset, 1e-9);
    }
    EXPECT_EQ(RankCandidates(scorer, inst, counts), RankFromScores(oracle, counts));
  }
}

TEST(ClozeRanksTest, ParallelMatchesSerial) {
  const int vocab = 20;
  const EncodedCorpus corpus = testing::MarkovCorpus(10, 300, 8, vocab);
  const NGramModel bg = NGramModel::Train(corpus, vocab, {.order = 2});
  const LanguageModelScorer scorer(bg);
  const auto instances = MakeClozeSet(corpus, vocab - 1, 11);
  const auto counts = Counts(corpus, vocab);
  const auto serial = ClozeRanksSerial(scorer, instances, counts);
  const int saved = MaxThreads();
  for (int threads : {1, 2, 4}) {
    SetThreads(threads);
    EXPECT_EQ(ClozeRanks(scorer, instances, counts), serial);
  }
  SetThreads(saved);
}

TEST(OrderedPmiTest, DirectArithmetic) {
  // EOS = 3 is ignored.
  const EncodedCorpus corpus = {{0, 1, 2, 3}, {1, 0, 3}, {0, 1, 3}};
  const OrderedPmiModel model = TrainOrderedPmi(corpus, 4, 3);
  EXPECT_EQ(model.total, 7);
  EXPECT_EQ(model.counts, (std::vector<int64_t>{3, 3, 1, 0}));
  EXPECT_EQ(model.PairCount(0, 1), 2);
  EXPECT_EQ(model.PairCount(1, 0), 1);
  EXPECT_EQ(model.PairCount(0, 2), 1);
  EXPECT_EQ(model.PairCount(2, 0), 0);
  EXPECT_NEAR(model.Score(0, 1), std::log(2.5 * 7 / (3.5 * 3.5)), 1e-12);
  EXPECT_NEAR(model.Score(1, 0), std::log(1.5 * 7 / (3.5 * 3.5)), 1e-12);
  EXPECT_NEAR(model.Score(2, 0), std::log(0.5 * 7 / (1.5 * 3.5)), 1e-12);
  EXPECT_NE(model.Score(0, 1), model.Score(1, 0));
  EXPECT_THROW(TrainOrderedPmi(corpus, 4, 3, 0.0), Error);
  EXPECT_THROW(TrainOrderedPmi({}, 4, 3), Error);
}

TEST(OrderedPmiTest, SymmetricWhenCountsAre) {
  const EncodedCorpus corpus = {{0, 1, 2}, {1, 0, 2}};
  const OrderedPmiModel model = TrainOrderedPmi(corpus, 3, 2);
  EXPECT_EQ(model.Score(0, 1), model.Score(1, 0));
}

TEST(OrderedPmiTest, GapScoreUsesBothSides) {
  const EncodedCorpus corpus = {{0, 1, 2, 4}, {2, 3, 0, 4}};
  const OrderedPmiModel model = TrainOrderedPmi(corpus, 5, 4);
  const OrderedPmiScorer scorer(model);
  const EncodedSequence seq = {0, 1, 2, 4};
  std::vector<double> scores(5);
  scorer.ScoreGap(seq, 1, scores);
  for (TokenId w = 0; w < 5; ++w) {
    EXPECT_NEAR(scores[w], model.Score(0, w) + model.Score(w, 2), 1e-12);
  }
  const auto dir = testing::TempDir("op_io");
  SaveOrderedPmiModel(model, (dir / "m").string());
  const OrderedPmiModel loaded = LoadOrderedPmiModel((dir / "m").string());
  EXPECT_EQ(loaded.pairs, model.pairs);
  EXPECT_EQ(loaded.counts, model.counts);
  EXPECT_EQ(loaded.Score(2, 0), model.Score(2, 0));
}

TEST(PerplexityReportTest, TableShapeAndValues) {
  const int vocab = 12;
  const EncodedCorpus train = testing::MarkovCorpus(12, 500, 10, vocab);
  const EncodedCorpus test = testing::MarkovCorpus(13, 50, 10, vocab);
  const UniformModel uniform(vocab);
  const NGramModel uni = NGramModel::Train(train, vocab, {.order = 1});
  const NGramModel tri = NGramModel::Train(train, vocab);

  const std::vector<ReportRow> one = {{"FC", &test, vocab - 1, "", {{"u", &uniform}}}};
  const PerplexityTable small = PerplexityReport(one);
  EXPECT_EQ(small.rows().size(), 1u);
  EXPECT_EQ(small.columns().size(), 1u);
  EXPECT_NEAR(*small.Get("FC", "u"), vocab, 1e-9);

  const std::vector<ReportRow> rows = {
      {"FC", &test, vocab - 1, "abc", {{"uni", &uni}, {"tri", &tri}}},
      {"EC", &test, vocab - 1, "", {{"tri", &tri}}}};
  const PerplexityTable table = PerplexityReport(rows);
  EXPECT_GE(*table.Get("FC", "uni"), *table.Get("FC", "tri"));
  EXPECT_FALSE(table.Get("EC", "uni").has_value());
  const auto json = table.ToJson();
  EXPECT_EQ(json["rows"], nlohmann::json({"FC", "EC"}));
  EXPECT_EQ(json["columns"], nlohmann::json({"uni", "tri"}));
  EXPECT_EQ(json["metadata"]["corpus_checksums"]["FC"], "abc");
  const std::string text = table.ToText();
  EXPECT_NE(text.find("# corpus_checksums"), std::string::npos);
  EXPECT_NE(text.find('-'), std::string::npos);
}

}  // namespace
}  // namespace semlm
