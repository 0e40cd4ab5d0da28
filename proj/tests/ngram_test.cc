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

#include "semlm/ngram.h"

#include <cmath>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "kn_oracle.h"
#include "semlm/parallel.h"
#include "test_util.h"

namespace semlm {
namespace {

using testing::AllHistories;
using testing::KneserNeyOracle;
using testing::ToyCorpus;

constexpr int kToyVocab = 8;

class OracleTest : public ::testing::TestWithParam<int> {};

TEST_P(OracleTest, MatchesBruteForceOnEveryPair) {
  const int order = GetParam();
  const EncodedCorpus corpus = ToyCorpus();
  const NGramModel model = NGramModel::Train(corpus, kToyVocab, {order, {}});
  const KneserNeyOracle oracle(corpus, kToyVocab, order);
  for (int level = 1; level <= order; ++level) {
    EXPECT_NEAR(model.discount(level), oracle.discount(level), 1e-15);
  }
  double worst = 0.0;
  for (const auto &history : AllHistories(kToyVocab, 2)) {
    for (TokenId w = 0; w < kToyVocab; ++w) {
      worst = std::max(worst, std::abs(model.CondProb(history, w) -
                                       oracle.Prob(history, w)));
    }
  }
  EXPECT_LT(worst, 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Orders, OracleTest, ::testing::Values(1, 2, 3));

TEST(NGramTest, HandComputedUnigram) {
  // Counts 0:2, 1:1, EOS:1 -> D = 2 / (2 + 2) = 0.5.
  const NGramModel model = NGramModel::Train({{0, 0, 1, 2}}, 3, {1, {}});
  EXPECT_DOUBLE_EQ(model.discount(1), 0.5);
  EXPECT_DOUBLE_EQ(model.CondProb({}, 0), 0.5);
  EXPECT_DOUBLE_EQ(model.CondProb({}, 1), 0.25);
  EXPECT_DOUBLE_EQ(model.CondProb({}, 2), 0.25);
}

TEST(NGramTest, ContinuationCountsIncludeSequenceStart) {
  // "1" is preceded by 0 and 2 and starts one sequence: three types.
  const NGramModel model =
      NGramModel::Train({{0, 1, 3}, {2, 1, 3}, {1, 3}, {0, 1, 3}}, 4, {2, {}});
  const TokenId one[] = {1};
  EXPECT_EQ(model.RawCount(one), 4);
  EXPECT_EQ(model.LevelCount(one), 3);
  const TokenId pair[] = {0, 1};
  EXPECT_EQ(model.RawCount(pair), 2);
  EXPECT_EQ(model.LevelCount(pair), 2);
}

TEST(NGramTest, DiscountFallbackAndOverride) {
  const NGramModel fallback = NGramModel::Train({{0, 0, 1}, {0, 0, 1}}, 2, {1, {}});
  EXPECT_DOUBLE_EQ(fallback.discount(1), 0.5);
  const NGramModel fixed =
      NGramModel::Train(ToyCorpus(), kToyVocab, {3, std::array{0.1, 0.2, 0.3}});
  EXPECT_DOUBLE_EQ(fixed.discount(1), 0.1);
  EXPECT_DOUBLE_EQ(fixed.discount(3), 0.3);
  EXPECT_THROW(
      NGramModel::Train(ToyCorpus(), kToyVocab, {3, std::array{0.1, 1.5, 0.3}}),
      Error);
}

TEST(NGramTest, Errors) {
  EXPECT_THROW(NGramModel::Train(ToyCorpus(), kToyVocab, {4, {}}), Error);
  EXPECT_THROW(NGramModel::Train(ToyCorpus(), kToyVocab, {0, {}}), Error);
  EXPECT_THROW(NGramModel::Train({}, kToyVocab, {3, {}}), Error);
  EXPECT_THROW(NGramModel::Train({{0, 9}}, kToyVocab, {3, {}}), Error);
}

TEST(NGramTest, NormalizedForRandomHistories) {
  const int vocab = 50;
  const EncodedCorpus corpus = testing::MarkovCorpus(11, 400, 20, vocab);
  const NGramModel model = NGramModel::Train(corpus, vocab, {3, {}});
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::vector<TokenId> history;
    const int length = static_cast<int>(rng() % 4);
    for (int t = 0; t < length; ++t) history.push_back(rng() % vocab);
    double sum = 0.0;
    for (TokenId w = 0; w < vocab; ++w) sum += model.CondProb(history, w);
    EXPECT_NEAR(sum, 1.0, 1e-6);
  }
}

TEST(NGramTest, UnseenTokensStayPositive) {
  const NGramModel model = NGramModel::Train({{0, 1, 3}}, 5, {3, {}});
  for (const auto &history : AllHistories(5, 2)) {
    for (TokenId w = 0; w < 5; ++w) EXPECT_GT(model.CondProb(history, w), 0.0);
  }
}

TEST(NGramTest, LongHistoriesAreTruncated) {
  const NGramModel model = NGramModel::Train(ToyCorpus(), kToyVocab, {2, {}});
  const std::vector<TokenId> long_history = {4, 5, 6, 1};
  const std::vector<TokenId> last = {1};
  for (TokenId w = 0; w < kToyVocab; ++w) {
    EXPECT_EQ(model.CondProb(long_history, w), model.CondProb(last, w));
  }
}

void ExpectIdentical(const NGramModel &a, const NGramModel &b) {
  EXPECT_TRUE(a == b);
  for (const auto &history : AllHistories(kToyVocab, 2)) {
    for (TokenId w = 0; w < kToyVocab; ++w) {
      ASSERT_EQ(a.LogProb(history, w), b.LogProb(history, w));
    }
  }
}

TEST(NGramTest, BinaryAndTextRoundTripBitExact) {
  for (int order = 1; order <= 3; ++order) {
    const NGramModel model = NGramModel::Train(ToyCorpus(), kToyVocab, {order, {}});
    std::stringstream binary, text;
    model.SaveBinary(binary);
    model.SaveText(text);
    EXPECT_EQ(text.str().rfind("\\data\\", 0), 0u);
    ExpectIdentical(model, NGramModel::Load(binary));
    ExpectIdentical(model, NGramModel::Load(text));
  }
  const auto dir = testing::TempDir("ngram_io");
  const NGramModel model = NGramModel::Train(ToyCorpus(), kToyVocab, {3, {}});
  model.Save((dir / "m.bin").string(), false);
  model.Save((dir / "m.txt").string(), true);
  ExpectIdentical(model, NGramModel::LoadFile((dir / "m.bin").string()));
  ExpectIdentical(model, NGramModel::LoadFile((dir / "m.txt").string()));
  std::stringstream garbage("not a model");
  EXPECT_THROW(NGramModel::Load(garbage), Error);
}

TEST(PerplexityTest, MarkovTrend) {
  const int vocab = 40;
  const EncodedCorpus train = testing::MarkovCorpus(1, 2500, 20, vocab);
  const EncodedCorpus heldout = testing::MarkovCorpus(2, 300, 20, vocab);
  double previous = 1e300;
  for (int order = 1; order <= 3; ++order) {
    const NGramModel model = NGramModel::Train(train, vocab, {order, {}});
    const double ppl = Perplexity(model, heldout, vocab - 1);
    EXPECT_LT(ppl, previous) << NGramModelName(order);
    previous = ppl;
  }
}

TEST(PerplexityTest, ExcludesEosTargets) {
  const UniformModel uniform(6);
  EXPECT_NEAR(Perplexity(uniform, {{0, 1, 5}, {2, 5}}, 5), 6.0, 1e-12);
  const NGramModel model = NGramModel::Train(ToyCorpus(), kToyVocab, {2, {}});
  const EncodedCorpus heldout = {{0, 1, 2, 7}, {3, 7}};
  double log_sum = 0.0;
  int events = 0;
  for (const auto &seq : heldout) {
    for (size_t t = 0; t < seq.size(); ++t) {
      if (seq[t] == 7) continue;
      log_sum += model.LogProb(std::span(seq).first(t), seq[t]);
      ++events;
    }
  }
  EXPECT_NEAR(Perplexity(model, heldout, 7), std::exp(-log_sum / events), 1e-12);
}

TEST(PerplexityTest, ParallelMatchesSerialAndIsThreadInvariant) {
  const int vocab = 30;
  const EncodedCorpus train = testing::MarkovCorpus(3, 500, 15, vocab);
  const EncodedCorpus heldout = testing::MarkovCorpus(4, 200, 15, vocab);
  const NGramModel model = NGramModel::Train(train, vocab, {3, {}});
  const double serial = PerplexitySerial(model, heldout, vocab - 1);
  SetThreads(1);
  const double one = Perplexity(model, heldout, vocab - 1);
  SetThreads(4);
  const double four = Perplexity(model, heldout, vocab - 1);
  EXPECT_EQ(one, four);
  EXPECT_NEAR(one, serial, 1e-12 * serial);
}

TEST(PerplexityTest, InterpolationOfIdenticalModelsIsIdentity) {
  const NGramModel model = NGramModel::Train(ToyCorpus(), kToyVocab, {3, {}});
  const InterpolatedModel mixed(model, model, 0.3);
  for (const auto &history : AllHistories(kToyVocab, 2)) {
    for (TokenId w = 0; w < kToyVocab; ++w) {
      EXPECT_NEAR(mixed.LogProb(history, w), model.LogProb(history, w), 1e-12);
    }
  }
  EXPECT_THROW(InterpolatedModel(model, model, 1.5), Error);
}

}  // namespace
}  // namespace semlm
