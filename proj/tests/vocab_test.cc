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

#include "semlm/vocab.h"

#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "semlm/parallel.h"
#include "test_util.h"

namespace semlm {
namespace {

SemSequence Seq(std::string_view rendered,
                SequenceKind kind = SequenceKind::kFrameChain) {
  SemSequence seq;
  seq.doc_id = "d";
  seq.kind = kind;
  std::istringstream in{std::string(rendered)};
  std::string token;
  while (in >> token) seq.tokens.push_back(SemToken::Parse(token));
  return seq;
}

// "rare" appears 19 times, "edge" 20 times, "common" 40 times.
std::vector<SemSequence> BoundaryCorpus() {
  std::vector<SemSequence> corpus;
  for (int i = 0; i < 20; ++i) {
    corpus.push_back(Seq(i < 19 ? "common rare edge o" : "common edge common o"));
  }
  for (int i = 0; i < 19; ++i) corpus.push_back(Seq("common"));
  return corpus;
}

TEST(VocabTest, BoundaryAtMinCount) {
  const auto corpus = BoundaryCorpus();
  const Vocabulary vocab = Vocabulary::Build(corpus, 20);
  EXPECT_FALSE(vocab.Find("rare").has_value());
  ASSERT_TRUE(vocab.Find("edge").has_value());
  EXPECT_EQ(vocab.count(*vocab.Find("edge")), 20);
  EXPECT_EQ(vocab.IdOf("rare"), vocab.unk_id());
  EXPECT_EQ(vocab.count(vocab.unk_id()), 19);
}

TEST(VocabTest, LayoutAndKinds) {
  const auto corpus = BoundaryCorpus();
  const Vocabulary vocab = Vocabulary::Build(corpus, 20);
  // common 40, edge 20, o 20: ties broken lexicographically.
  ASSERT_EQ(vocab.size(), 5);
  EXPECT_EQ(vocab.token(0), "common");
  EXPECT_EQ(vocab.token(1), "edge");
  EXPECT_EQ(vocab.token(2), "o");
  EXPECT_EQ(vocab.unk_id(), 3);
  EXPECT_EQ(vocab.eos_id(), 4);
  EXPECT_EQ(vocab.count(vocab.eos_id()), static_cast<int64_t>(corpus.size()));
  EXPECT_EQ(vocab.kind(0), VocabKind::kFrameSense);
  EXPECT_EQ(vocab.kind(2), VocabKind::kPeriod);
  EXPECT_EQ(VocabKindName(vocab.kind(3)), "UNK");
  EXPECT_EQ(VocabKindName(vocab.kind(4)), "EOS");
}

TEST(VocabTest, CountConservation) {
  const auto corpus = BoundaryCorpus();
  const Vocabulary vocab = Vocabulary::Build(corpus, 20);
  int64_t total = 0;
  for (const auto &seq : corpus) total += seq.tokens.size();
  int64_t sum = 0;
  for (TokenId id = 0; id < vocab.size(); ++id) {
    if (id != vocab.eos_id()) sum += vocab.count(id);
  }
  EXPECT_EQ(sum, total);
}

TEST(VocabTest, MinCountOneKeepsEverything) {
  const std::vector<SemSequence> corpus = {
      Seq("A#A0 dis:because B#A1", SequenceKind::kEntityCentered),
      Seq("C#A0", SequenceKind::kEntityCentered)};
  const Vocabulary vocab = Vocabulary::Build(corpus, 1);
  for (const char *t : {"A#A0", "dis:because", "B#A1", "C#A0"}) {
    EXPECT_TRUE(vocab.Find(t).has_value()) << t;
  }
  EXPECT_EQ(vocab.kind(*vocab.Find("A#A0")), VocabKind::kFrameArg);
  EXPECT_EQ(vocab.kind(*vocab.Find("dis:because")), VocabKind::kConn);
  EXPECT_EQ(vocab.MarkerIds(), std::vector<TokenId>{*vocab.Find("dis:because")});
  EXPECT_EQ(vocab.count(vocab.unk_id()), 0);
}

TEST(VocabTest, Errors) {
  EXPECT_THROW(Vocabulary::Build(std::vector<SemSequence>{}, 20), Error);
  EXPECT_THROW(Vocabulary::Build(BoundaryCorpus(), 0), Error);
}

TEST(EncodeTest, AppendsEosAndMapsUnknown) {
  const Vocabulary vocab = Vocabulary::Build(BoundaryCorpus(), 20);
  const auto known = vocab.Encode(Seq("common edge o"));
  ASSERT_EQ(known.size(), 4u);
  EXPECT_EQ(known.back(), vocab.eos_id());
  const auto unknown = vocab.Encode(Seq("common rare o"));
  ASSERT_EQ(unknown.size(), 4u);
  EXPECT_EQ(unknown[1], vocab.unk_id());
}

TEST(EncodeTest, DecodeInvertsEncodeOnRandomFixtures) {
  const std::vector<std::string> pool = {"A", "B#A0", "dis:so", "o", "C(up)"};
  std::mt19937_64 rng(7);
  std::vector<SemSequence> corpus;
  for (int i = 0; i < 50; ++i) {
    std::string text;
    const int length = 1 + static_cast<int>(rng() % 6);
    for (int t = 0; t < length; ++t) text += pool[rng() % pool.size()] + " ";
    corpus.push_back(Seq(text));
  }
  const Vocabulary vocab = Vocabulary::Build(corpus, 1);
  for (const auto &seq : corpus) {
    const auto ids = vocab.Encode(seq);
    ASSERT_EQ(ids.size(), seq.tokens.size() + 1);
    const auto decoded = vocab.Decode(std::span(ids).first(seq.tokens.size()));
    for (size_t t = 0; t < seq.tokens.size(); ++t) {
      EXPECT_EQ(decoded[t], seq.tokens[t].Render());
    }
  }
}

TEST(VocabTest, DeterministicAndSerializable) {
  const auto corpus = BoundaryCorpus();
  const Vocabulary a = Vocabulary::Build(corpus, 20);
  const Vocabulary b = Vocabulary::Build(corpus, 20);
  EXPECT_EQ(a.Serialize(), b.Serialize());
  const Vocabulary parsed = Vocabulary::Parse(a.Serialize());
  EXPECT_EQ(parsed.Serialize(), a.Serialize());
  EXPECT_EQ(parsed.unk_id(), a.unk_id());
  EXPECT_EQ(parsed.eos_id(), a.eos_id());
  EXPECT_EQ(parsed.corpus_checksum(), CorpusChecksum(corpus));
  EXPECT_EQ(a.Serialize().substr(0, 12), "# min_count=");
  const auto dir = testing::TempDir("vocab_io");
  a.Save((dir / "v.tsv").string());
  EXPECT_EQ(Vocabulary::Load((dir / "v.tsv").string()).Serialize(), a.Serialize());
}

TEST(CountTest, ParallelMatchesSerial) {
  std::vector<SemSequence> corpus;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    std::string text;
    for (int t = 0; t < 12; ++t) text += "F" + std::to_string(rng() % 30) + " ";
    corpus.push_back(Seq(text));
  }
  const TokenCounts serial = CountTokensSerial(corpus);
  for (int threads : {1, 2, 4}) {
    SetThreads(threads);
    const TokenCounts parallel = CountTokens(corpus);
    EXPECT_EQ(parallel.counts, serial.counts);
    EXPECT_EQ(parallel.kinds, serial.kinds);
    EXPECT_EQ(parallel.total, serial.total);
    EXPECT_EQ(parallel.sequences, serial.sequences);
  }
}

}  // namespace
}  // namespace semlm
