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

#include "semlm/unitgen.h"

#include <set>

#include "gtest/gtest.h"
#include "test_util.h"

namespace semlm {
namespace {

using testing::DocBuilder;

TEST(MappingTest, PlacingFromBundledTable) {
  const MappingTable &table = MappingTable::Bundled();
  EXPECT_EQ(MapToFrameNet("place", "place.01", "9.1-2", table), "Placing");
  EXPECT_EQ(MapToFrameNet("put", "put.01", "9.1-2", table), "Placing");
}

TEST(MappingTest, UnmappedKeepsPropBankSense) {
  const MappingTable &table = MappingTable::Bundled();
  EXPECT_EQ(MapToFrameNet("sneeze", "sneeze.01", std::nullopt, table),
            "sneeze.01");
  EXPECT_EQ(MapToFrameNet("sneeze", "sneeze.01", "40.1-1", table), "sneeze.01");
  EXPECT_EQ(MapToFrameNet("place", "place.01", "99.9", table), "place.01");
}

TEST(MappingTest, ParseAndErrors) {
  const MappingTable table =
      MappingTable::Parse("# comment\nrun\t51.3.2\tSelf_motion\n\n");
  EXPECT_EQ(table.size(), 1u);
  EXPECT_EQ(table.Lookup("run", "51.3.2"), "Self_motion");
  EXPECT_FALSE(table.Lookup("run", "51.3").has_value());
  EXPECT_THROW(MappingTable::Parse("run\t51.3.2\n"), Error);
  EXPECT_THROW(MappingTable::FromFile("/nonexistent/mapping.tsv"), Error);
}

TEST(MappingTest, PureFunction) {
  const MappingTable &table = MappingTable::Bundled();
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(MapToFrameNet("give", "give.01", "13.1-1", table), "Giving");
  }
}

TEST(AugmentTest, Particle) {
  DocBuilder b("d");
  const int s = b.Sentence("They/PRP took/VBD over/RP the/DT firm/NN ./.");
  b.Frame(s + 1, "take", "take.01", std::nullopt);
  const FrameComponent c =
      AugmentPredicate(b.doc().frames[0], b.doc(), "take.01");
  EXPECT_EQ(c.Render(), "take.01(over)");
}

TEST(AugmentTest, SecondaryPredicate) {
  DocBuilder b("d");
  const int s = b.Sentence("She/PRP is/VBZ very/RB happy/JJ ./.");
  b.Frame(s + 1, "be", "be.01", std::nullopt, {{"AM-PRD", s + 2, s + 3}});
  EXPECT_EQ(AugmentPredicate(b.doc().frames[0], b.doc(), "be.01").Render(),
            "be.01(happy)");
}

TEST(AugmentTest, Negation) {
  DocBuilder b("d");
  const int s = b.Sentence("I/PRP do/VBP not/RB like/VB it/PRP ./.");
  b.Frame(s + 3, "like", "like.01", std::nullopt, {{"AM-NEG", s + 2, s + 2}});
  EXPECT_EQ(AugmentPredicate(b.doc().frames[0], b.doc(), "like.01").Render(),
            "like.01(not)");
}

TEST(AugmentTest, AllThreeCoexist) {
  DocBuilder b("d");
  const int s = b.Sentence("He/PRP did/VBD not/RB end/VB up/RP rich/JJ ./.");
  b.Frame(s + 3, "end", "end.01", std::nullopt,
          {{"AM-NEG", s + 2, s + 2}, {"AM-PRD", s + 5, s + 5}});
  EXPECT_EQ(AugmentPredicate(b.doc().frames[0], b.doc(), "end.01").Render(),
            "end.01(not)(up)(rich)");
}

TEST(AugmentTest, NeverFiresWithoutTrigger) {
  DocBuilder b("d");
  const int s = b.Sentence("They/PRP took/VBD the/DT firm/NN over/RP ./.");
  const int t = b.Sentence("in/IN town/NN ./.");
  b.Frame(s + 1, "take", "take.01", std::nullopt, {{"A1", s + 2, s + 3}});
  b.Frame(t - 1, "be", "be.01", std::nullopt);
  const FrameComponent c =
      AugmentPredicate(b.doc().frames[0], b.doc(), "take.01");
  EXPECT_FALSE(c.particle.has_value());
  EXPECT_FALSE(c.secondary.has_value());
  EXPECT_FALSE(c.negated);
  // The next token is IN but sits in the following sentence.
  const FrameComponent d = AugmentPredicate(b.doc().frames[1], b.doc(), "be.01");
  EXPECT_FALSE(d.particle.has_value());
}

TEST(RenderTest, InjectiveOverAugmentationStates) {
  const std::vector<std::optional<std::string>> particles = {std::nullopt, "up",
                                                             "over"};
  const std::vector<std::optional<std::string>> secondaries = {std::nullopt,
                                                               "happy", "raw"};
  std::set<std::string> seen;
  int states = 0;
  for (const char *base : {"take.01", "Placing"}) {
    for (bool negated : {false, true}) {
      for (const auto &particle : particles) {
        for (const auto &secondary : secondaries) {
          FrameComponent c{base, particle, secondary, negated};
          seen.insert(FrameSymbol::Of({c}).rendered);
          ++states;
        }
      }
    }
  }
  EXPECT_EQ(static_cast<int>(seen.size()), states);
}

TEST(RenderTest, SymbolsAreWhitespaceFree) {
  FrameComponent c{"Self motion", "away from", std::nullopt, false};
  EXPECT_EQ(c.Render(), "Self_motion(away_from)");
}

std::vector<PlacedComponent> Placed(
    std::vector<std::pair<std::string, int>> items, int sentence = 0) {
  std::vector<PlacedComponent> out;
  for (auto &[base, index] : items) {
    out.push_back({FrameComponent{base, {}, {}, false}, index, sentence});
  }
  return out;
}

TEST(CompoundTest, AdjacentWithOneTokenBetween) {
  auto frames = CompoundFrames(Placed({{"eat.01", 5}, {"drink.01", 7}}));
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].symbol.rendered, "eat.01-drink.01");
  EXPECT_EQ(frames[0].anchor, 5);
  frames = CompoundFrames(Placed({{"decide.01", 3}, {"buy.01", 5}}));
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0].symbol.rendered, "decide.01-buy.01");
}

TEST(CompoundTest, WideGapStaysSeparate) {
  const auto frames = CompoundFrames(Placed({{"a.01", 1}, {"b.01", 5}}));
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].symbol.rendered, "a.01");
  EXPECT_EQ(frames[1].symbol.rendered, "b.01");
}

TEST(CompoundTest, TransitiveMergeAndCountIdentity) {
  const auto input = Placed(
      {{"a.01", 0}, {"b.01", 2}, {"c.01", 3}, {"d.01", 9}, {"e.01", 20}, {"f.01", 21}});
  const auto frames = CompoundFrames(input);
  ASSERT_EQ(frames.size(), 3u);
  EXPECT_EQ(frames[0].symbol.rendered, "a.01-b.01-c.01");
  EXPECT_EQ(frames[1].symbol.rendered, "d.01");
  EXPECT_EQ(frames[2].symbol.rendered, "e.01-f.01");
  size_t merged_pairs = 0;
  std::vector<size_t> order;
  for (const auto &f : frames) {
    merged_pairs += f.members.size() - 1;
    order.insert(order.end(), f.members.begin(), f.members.end());
  }
  EXPECT_EQ(frames.size() + merged_pairs, input.size());
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
}

TEST(CompoundTest, SentenceBoundaryBlocksMerge) {
  auto input = Placed({{"a.01", 4}, {"b.01", 6}});
  input[1].sentence_index = 1;
  EXPECT_EQ(CompoundFrames(input).size(), 2u);
}

TEST(AlignTest, HeadInsideSpan) {
  PredicateFrame say{1, "say", "say.01", std::nullopt, {{"A0", 3, 5}}};
  const FrameSymbol symbol = FrameSymbol::Of({{"say.01", {}, {}, false}});
  const std::vector<FrameRef> frames = {{&say, &symbol}};
  const auto match = AlignMentionToArgument({4, 4, 4, 0}, frames);
  ASSERT_TRUE(match.has_value());
  EXPECT_EQ(match->frame, 0u);
  EXPECT_EQ(match->label, "A0");
  EXPECT_FALSE(AlignMentionToArgument({7, 7, 7, 0}, frames).has_value());
}

TEST(AlignTest, FirstFrameWinsThenSmallestSpan) {
  PredicateFrame first{2, "a", "a.01", std::nullopt,
                       {{"A1", 0, 9}, {"A0", 3, 4}}};
  PredicateFrame second{6, "b", "b.01", std::nullopt, {{"A0", 4, 4}}};
  const FrameSymbol sa = FrameSymbol::Of({{"a.01", {}, {}, false}});
  const FrameSymbol sb = FrameSymbol::Of({{"b.01", {}, {}, false}});
  const std::vector<FrameRef> frames = {{&first, &sa}, {&second, &sb}};
  const auto match = AlignMentionToArgument({4, 4, 4, 0}, frames);
  ASSERT_TRUE(match.has_value());
  EXPECT_EQ(match->frame, 0u);
  EXPECT_EQ(match->label, "A0");
}

TEST(GenerateUnitsTest, MappingAblation) {
  DocBuilder b("d");
  const int s = b.Sentence("She/PRP put/VBD it/PRP away/RP ./.");
  b.Frame(s + 1, "put", "put.01", "9.1-2", {{"A0", s, s}});
  const DocumentUnits mapped = GenerateUnits(b.doc(), MappingTable::Bundled());
  ASSERT_EQ(mapped.compounds.size(), 1u);
  EXPECT_EQ(mapped.compounds[0].symbol.rendered, "Placing");
  const DocumentUnits raw =
      GenerateUnits(b.doc(), MappingTable::Bundled(), {.framenet_mapping = false});
  EXPECT_EQ(raw.compounds[0].symbol.rendered, "put.01");
  EXPECT_EQ(raw.compound_of_frame, std::vector<size_t>{0});
}

}  // namespace
}  // namespace semlm
