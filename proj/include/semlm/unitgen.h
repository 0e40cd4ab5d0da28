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

#ifndef SEMLM_UNITGEN_H_
#define SEMLM_UNITGEN_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semlm/annotations.h"

namespace semlm {

// One (possibly augmented) predicate. Renders as
//   base[(not)][(particle)][(secondary)]
// e.g. "take.01(over)", "be.01(happy)", "want.01(not)".
struct FrameComponent {
  std::string base;
  std::optional<std::string> particle;
  std::optional<std::string> secondary;
  bool negated = false;

  std::string Render() const;
  bool operator==(const FrameComponent &other) const = default;
};

// A frame vocabulary atom: one component, or a compound of several predicates
// in textual order joined with '-' ("decide.01-buy.01").
struct FrameSymbol {
  std::vector<FrameComponent> components;
  std::string rendered;

  static FrameSymbol Of(std::vector<FrameComponent> components);
  bool compound() const { return components.size() > 1; }
  bool operator==(const FrameSymbol &other) const {
    return components == other.components;
  }
};

// Deterministic (lemma, VerbNet sense) -> FrameNet frame table. Partial.
class MappingTable {
 public:
  MappingTable() = default;

  // TSV: lemma<TAB>vn_sense<TAB>framenet_frame; '#' lines are comments.
  static MappingTable Parse(std::string_view text);
  static MappingTable FromFile(const std::string &path);
  static const MappingTable &Bundled();

  void Add(std::string lemma, std::string vn_sense, std::string frame);
  std::optional<std::string> Lookup(std::string_view lemma,
                                    std::string_view vn_sense) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::string, std::less<>>
      entries_;
};

// FrameNet frame for (lemma, vn_sense) if the table has it, otherwise the
// PropBank sense unchanged.
std::string MapToFrameNet(std::string_view lemma, std::string_view pb_sense,
                          const std::optional<std::string> &vn_sense,
                          const MappingTable &table);

// Applies the particle, secondary-predicate (AM-PRD) and negation (AM-NEG)
// augmentations. They are independent and may all fire.
FrameComponent AugmentPredicate(const PredicateFrame &frame,
                                const AnnotatedDocument &doc,
                                std::string mapped_base);

struct PlacedComponent {
  FrameComponent component;
  int predicate_index = 0;
  int sentence_index = 0;
};

struct CompoundFrame {
  FrameSymbol symbol;
  // Indices into the CompoundFrames input, ascending.
  std::vector<size_t> members;
  // Predicate index of the first member.
  int anchor = 0;
  int sentence_index = 0;
};

// Maximum predicate index difference for two predicates to compound, i.e. at
// most one intervening token.
inline constexpr int kCompoundMaxGap = 2;

// Merges runs of predicates within kCompoundMaxGap of their left neighbour
// and in the same sentence. Input must be ordered by predicate_index.
std::vector<CompoundFrame> CompoundFrames(
    std::span<const PlacedComponent> components);

struct FrameRef {
  const PredicateFrame *frame = nullptr;
  const FrameSymbol *symbol = nullptr;
};

struct ArgumentMatch {
  size_t frame = 0;  // index into the FrameRef list
  std::string label;
};

// First frame (in list order) with an argument span containing the mention
// head; within that frame the smallest containing span wins, then the first.
std::optional<ArgumentMatch> AlignMentionToArgument(
    const Mention &mention, std::span<const FrameRef> frames);

struct UnitOptions {
  bool framenet_mapping = true;
};

// All semantic units of one document: compounded symbols plus the compound
// each frame belongs to.
struct DocumentUnits {
  std::vector<CompoundFrame> compounds;
  std::vector<size_t> compound_of_frame;  // parallel to doc.frames
};

DocumentUnits GenerateUnits(const AnnotatedDocument &doc,
                            const MappingTable &table,
                            const UnitOptions &options = {});

}  // namespace semlm

#endif  // SEMLM_UNITGEN_H_
