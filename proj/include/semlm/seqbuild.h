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

#ifndef SEMLM_SEQBUILD_H_
#define SEMLM_SEQBUILD_H_

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semlm/annotations.h"
#include "semlm/unitgen.h"

namespace semlm {

enum class SemTokenKind { kFrame, kFrameArg, kDisc, kPeriod, kUnk, kEos };

inline constexpr std::string_view kPeriodText = "o";
inline constexpr std::string_view kUnkText = "<unk>";
inline constexpr std::string_view kEosText = "</s>";
inline constexpr std::string_view kDiscPrefix = "dis:";

struct SemToken {
  SemTokenKind kind = SemTokenKind::kFrame;
  // Rendered frame symbol (kFrame, kFrameArg) or marker (kDisc).
  std::string text;
  // Argument label (kFrameArg only).
  std::string label;

  static SemToken Frame(std::string symbol) {
    return {SemTokenKind::kFrame, std::move(symbol), {}};
  }
  static SemToken FrameArg(std::string symbol, std::string label) {
    return {SemTokenKind::kFrameArg, std::move(symbol), std::move(label)};
  }
  static SemToken Disc(std::string marker) {
    return {SemTokenKind::kDisc, std::move(marker), {}};
  }
  static SemToken Period() { return {SemTokenKind::kPeriod, {}, {}}; }

  // "Frame", "Frame#Arg", "dis:<marker>" (spaces as '_'), "o".
  std::string Render() const;
  static SemToken Parse(std::string_view rendered);

  bool operator==(const SemToken &other) const = default;
};

enum class SequenceKind { kFrameChain, kEntityCentered };

std::string_view SequenceKindName(SequenceKind kind);  // "FC" / "EC"

struct SemSequence {
  std::string doc_id;
  SequenceKind kind = SequenceKind::kFrameChain;
  std::optional<int> chain_id;
  std::vector<SemToken> tokens;

  bool operator==(const SemSequence &other) const = default;
};

struct SequenceOptions {
  bool discourse = true;
};

// True iff arg1 and arg2 of the connective each contain at least one of the
// placed predicate indices.
bool IsFrameRelated(const Connective &conn, std::span<const int> placed);

// The single frame-chain sequence of a document, or nullopt when the
// document has no frames.
std::optional<SemSequence> BuildFrameChain(const AnnotatedDocument &doc,
                                           const DocumentUnits &units,
                                           const SequenceOptions &options = {});

// One entity-centered sequence per chain with at least two mentions aligned
// to frame arguments.
std::vector<SemSequence> BuildEntityChains(const AnnotatedDocument &doc,
                                           const DocumentUnits &units,
                                           const SequenceOptions &options = {});

// Sequence dump: "# doc_id=<id> kind=<FC|EC>[ chain_id=<n>]" header, then the
// space-separated tokens on the next line.
void WriteSequences(std::ostream &out, std::span<const SemSequence> sequences);
std::vector<SemSequence> ReadSequences(std::istream &in);
std::vector<SemSequence> ReadSequencesFile(const std::string &path);

}  // namespace semlm

#endif  // SEMLM_SEQBUILD_H_
