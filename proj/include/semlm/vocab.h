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

#ifndef SEMLM_VOCAB_H_
#define SEMLM_VOCAB_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semlm/common.h"
#include "semlm/seqbuild.h"

namespace semlm {

enum class VocabKind { kFrameSense, kFrameArg, kConn, kPeriod, kUnk, kEos };

std::string_view VocabKindName(VocabKind kind);  // F-Sen, F-Arg, Conn, ...
VocabKind VocabKindOf(SemTokenKind kind);

// Threshold below which tokens are folded into UNK.
inline constexpr int kDefaultMinCount = 20;

// Rendered token -> corpus frequency, plus the kind of each token.
struct TokenCounts {
  std::unordered_map<std::string, int64_t> counts;
  std::unordered_map<std::string, VocabKind> kinds;
  int64_t total = 0;
  int64_t sequences = 0;

  void Merge(const TokenCounts &other);
};

// Reference single-threaded counter.
TokenCounts CountTokensSerial(std::span<const SemSequence> corpus);
// Shards sequences over OpenMP threads and merges per-thread tables. Equal to
// CountTokensSerial for any thread count.
TokenCounts CountTokens(std::span<const SemSequence> corpus);

// Dense token <-> id bijection. Regular tokens take ids 0..n-1 by descending
// count (ties lexicographic); UNK and EOS follow.
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary Build(std::span<const SemSequence> corpus,
                          int min_count = kDefaultMinCount);

  int size() const { return static_cast<int>(tokens_.size()); }
  TokenId unk_id() const { return unk_id_; }
  TokenId eos_id() const { return eos_id_; }
  int min_count() const { return min_count_; }
  const std::string &corpus_checksum() const { return corpus_checksum_; }

  std::optional<TokenId> Find(std::string_view token) const;
  // Find(), falling back to UNK.
  TokenId IdOf(std::string_view token) const;
  const std::string &token(TokenId id) const { return tokens_.at(id); }
  int64_t count(TokenId id) const { return counts_.at(id); }
  VocabKind kind(TokenId id) const { return kinds_.at(id); }
  const std::vector<int64_t> &counts() const { return counts_; }

  // Ids of all discourse-marker tokens, ascending.
  std::vector<TokenId> MarkerIds() const;

  // Appends EOS; out-of-vocabulary tokens become UNK.
  std::vector<TokenId> Encode(const SemSequence &seq) const;
  std::vector<std::string> Decode(std::span<const TokenId> ids) const;

  // TSV: "# min_count=<n> checksum=<hex>" then id<TAB>token<TAB>count<TAB>kind.
  void Save(const std::string &path) const;
  std::string Serialize() const;
  static Vocabulary Load(const std::string &path);
  static Vocabulary Parse(std::string_view text);

 private:
  void Add(std::string token, int64_t count, VocabKind kind);

  std::vector<std::string> tokens_;
  std::vector<int64_t> counts_;
  std::vector<VocabKind> kinds_;
  std::unordered_map<std::string, TokenId> index_;
  TokenId unk_id_ = -1;
  TokenId eos_id_ = -1;
  int min_count_ = kDefaultMinCount;
  std::string corpus_checksum_;
};

inline Vocabulary BuildVocabulary(std::span<const SemSequence> corpus,
                                  int min_count = kDefaultMinCount) {
  return Vocabulary::Build(corpus, min_count);
}

std::vector<std::vector<TokenId>> EncodeCorpus(
    std::span<const SemSequence> corpus, const Vocabulary &vocab);

// Checksum of the canonical sequence dump of a corpus.
std::string CorpusChecksum(std::span<const SemSequence> corpus);

}  // namespace semlm

#endif  // SEMLM_VOCAB_H_
