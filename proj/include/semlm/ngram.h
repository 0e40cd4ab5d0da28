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

#ifndef SEMLM_NGRAM_H_
#define SEMLM_NGRAM_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "semlm/language_model.h"

namespace semlm {

inline constexpr int kMaxNGramOrder = 3;

struct NGramOptions {
  int order = 3;
  // Fixed discount per level (index 0 = unigram). Estimated when unset.
  std::optional<std::array<double, kMaxNGramOrder>> discounts;
};

// Interpolated Kneser-Ney model of order 1-3 without sentence-start padding.
//
// Level m < n uses continuation counts: the number of distinct left
// extensions of an m-gram, where an occurrence at the start of a sequence
// counts as one extra extension type. The top level uses raw counts. Each
// level subtracts a single discount D = n1 / (n1 + 2 n2) and hands the freed
// mass to the level below; the unigram level hands it to the uniform
// distribution over the vocabulary, so every token has positive probability.
class NGramModel : public LanguageModel {
 public:
  NGramModel() = default;

  static NGramModel Train(const EncodedCorpus &corpus, int vocab_size,
                          const NGramOptions &options = {});

  int vocab_size() const override { return vocab_size_; }
  int context_size() const override { return order_ - 1; }
  std::string name() const override;
  double LogProb(std::span<const TokenId> history,
                 TokenId token) const override;

  // Interpolated KN probability; histories longer than order-1 are truncated
  // to their most recent tokens, shorter ones use the matching lower level.
  double CondProb(std::span<const TokenId> history, TokenId token) const;

  int order() const { return order_; }
  double discount(int level) const { return discounts_.at(level - 1); }
  // Raw occurrence count of an n-gram of length 1..order.
  int64_t RawCount(std::span<const TokenId> ngram) const;
  // Count used by the given level (continuation count below the top level).
  int64_t LevelCount(std::span<const TokenId> ngram) const;

  // Versioned binary format.
  void SaveBinary(std::ostream &out) const;
  // ARPA-style text layout with exact counts and discounts.
  void SaveText(std::ostream &out) const;
  static NGramModel Load(std::istream &in);
  void Save(const std::string &path, bool text) const;
  static NGramModel LoadFile(const std::string &path);

  bool operator==(const NGramModel &other) const;

 private:
  struct Aggregate {
    int64_t total = 0;  // sum of level counts over continuations
    int64_t types = 0;  // number of continuations with nonzero count
  };
  using Table = std::unordered_map<uint64_t, int64_t>;

  static uint64_t Pack(std::span<const TokenId> ids);
  void Finalize(const std::optional<std::array<double, kMaxNGramOrder>> &fixed);
  double LevelProb(int level, std::span<const TokenId> history,
                   TokenId token) const;

  int order_ = 0;
  int vocab_size_ = 0;
  std::array<double, kMaxNGramOrder> discounts_{};
  std::array<Table, kMaxNGramOrder> raw_;
  std::array<Table, kMaxNGramOrder> level_;
  // Per-level aggregates keyed by packed history (level 1 uses key 0).
  std::array<std::unordered_map<uint64_t, Aggregate>, kMaxNGramOrder> agg_;
};

// Ordered model names used across the toolkit.
inline const char *NGramModelName(int order) {
  return order == 1 ? "uni" : order == 2 ? "bg" : "tri";
}

}  // namespace semlm

#endif  // SEMLM_NGRAM_H_
