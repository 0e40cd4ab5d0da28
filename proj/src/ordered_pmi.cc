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

#include "semlm/ordered_pmi.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "semlm/serialize.h"

namespace semlm {
namespace {

constexpr char kMagic[] = "SEMLMOP1";

uint64_t PairKey(TokenId a, TokenId b) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
         static_cast<uint32_t>(b);
}

}  // namespace

int64_t OrderedPmiModel::PairCount(TokenId a, TokenId b) const {
  auto it = pairs.find(PairKey(a, b));
  return it == pairs.end() ? 0 : it->second;
}

double OrderedPmiModel::Score(TokenId a, TokenId b) const {
  const double joint = static_cast<double>(PairCount(a, b)) + alpha;
  const double ca = static_cast<double>(counts[a]) + alpha;
  const double cb = static_cast<double>(counts[b]) + alpha;
  return std::log(joint * static_cast<double>(total) / (ca * cb));
}

OrderedPmiModel TrainOrderedPmi(const EncodedCorpus &corpus, int vocab_size,
                                TokenId eos, double alpha) {
  if (corpus.empty()) throw Error("cannot train ordered PMI on an empty corpus");
  if (!(alpha > 0.0)) throw Error("ordered PMI smoothing must be positive");
  OrderedPmiModel model;
  model.vocab_size = vocab_size;
  model.eos = eos;
  model.alpha = alpha;
  model.counts.assign(vocab_size, 0);
  std::vector<TokenId> kept;
  for (const EncodedSequence &seq : corpus) {
    kept.clear();
    for (TokenId id : seq) {
      if (id < 0 || id >= vocab_size) throw Error("token id out of range");
      if (id != eos) kept.push_back(id);
    }
    for (size_t i = 0; i < kept.size(); ++i) {
      ++model.counts[kept[i]];
      ++model.total;
      for (size_t j = i + 1; j < kept.size(); ++j) {
        ++model.pairs[PairKey(kept[i], kept[j])];
      }
    }
  }
  if (model.total == 0) throw Error("ordered PMI corpus has no tokens");
  return model;
}

void OrderedPmiScorer::ScoreGap(std::span<const TokenId> seq, size_t gap,
                                std::span<double> scores) const {
  std::fill(scores.begin(), scores.end(), 0.0);
  for (size_t t = 0; t < seq.size(); ++t) {
    const TokenId other = seq[t];
    if (t == gap || other == model_.eos) continue;
    for (TokenId w = 0; w < model_.vocab_size; ++w) {
      scores[w] += t < gap ? model_.Score(other, w) : model_.Score(w, other);
    }
  }
}

std::vector<TokenId> OpPredict(const OrderedPmiModel &model,
                               const ClozeInstance &instance,
                               std::span<const int64_t> tie_counts) {
  return RankCandidates(OrderedPmiScorer(model), instance, tie_counts);
}

void SaveOrderedPmiModel(const OrderedPmiModel &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  BinaryWriter w(out);
  out.write(kMagic, 8);
  w.Write<int32_t>(model.vocab_size);
  w.Write<int32_t>(model.eos);
  w.Write<double>(model.alpha);
  w.Write<int64_t>(model.total);
  w.WriteVector(model.counts);
  std::vector<std::pair<uint64_t, int64_t>> pairs(model.pairs.begin(),
                                                  model.pairs.end());
  std::sort(pairs.begin(), pairs.end());
  w.Write<uint64_t>(pairs.size());
  for (const auto &[key, count] : pairs) {
    w.Write<uint64_t>(key);
    w.Write<int64_t>(count);
  }
  if (!out) throw Error("failed writing " + path);
}

OrderedPmiModel LoadOrderedPmiModel(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string(magic, 8) != kMagic) {
    throw Error(path + ": not an ordered PMI model");
  }
  BinaryReader r(in);
  OrderedPmiModel model;
  model.vocab_size = r.Read<int32_t>();
  model.eos = r.Read<int32_t>();
  model.alpha = r.Read<double>();
  model.total = r.Read<int64_t>();
  model.counts = r.ReadVector<int64_t>();
  const auto n = r.Read<uint64_t>();
  for (uint64_t i = 0; i < n; ++i) {
    const auto key = r.Read<uint64_t>();
    model.pairs[key] = r.Read<int64_t>();
  }
  if (static_cast<int>(model.counts.size()) != model.vocab_size) {
    throw Error(path + ": corrupt ordered PMI model");
  }
  return model;
}

}  // namespace semlm
