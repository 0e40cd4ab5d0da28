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

#include <algorithm>
#include <fstream>
#include <sstream>

#include "semlm/parallel.h"

namespace semlm {

std::string_view VocabKindName(VocabKind kind) {
  switch (kind) {
    case VocabKind::kFrameSense: return "F-Sen";
    case VocabKind::kFrameArg: return "F-Arg";
    case VocabKind::kConn: return "Conn";
    case VocabKind::kPeriod: return "Per";
    case VocabKind::kUnk: return "UNK";
    case VocabKind::kEos: return "EOS";
  }
  return "?";
}

namespace {

VocabKind ParseVocabKind(std::string_view name) {
  for (VocabKind kind : {VocabKind::kFrameSense, VocabKind::kFrameArg,
                         VocabKind::kConn, VocabKind::kPeriod, VocabKind::kUnk,
                         VocabKind::kEos}) {
    if (VocabKindName(kind) == name) return kind;
  }
  throw Error("unknown vocabulary kind " + std::string(name));
}

void CountInto(const SemSequence &seq, TokenCounts *counts) {
  for (const SemToken &token : seq.tokens) {
    std::string rendered = token.Render();
    counts->kinds.emplace(rendered, VocabKindOf(token.kind));
    ++counts->counts[std::move(rendered)];
    ++counts->total;
  }
  ++counts->sequences;
}

}  // namespace

VocabKind VocabKindOf(SemTokenKind kind) {
  switch (kind) {
    case SemTokenKind::kFrame: return VocabKind::kFrameSense;
    case SemTokenKind::kFrameArg: return VocabKind::kFrameArg;
    case SemTokenKind::kDisc: return VocabKind::kConn;
    case SemTokenKind::kPeriod: return VocabKind::kPeriod;
    case SemTokenKind::kUnk: return VocabKind::kUnk;
    case SemTokenKind::kEos: return VocabKind::kEos;
  }
  return VocabKind::kFrameSense;
}

void TokenCounts::Merge(const TokenCounts &other) {
  for (const auto &[token, count] : other.counts) counts[token] += count;
  for (const auto &[token, kind] : other.kinds) kinds.emplace(token, kind);
  total += other.total;
  sequences += other.sequences;
}

TokenCounts CountTokensSerial(std::span<const SemSequence> corpus) {
  TokenCounts counts;
  for (const SemSequence &seq : corpus) CountInto(seq, &counts);
  return counts;
}

TokenCounts CountTokens(std::span<const SemSequence> corpus) {
  const int shards = std::max(1, MaxThreads());
  std::vector<TokenCounts> partial(shards);
  const int64_t n = static_cast<int64_t>(corpus.size());
#pragma omp parallel for num_threads(shards) schedule(static)
  for (int shard = 0; shard < shards; ++shard) {
    const int64_t begin = n * shard / shards;
    const int64_t end = n * (shard + 1) / shards;
    for (int64_t i = begin; i < end; ++i) CountInto(corpus[i], &partial[shard]);
  }
  TokenCounts merged;
  for (const TokenCounts &part : partial) merged.Merge(part);
  return merged;
}

void Vocabulary::Add(std::string token, int64_t count, VocabKind kind) {
  const auto id = static_cast<TokenId>(tokens_.size());
  if (!index_.emplace(token, id).second) {
    throw Error("duplicate vocabulary token " + token);
  }
  tokens_.push_back(std::move(token));
  counts_.push_back(count);
  kinds_.push_back(kind);
}

Vocabulary Vocabulary::Build(std::span<const SemSequence> corpus,
                             int min_count) {
  if (corpus.empty()) throw Error("cannot build a vocabulary from an empty corpus");
  if (min_count < 1) throw Error("min_count must be at least 1");

  TokenCounts counts = CountTokens(corpus);
  std::vector<std::pair<std::string, int64_t>> kept;
  int64_t unk = 0;
  for (const auto &[token, count] : counts.counts) {
    if (token == kUnkText || token == kEosText) continue;
    if (count >= min_count) {
      kept.emplace_back(token, count);
    } else {
      unk += count;
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto &a, const auto &b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.min_count_ = min_count;
  vocab.corpus_checksum_ = CorpusChecksum(corpus);
  for (auto &[token, count] : kept) {
    VocabKind kind = counts.kinds.at(token);
    vocab.Add(std::move(token), count, kind);
  }
  auto special = [&counts](std::string_view text) {
    auto it = counts.counts.find(std::string(text));
    return it == counts.counts.end() ? int64_t{0} : it->second;
  };
  vocab.unk_id_ = vocab.size();
  vocab.Add(std::string(kUnkText), unk + special(kUnkText), VocabKind::kUnk);
  vocab.eos_id_ = vocab.size();
  vocab.Add(std::string(kEosText), counts.sequences, VocabKind::kEos);
  return vocab;
}

std::optional<TokenId> Vocabulary::Find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::IdOf(std::string_view token) const {
  return Find(token).value_or(unk_id_);
}

std::vector<TokenId> Vocabulary::MarkerIds() const {
  std::vector<TokenId> ids;
  for (TokenId id = 0; id < size(); ++id) {
    if (kinds_[id] == VocabKind::kConn) ids.push_back(id);
  }
  return ids;
}

std::vector<TokenId> Vocabulary::Encode(const SemSequence &seq) const {
  std::vector<TokenId> ids;
  ids.reserve(seq.tokens.size() + 1);
  for (const SemToken &token : seq.tokens) ids.push_back(IdOf(token.Render()));
  ids.push_back(eos_id_);
  return ids;
}

std::vector<std::string> Vocabulary::Decode(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(token(id));
  return out;
}

std::string Vocabulary::Serialize() const {
  std::ostringstream out;
  out << "# min_count=" << min_count_ << " checksum=" << corpus_checksum_
      << '\n';
  for (TokenId id = 0; id < size(); ++id) {
    out << id << '\t' << tokens_[id] << '\t' << counts_[id] << '\t'
        << VocabKindName(kinds_[id]) << '\n';
  }
  return out.str();
}

void Vocabulary::Save(const std::string &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << Serialize();
  if (!out) throw Error("failed writing " + path);
}

Vocabulary Vocabulary::Parse(std::string_view text) {
  Vocabulary vocab;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream fields(line.substr(1));
      std::string field;
      while (fields >> field) {
        if (field.starts_with("min_count=")) {
          vocab.min_count_ = std::stoi(field.substr(10));
        } else if (field.starts_with("checksum=")) {
          vocab.corpus_checksum_ = field.substr(9);
        }
      }
      continue;
    }
    std::vector<std::string> cols;
    std::istringstream row(line);
    std::string col;
    while (std::getline(row, col, '\t')) cols.push_back(col);
    if (cols.size() != 4 || std::stoi(cols[0]) != vocab.size()) {
      throw Error("vocabulary line " + std::to_string(line_number) +
                  ": expected dense id<TAB>token<TAB>count<TAB>kind");
    }
    VocabKind kind = ParseVocabKind(cols[3]);
    if (kind == VocabKind::kUnk) vocab.unk_id_ = vocab.size();
    if (kind == VocabKind::kEos) vocab.eos_id_ = vocab.size();
    vocab.Add(cols[1], std::stoll(cols[2]), kind);
  }
  if (vocab.unk_id_ < 0 || vocab.eos_id_ < 0) {
    throw Error("vocabulary lacks UNK or EOS");
  }
  return vocab;
}

Vocabulary Vocabulary::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

std::vector<std::vector<TokenId>> EncodeCorpus(
    std::span<const SemSequence> corpus, const Vocabulary &vocab) {
  std::vector<std::vector<TokenId>> out;
  out.reserve(corpus.size());
  for (const SemSequence &seq : corpus) out.push_back(vocab.Encode(seq));
  return out;
}

std::string CorpusChecksum(std::span<const SemSequence> corpus) {
  std::ostringstream dump;
  WriteSequences(dump, corpus);
  return ChecksumOf(dump.str());
}

}  // namespace semlm
