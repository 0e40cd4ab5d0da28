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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "semlm/serialize.h"

namespace semlm {

namespace {

constexpr int kIdBits = 21;
constexpr char kBinaryMagic[8] = {'S', 'E', 'M', 'L', 'M', 'N', 'G', '1'};
constexpr int kFormatVersion = 1;
constexpr double kFallbackDiscount = 0.5;

std::vector<TokenId> Unpack(uint64_t key, int length) {
  std::vector<TokenId> ids(length);
  for (int i = length - 1; i >= 0; --i) {
    ids[i] = static_cast<TokenId>(key & ((1u << kIdBits) - 1));
    key >>= kIdBits;
  }
  return ids;
}

}  // namespace

uint64_t NGramModel::Pack(std::span<const TokenId> ids) {
  uint64_t key = 0;
  for (TokenId id : ids) key = (key << kIdBits) | static_cast<uint64_t>(id);
  return key;
}

NGramModel NGramModel::Train(const EncodedCorpus &corpus, int vocab_size,
                             const NGramOptions &options) {
  if (options.order < 1 || options.order > kMaxNGramOrder) {
    throw Error("n-gram order must be 1, 2 or 3 (got " +
                std::to_string(options.order) + ")");
  }
  if (corpus.empty()) throw Error("cannot train an n-gram model on an empty corpus");
  if (vocab_size < 1 || vocab_size >= (1 << kIdBits)) {
    throw Error("vocabulary size out of range for the n-gram model");
  }

  NGramModel model;
  model.order_ = options.order;
  model.vocab_size_ = vocab_size;
  const int n = options.order;

  // Left-extension types per lower-order n-gram; -1 stands for the sequence
  // start.
  std::array<std::unordered_map<uint64_t, std::set<TokenId>>, kMaxNGramOrder>
      extensions;
  for (const EncodedSequence &seq : corpus) {
    std::span<const TokenId> ids(seq);
    for (TokenId id : ids) {
      if (id < 0 || id >= vocab_size) throw Error("token id out of vocabulary");
    }
    for (size_t t = 0; t < ids.size(); ++t) {
      for (int m = 1; m <= n && static_cast<size_t>(m) <= t + 1; ++m) {
        auto gram = ids.subspan(t + 1 - m, m);
        ++model.raw_[m - 1][Pack(gram)];
        if (m < n) {
          const TokenId left = t + 1 == static_cast<size_t>(m) ? -1 : ids[t - m];
          extensions[m - 1][Pack(gram)].insert(left);
        }
      }
    }
  }
  model.level_[n - 1] = model.raw_[n - 1];
  for (int m = 1; m < n; ++m) {
    for (const auto &[key, lefts] : extensions[m - 1]) {
      model.level_[m - 1][key] = static_cast<int64_t>(lefts.size());
    }
  }
  model.Finalize(options.discounts);
  return model;
}

void NGramModel::Finalize(
    const std::optional<std::array<double, kMaxNGramOrder>> &fixed) {
  for (int m = 1; m <= order_; ++m) {
    auto &agg = agg_[m - 1];
    agg.clear();
    int64_t n1 = 0;
    int64_t n2 = 0;
    for (const auto &[key, count] : level_[m - 1]) {
      if (count <= 0) continue;
      Aggregate &a = agg[key >> kIdBits];
      a.total += count;
      a.types += 1;
      if (count == 1) ++n1;
      if (count == 2) ++n2;
    }
    double discount;
    if (fixed) {
      discount = (*fixed)[m - 1];
      if (!(discount >= 0.0 && discount <= 1.0)) {
        throw Error("n-gram discounts must lie in [0, 1]");
      }
    } else if (n1 > 0) {
      discount = static_cast<double>(n1) / static_cast<double>(n1 + 2 * n2);
    } else {
      discount = kFallbackDiscount;
    }
    discounts_[m - 1] = discount;
  }
}

std::string NGramModel::name() const { return NGramModelName(order_); }

double NGramModel::LevelProb(int level, std::span<const TokenId> history,
                             TokenId token) const {
  const double discount = discounts_[level - 1];
  const Table &counts = level_[level - 1];
  if (level == 1) {
    const double uniform = 1.0 / vocab_size_;
    auto a = agg_[0].find(0);
    if (a == agg_[0].end() || a->second.total == 0) return uniform;
    auto c = counts.find(static_cast<uint64_t>(token));
    const double count = c == counts.end() ? 0.0 : static_cast<double>(c->second);
    const double total = static_cast<double>(a->second.total);
    return std::max(count - discount, 0.0) / total +
           discount * static_cast<double>(a->second.types) / total * uniform;
  }
  const double lower = LevelProb(level - 1, history.subspan(1), token);
  const uint64_t hkey = Pack(history);
  auto a = agg_[level - 1].find(hkey);
  if (a == agg_[level - 1].end()) return lower;
  auto c = counts.find((hkey << kIdBits) | static_cast<uint64_t>(token));
  const double count = c == counts.end() ? 0.0 : static_cast<double>(c->second);
  const double total = static_cast<double>(a->second.total);
  return std::max(count - discount, 0.0) / total +
         discount * static_cast<double>(a->second.types) / total * lower;
}

double NGramModel::CondProb(std::span<const TokenId> history,
                            TokenId token) const {
  const size_t used = std::min<size_t>(history.size(), order_ - 1);
  return LevelProb(static_cast<int>(used) + 1, history.last(used), token);
}

double NGramModel::LogProb(std::span<const TokenId> history,
                           TokenId token) const {
  return std::log(CondProb(history, token));
}

int64_t NGramModel::RawCount(std::span<const TokenId> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return 0;
  const Table &table = raw_[ngram.size() - 1];
  auto it = table.find(Pack(ngram));
  return it == table.end() ? 0 : it->second;
}

int64_t NGramModel::LevelCount(std::span<const TokenId> ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order_) return 0;
  const Table &table = level_[ngram.size() - 1];
  auto it = table.find(Pack(ngram));
  return it == table.end() ? 0 : it->second;
}

bool NGramModel::operator==(const NGramModel &other) const {
  return order_ == other.order_ && vocab_size_ == other.vocab_size_ &&
         discounts_ == other.discounts_ && raw_ == other.raw_ &&
         level_ == other.level_;
}

namespace {

std::vector<std::pair<uint64_t, int64_t>> Sorted(
    const std::unordered_map<uint64_t, int64_t> &table) {
  std::vector<std::pair<uint64_t, int64_t>> entries(table.begin(), table.end());
  std::sort(entries.begin(), entries.end());
  return entries;
}

}  // namespace

void NGramModel::SaveBinary(std::ostream &out) const {
  out.write(kBinaryMagic, sizeof(kBinaryMagic));
  BinaryWriter writer(out);
  writer.Write<int32_t>(kFormatVersion);
  writer.Write<int32_t>(order_);
  writer.Write<int32_t>(vocab_size_);
  for (int m = 0; m < order_; ++m) writer.Write<double>(discounts_[m]);
  for (const auto *tables : {&raw_, &level_}) {
    for (int m = 0; m < order_; ++m) {
      auto entries = Sorted((*tables)[m]);
      writer.Write<uint64_t>(entries.size());
      for (const auto &[key, count] : entries) {
        writer.Write<uint64_t>(key);
        writer.Write<int64_t>(count);
      }
    }
  }
}

void NGramModel::SaveText(std::ostream &out) const {
  out << "\\data\\\n";
  out << "version=" << kFormatVersion << '\n';
  out << "order=" << order_ << '\n';
  out << "vocab=" << vocab_size_ << '\n';
  for (int m = 1; m <= order_; ++m) {
    out << "ngram " << m << "=" << raw_[m - 1].size() << '\n';
  }
  for (int m = 1; m <= order_; ++m) {
    out << "discount " << m << "=" << ExactDouble(discounts_[m - 1]) << '\n';
  }
  for (int which = 0; which < 2; ++which) {
    const auto &tables = which == 0 ? raw_ : level_;
    for (int m = 1; m <= order_; ++m) {
      out << '\n' << (which == 0 ? "\\raw-" : "\\level-") << m << "-grams:\n";
      for (const auto &[key, count] : Sorted(tables[m - 1])) {
        out << count;
        for (TokenId id : Unpack(key, m)) out << '\t' << id;
        out << '\n';
      }
    }
  }
  out << "\n\\end\\\n";
}

namespace {

NGramModel ParseText(std::istream &in);

}  // namespace

NGramModel NGramModel::Load(std::istream &in) {
  char magic[sizeof(kBinaryMagic)] = {};
  in.read(magic, sizeof(magic));
  if (in && std::equal(magic, magic + sizeof(magic), kBinaryMagic)) {
    BinaryReader reader(in);
    if (reader.Read<int32_t>() != kFormatVersion) {
      throw Error("unsupported n-gram model version");
    }
    NGramModel model;
    model.order_ = reader.Read<int32_t>();
    model.vocab_size_ = reader.Read<int32_t>();
    if (model.order_ < 1 || model.order_ > kMaxNGramOrder) {
      throw Error("corrupt n-gram model order");
    }
    std::array<double, kMaxNGramOrder> discounts{};
    for (int m = 0; m < model.order_; ++m) discounts[m] = reader.Read<double>();
    for (auto *tables : {&model.raw_, &model.level_}) {
      for (int m = 0; m < model.order_; ++m) {
        const auto entries = reader.Read<uint64_t>();
        for (uint64_t i = 0; i < entries; ++i) {
          const auto key = reader.Read<uint64_t>();
          (*tables)[m][key] = reader.Read<int64_t>();
        }
      }
    }
    model.Finalize(discounts);
    return model;
  }
  in.clear();
  in.seekg(0);
  return ParseText(in);
}

namespace {

NGramModel ParseText(std::istream &in) {
  std::string line;
  if (!std::getline(in, line) || line != "\\data\\") {
    throw Error("not an n-gram model file");
  }
  int order = 0;
  int vocab = 0;
  std::array<double, kMaxNGramOrder> discounts{};
  std::array<std::unordered_map<uint64_t, int64_t>, kMaxNGramOrder> raw, level;
  std::unordered_map<uint64_t, int64_t> *section = nullptr;
  int section_order = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    if (line.starts_with("version=")) {
      if (std::stoi(line.substr(8)) != 1) throw Error("unsupported n-gram model version");
    } else if (line.starts_with("order=")) {
      order = std::stoi(line.substr(6));
      if (order < 1 || order > kMaxNGramOrder) throw Error("corrupt n-gram model order");
    } else if (line.starts_with("vocab=")) {
      vocab = std::stoi(line.substr(6));
    } else if (line.starts_with("ngram ")) {
      continue;
    } else if (line.starts_with("discount ")) {
      const size_t eq = line.find('=');
      const int m = std::stoi(line.substr(9, eq - 9));
      if (m < 1 || m > kMaxNGramOrder) throw Error("corrupt discount line");
      discounts[m - 1] = std::stod(line.substr(eq + 1));
    } else if (line.starts_with("\\raw-") || line.starts_with("\\level-")) {
      const bool is_raw = line.starts_with("\\raw-");
      section_order = std::stoi(line.substr(is_raw ? 5 : 7));
      if (section_order < 1 || section_order > order) throw Error("corrupt section header");
      section = &(is_raw ? raw : level)[section_order - 1];
    } else {
      if (section == nullptr) throw Error("n-gram entry outside a section");
      std::istringstream row(line);
      int64_t count = 0;
      row >> count;
      uint64_t key = 0;
      for (int i = 0; i < section_order; ++i) {
        TokenId id = 0;
        if (!(row >> id)) throw Error("short n-gram entry: " + line);
        key = (key << kIdBits) | static_cast<uint64_t>(id);
      }
      (*section)[key] = count;
    }
  }
  // Rebuild through the binary path so both formats share one constructor.
  std::stringstream buffer;
  buffer.write(kBinaryMagic, sizeof(kBinaryMagic));
  BinaryWriter writer(buffer);
  writer.Write<int32_t>(kFormatVersion);
  writer.Write<int32_t>(order);
  writer.Write<int32_t>(vocab);
  for (int m = 0; m < order; ++m) writer.Write<double>(discounts[m]);
  for (const auto *tables : {&raw, &level}) {
    for (int m = 0; m < order; ++m) {
      writer.Write<uint64_t>((*tables)[m].size());
      for (const auto &[key, count] : (*tables)[m]) {
        writer.Write<uint64_t>(key);
        writer.Write<int64_t>(count);
      }
    }
  }
  buffer.seekg(0);
  return NGramModel::Load(buffer);
}

}  // namespace

void NGramModel::Save(const std::string &path, bool text) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  if (text) {
    SaveText(out);
  } else {
    SaveBinary(out);
  }
  if (!out) throw Error("failed writing " + path);
}

NGramModel NGramModel::LoadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return Load(in);
}

}  // namespace semlm
