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

#include "semlm/features.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "semlm/seqbuild.h"

namespace semlm {
namespace {

bool HasKind(const Vocabulary &vocab, VocabKind kind) {
  for (TokenId id = 0; id < vocab.size(); ++id) {
    if (vocab.kind(id) == kind) return true;
  }
  return false;
}

void CheckModel(const FeatureModel &model) {
  if (model.vocab == nullptr) throw Error("feature model has no vocabulary");
  if (model.embeddings != nullptr &&
      model.embeddings->rows != model.vocab->size()) {
    throw Error("embedding rows do not match the vocabulary");
  }
}

void AddToken(const FeatureModel &model, FeatureRecord &record,
              std::string_view token) {
  const std::optional<TokenId> id = model.vocab->Find(token);
  record.tokens.emplace_back(token);
  record.token_ids.push_back(id ? *id : model.vocab->unk_id());
  record.unk.push_back(!id.has_value());
  if (model.embeddings != nullptr) {
    auto row = model.embeddings->row(record.token_ids.back());
    record.embeddings.emplace_back(row.begin(), row.end());
  }
}

}  // namespace

void SetProbability(FeatureRecord &record, double p) {
  if (p == 0.0) p = std::numeric_limits<double>::min();
  if (!(p > 0.0) || p > 1.0) {
    throw Error("feature probability outside (0, 1]: " + std::to_string(p));
  }
  record.p = p;
  record.p_squared = p * p;
  record.p_sqrt = std::sqrt(p);
  record.p_inverse = std::min(1.0 / p, kMaxInverseProbability);
}

nlohmann::json FeatureRecord::ToJson() const {
  nlohmann::json out;
  out["kind"] = kind;
  out["model"] = model_id;
  out["p"] = p;
  out["p_squared"] = p_squared;
  out["p_sqrt"] = p_sqrt;
  out["p_inverse"] = p_inverse;
  out["tokens"] = tokens;
  out["token_ids"] = token_ids;
  out["unk"] = unk;
  if (!embeddings.empty()) out["embeddings"] = embeddings;
  return out;
}

std::string MarkerToken(std::string_view marker) {
  if (marker.starts_with(kDiscPrefix)) return std::string(marker);
  return SemToken::Disc(std::string(marker)).Render();
}

FeatureRecord CorefPairFeatures(const FeatureModel &model, std::string_view fa1,
                                std::string_view fa2,
                                std::optional<std::string_view> dis) {
  CheckModel(model);
  if (model.model == nullptr) throw Error("coref features need a language model");
  if (!HasKind(*model.vocab, VocabKind::kFrameArg)) {
    throw Error("coref features need an entity-centered model");
  }
  FeatureRecord record;
  record.kind = "coref";
  record.model_id = model.model_id;
  AddToken(model, record, fa1);
  if (dis) AddToken(model, record, MarkerToken(*dis));
  AddToken(model, record, fa2);
  std::vector<TokenId> history(record.token_ids.begin(),
                               record.token_ids.end() - 1);
  SetProbability(record, model.model->Prob(history, record.token_ids.back()));
  return record;
}

FeatureRecord DiscourseFeatures(const FeatureModel &model, std::string_view f1,
                                std::string_view f2, std::string_view dis) {
  CheckModel(model);
  if (model.scorer == nullptr) throw Error("discourse features need a scorer");
  if (HasKind(*model.vocab, VocabKind::kFrameArg)) {
    throw Error("discourse features need a frame-chain model");
  }
  std::vector<TokenId> candidates = model.vocab->MarkerIds();
  if (candidates.empty()) throw Error("model vocabulary has no discourse markers");

  FeatureRecord record;
  record.kind = "discourse";
  record.model_id = model.model_id;
  AddToken(model, record, f1);
  AddToken(model, record, MarkerToken(dis));
  AddToken(model, record, f2);
  const TokenId marker = record.token_ids[1];
  if (!std::binary_search(candidates.begin(), candidates.end(), marker)) {
    candidates.push_back(marker);
  }

  std::vector<double> scores(model.scorer->vocab_size());
  model.scorer->ScoreGap(record.token_ids, 1, scores);
  std::vector<double> restricted;
  restricted.reserve(candidates.size());
  for (TokenId id : candidates) restricted.push_back(scores[id]);
  const double log_z = LogSumExp(restricted);
  SetProbability(record, std::min(1.0, std::exp(scores[marker] - log_z)));
  return record;
}

std::vector<FeatureQuery> ReadFeatureQueries(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::vector<FeatureQuery> queries;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
      const size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() < 2 || fields.size() > 3 ||
        std::any_of(fields.begin(), fields.end(),
                    [](const std::string &f) { return f.empty(); })) {
      throw Error(path + ":" + std::to_string(line_number) +
                  ": expected 2 or 3 tab-separated tokens");
    }
    FeatureQuery query{fields[0], fields[1], std::nullopt};
    if (fields.size() == 3) query.marker = fields[2];
    queries.push_back(std::move(query));
  }
  return queries;
}

void WriteFeatureRecords(std::ostream &out,
                         const std::vector<FeatureRecord> &records) {
  for (const FeatureRecord &record : records) out << record.ToJson().dump() << "\n";
}

}  // namespace semlm
