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

#ifndef SEMLM_FEATURES_H_
#define SEMLM_FEATURES_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "semlm/cloze.h"
#include "semlm/language_model.h"
#include "semlm/matrix.h"
#include "semlm/vocab.h"

namespace semlm {

// 1/p is clipped here so underflowing probabilities stay finite.
inline constexpr double kMaxInverseProbability = 1e6;

struct FeatureRecord {
  std::string kind;  // "coref" or "discourse"
  std::string model_id;
  double p = 0.0;
  double p_squared = 0.0;
  double p_sqrt = 0.0;
  double p_inverse = 0.0;
  std::vector<std::string> tokens;  // as queried
  std::vector<TokenId> token_ids;
  std::vector<bool> unk;  // token replaced by UNK
  // One row per token when the model carries embeddings.
  std::vector<std::vector<double>> embeddings;

  nlohmann::json ToJson() const;
};

// Fills p and its transforms.
void SetProbability(FeatureRecord &record, double p);

// Bundles what a feature query needs. `embeddings`, when set, has one row per
// vocabulary id.
struct FeatureModel {
  std::string model_id;
  const Vocabulary *vocab = nullptr;
  const GapScorer *scorer = nullptr;       // required for discourse features
  const LanguageModel *model = nullptr;   // required for coref features
  const Matrix *embeddings = nullptr;
};

// p_c = p(fa2 | fa1, dis), or p(fa2 | fa1) without a marker. The vocabulary
// must be entity-centered.
FeatureRecord CorefPairFeatures(const FeatureModel &model, std::string_view fa1,
                                std::string_view fa2,
                                std::optional<std::string_view> dis);

// q_c: gap score of dis in [f1, dis, f2] normalized over the marker tokens of
// a frame-chain vocabulary.
FeatureRecord DiscourseFeatures(const FeatureModel &model, std::string_view f1,
                                std::string_view f2, std::string_view dis);

// "because" and "dis:because" both name the same marker token.
std::string MarkerToken(std::string_view marker);

// Batch query file: one tab-separated query per line, two or three fields.
// Blank lines and lines starting with '#' are skipped.
struct FeatureQuery {
  std::string first;
  std::string second;
  std::optional<std::string> marker;
};
std::vector<FeatureQuery> ReadFeatureQueries(const std::string &path);

void WriteFeatureRecords(std::ostream &out,
                         const std::vector<FeatureRecord> &records);

}  // namespace semlm

#endif  // SEMLM_FEATURES_H_
