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

#ifndef SEMLM_REPORT_H_
#define SEMLM_REPORT_H_

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "semlm/cloze.h"
#include "semlm/language_model.h"

namespace semlm {

// One row of the perplexity grid: a sequence representation (FC, EC, ...)
// with its held-out corpus and the models trained on it.
struct ReportRow {
  std::string name;
  const EncodedCorpus *corpus = nullptr;
  TokenId eos = -1;
  std::string checksum;
  std::vector<std::pair<std::string, const LanguageModel *>> models;
};

// Rows are sequence representations, columns are language models. Missing
// cells are empty.
class PerplexityTable {
 public:
  void Set(const std::string &row, const std::string &column, double value);
  std::optional<double> Get(const std::string &row,
                            const std::string &column) const;

  const std::vector<std::string> &rows() const { return rows_; }
  const std::vector<std::string> &columns() const { return columns_; }

  // Free-form provenance carried into both renderings.
  nlohmann::json &metadata() { return metadata_; }
  const nlohmann::json &metadata() const { return metadata_; }

  nlohmann::json ToJson() const;
  std::string ToText() const;

 private:
  static size_t IndexOf(std::vector<std::string> &names, const std::string &name);

  std::vector<std::string> rows_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::optional<double>>> cells_;
  nlohmann::json metadata_ = nlohmann::json::object();
};

PerplexityTable PerplexityReport(std::span<const ReportRow> rows);

nlohmann::json ClozeReportToJson(const ClozeReport &report);

// Writes `text` to `path`, replacing any existing file.
void WriteTextFile(const std::string &path, const std::string &text);

}  // namespace semlm

#endif  // SEMLM_REPORT_H_
