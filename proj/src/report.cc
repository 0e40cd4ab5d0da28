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

#include "semlm/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace semlm {

size_t PerplexityTable::IndexOf(std::vector<std::string> &names,
                                const std::string &name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it != names.end()) return it - names.begin();
  names.push_back(name);
  return names.size() - 1;
}

void PerplexityTable::Set(const std::string &row, const std::string &column,
                          double value) {
  const size_t r = IndexOf(rows_, row);
  const size_t c = IndexOf(columns_, column);
  cells_.resize(rows_.size());
  for (auto &cells : cells_) cells.resize(columns_.size());
  cells_[r][c] = value;
}

std::optional<double> PerplexityTable::Get(const std::string &row,
                                           const std::string &column) const {
  auto r = std::find(rows_.begin(), rows_.end(), row);
  auto c = std::find(columns_.begin(), columns_.end(), column);
  if (r == rows_.end() || c == columns_.end()) return std::nullopt;
  return cells_[r - rows_.begin()][c - columns_.begin()];
}

nlohmann::json PerplexityTable::ToJson() const {
  nlohmann::json grid = nlohmann::json::object();
  for (size_t r = 0; r < rows_.size(); ++r) {
    nlohmann::json row = nlohmann::json::object();
    for (size_t c = 0; c < columns_.size(); ++c) {
      if (cells_[r][c]) {
        row[columns_[c]] = *cells_[r][c];
      } else {
        row[columns_[c]] = nullptr;
      }
    }
    grid[rows_[r]] = row;
  }
  nlohmann::json out;
  out["metric"] = "perplexity";
  out["rows"] = rows_;
  out["columns"] = columns_;
  out["cells"] = grid;
  out["metadata"] = metadata_;
  return out;
}

std::string PerplexityTable::ToText() const {
  auto format = [](const std::optional<double> &v) {
    if (!v) return std::string("-");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", *v);
    return std::string(buf);
  };
  std::vector<size_t> widths(columns_.size() + 1, 0);
  widths[0] = 5;
  for (const auto &row : rows_) widths[0] = std::max(widths[0], row.size());
  for (size_t c = 0; c < columns_.size(); ++c) {
    widths[c + 1] = columns_[c].size();
    for (size_t r = 0; r < rows_.size(); ++r) {
      widths[c + 1] = std::max(widths[c + 1], format(cells_[r][c]).size());
    }
  }
  std::ostringstream out;
  auto pad_left = [&](const std::string &s, size_t w) {
    out << s << std::string(w - s.size(), ' ');
  };
  auto pad_right = [&](const std::string &s, size_t w) {
    out << std::string(w - s.size(), ' ') << s;
  };
  for (auto it = metadata_.begin(); it != metadata_.end(); ++it) {
    out << "# " << it.key() << ": "
        << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  }
  pad_left("model", widths[0]);
  for (size_t c = 0; c < columns_.size(); ++c) {
    out << "  ";
    pad_right(columns_[c], widths[c + 1]);
  }
  out << "\n";
  for (size_t r = 0; r < rows_.size(); ++r) {
    pad_left(rows_[r], widths[0]);
    for (size_t c = 0; c < columns_.size(); ++c) {
      out << "  ";
      pad_right(format(cells_[r][c]), widths[c + 1]);
    }
    out << "\n";
  }
  return out.str();
}

PerplexityTable PerplexityReport(std::span<const ReportRow> rows) {
  PerplexityTable table;
  nlohmann::json checksums = nlohmann::json::object();
  for (const ReportRow &row : rows) {
    if (row.corpus == nullptr) throw Error("report row without a corpus");
    if (!row.checksum.empty()) checksums[row.name] = row.checksum;
    for (const auto &[column, model] : row.models) {
      table.Set(row.name, column, Perplexity(*model, *row.corpus, row.eos));
    }
  }
  if (!checksums.empty()) table.metadata()["corpus_checksums"] = checksums;
  return table;
}

nlohmann::json ClozeReportToJson(const ClozeReport &report) {
  nlohmann::json out;
  out["mrr"] = report.mrr;
  out["recall_k"] = report.k;
  out["recall"] = report.recall;
  out["instances"] = report.instances;
  return out;
}

void WriteTextFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace semlm
