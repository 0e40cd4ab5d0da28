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

#include "semlm/language_model.h"

#include <algorithm>
#include <limits>

#include "semlm/parallel.h"

namespace semlm {

void LanguageModel::LogProbAll(std::span<const TokenId> history,
                               std::span<double> out) const {
  for (TokenId w = 0; w < vocab_size(); ++w) out[w] = LogProb(history, w);
}

double SequenceLogProb(const LanguageModel &model,
                       std::span<const TokenId> seq) {
  double total = 0.0;
  for (size_t t = 0; t < seq.size(); ++t) {
    total += model.LogProb(seq.first(t), seq[t]);
  }
  return total;
}

double PerplexitySerial(const LanguageModel &model, const EncodedCorpus &corpus,
                        TokenId eos) {
  double log_sum = 0.0;
  int64_t events = 0;
  for (const EncodedSequence &seq : corpus) {
    std::span<const TokenId> ids(seq);
    for (size_t t = 0; t < ids.size(); ++t) {
      if (ids[t] == eos) continue;
      log_sum += model.LogProb(ids.first(t), ids[t]);
      ++events;
    }
  }
  if (events == 0) throw Error("perplexity of a corpus without events");
  return std::exp(-log_sum / static_cast<double>(events));
}

double Perplexity(const LanguageModel &model, const EncodedCorpus &corpus,
                  TokenId eos) {
  const int64_t n = static_cast<int64_t>(corpus.size());
  std::vector<double> log_sums(n, 0.0);
  std::vector<int64_t> counts(n, 0);
#pragma omp parallel for schedule(dynamic, 16)
  for (int64_t s = 0; s < n; ++s) {
    std::span<const TokenId> ids(corpus[s]);
    double sum = 0.0;
    int64_t events = 0;
    for (size_t t = 0; t < ids.size(); ++t) {
      if (ids[t] == eos) continue;
      sum += model.LogProb(ids.first(t), ids[t]);
      ++events;
    }
    log_sums[s] = sum;
    counts[s] = events;
  }
  double log_sum = 0.0;
  int64_t events = 0;
  for (int64_t s = 0; s < n; ++s) {
    log_sum += log_sums[s];
    events += counts[s];
  }
  if (events == 0) throw Error("perplexity of a corpus without events");
  return std::exp(-log_sum / static_cast<double>(events));
}

InterpolatedModel::InterpolatedModel(const LanguageModel &primary,
                                     const LanguageModel &secondary,
                                     double lambda)
    : primary_(primary), secondary_(secondary), lambda_(lambda) {
  if (primary.vocab_size() != secondary.vocab_size()) {
    throw Error("interpolated models must share a vocabulary");
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw Error("interpolation weight must lie in [0, 1]");
  }
}

int InterpolatedModel::context_size() const {
  return std::max(primary_.context_size(), secondary_.context_size());
}

std::string InterpolatedModel::name() const {
  return primary_.name() + "+" + secondary_.name();
}

double InterpolatedModel::LogProb(std::span<const TokenId> history,
                                  TokenId token) const {
  return std::log(lambda_ * primary_.Prob(history, token) +
                  (1.0 - lambda_) * secondary_.Prob(history, token));
}

void InterpolatedModel::LogProbAll(std::span<const TokenId> history,
                                   std::span<double> out) const {
  std::vector<double> other(out.size());
  primary_.LogProbAll(history, out);
  secondary_.LogProbAll(history, other);
  for (size_t w = 0; w < out.size(); ++w) {
    out[w] = std::log(lambda_ * std::exp(out[w]) +
                      (1.0 - lambda_) * std::exp(other[w]));
  }
}

double LogSumExp(std::span<const double> values) {
  if (values.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

}  // namespace semlm
