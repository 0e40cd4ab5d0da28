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

#include "semlm/embedding.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>

#include "semlm/serialize.h"
#include "semlm/vocab.h"

namespace semlm {

namespace {

constexpr double kUnigramPower = 0.75;
constexpr char kMagic[8] = {'S', 'E', 'M', 'L', 'M', 'E', 'M', '1'};

void InitUniform(Matrix *m, std::mt19937_64 &rng) {
  const double scale = 0.5 / m->cols;
  for (double &v : m->data) v = (2.0 * UnitDouble(rng()) - 1.0) * scale;
}

EmbeddingModel Init(EmbeddingFlavor flavor, int vocab_size,
                    const TrainConfig &config, std::mt19937_64 &rng) {
  EmbeddingModel model;
  model.flavor = flavor;
  model.window = config.window;
  model.dim = config.dim;
  model.input = Matrix(vocab_size, config.dim);
  model.output = Matrix(vocab_size, config.dim);
  InitUniform(&model.input, rng);
  return model;
}

void Apply(const SparseRows &grad, double rate, Matrix *params) {
  for (size_t i = 0; i < grad.size(); ++i) {
    Axpy(-rate, grad.values(i), params->row(grad.id(i)));
  }
}

void CheckCorpus(const EncodedCorpus &corpus, int vocab_size) {
  size_t tokens = 0;
  for (const EncodedSequence &seq : corpus) {
    for (TokenId id : seq) {
      if (id < 0 || id >= vocab_size) throw Error("token id out of vocabulary");
    }
    tokens += seq.size();
  }
  if (tokens == 0) throw Error("cannot train on an empty corpus");
}

struct Position {
  uint32_t seq;
  uint32_t t;
};

// Every (sequence, offset) pair. Each epoch visits them in a fresh seeded
// order; streaming in corpus order lets the online loss profit from the
// previous center's updates, which masks the epoch trend.
std::vector<Position> Positions(const EncodedCorpus &corpus) {
  std::vector<Position> out;
  for (size_t s = 0; s < corpus.size(); ++s) {
    for (size_t t = 0; t < corpus[s].size(); ++t) {
      out.push_back({static_cast<uint32_t>(s), static_cast<uint32_t>(t)});
    }
  }
  return out;
}

// Fisher-Yates on the training generator; std::shuffle draws differently
// across standard libraries.
void Shuffle(std::vector<Position> &v, std::mt19937_64 &rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const size_t j = std::min(static_cast<size_t>(UnitDouble(rng()) * i), i - 1);
    std::swap(v[i - 1], v[j]);
  }
}


// Averaged input vectors of the last `window` tokens of `context`.
std::vector<double> ContextMean(const EmbeddingModel &model,
                                std::span<const TokenId> context) {
  std::vector<double> h(model.dim, 0.0);
  const size_t used = std::min<size_t>(context.size(), model.window);
  if (used == 0) return h;
  for (TokenId c : context.last(used)) Axpy(1.0, model.input.row(c), h);
  for (double &v : h) v /= static_cast<double>(used);
  return h;
}

}  // namespace

double SkipGramLoss(const EmbeddingModel &model, TokenId center,
                    TokenId context, std::span<const TokenId> negatives,
                    EmbeddingGradient *grad) {
  auto in = model.input.row(center);
  if (grad != nullptr) {
    grad->input.Reset(model.dim);
    grad->output.Reset(model.dim);
  }
  const double pos = Dot(model.output.row(context), in);
  double loss = -LogSigmoid(pos);
  std::span<double> grad_in;
  if (grad != nullptr) {
    grad_in = grad->input.Row(center);
    const double g = Sigmoid(pos) - 1.0;
    Axpy(g, model.output.row(context), grad_in);
    Axpy(g, in, grad->output.Row(context));
  }
  for (TokenId n : negatives) {
    const double neg = Dot(model.output.row(n), in);
    loss -= LogSigmoid(-neg);
    if (grad != nullptr) {
      const double g = Sigmoid(neg);
      Axpy(g, model.output.row(n), grad_in);
      Axpy(g, in, grad->output.Row(n));
    }
  }
  return loss;
}

double CbowLoss(const EmbeddingModel &model, std::span<const TokenId> context,
                TokenId target, std::span<const TokenId> negatives,
                EmbeddingGradient *grad) {
  if (context.empty()) throw Error("CBOW loss needs a nonempty context");
  std::vector<double> h(model.dim, 0.0);
  for (TokenId c : context) Axpy(1.0, model.input.row(c), h);
  const double scale = 1.0 / static_cast<double>(context.size());
  for (double &v : h) v *= scale;

  std::vector<double> grad_h(model.dim, 0.0);
  if (grad != nullptr) {
    grad->input.Reset(model.dim);
    grad->output.Reset(model.dim);
  }
  const double pos = Dot(model.output.row(target), h);
  double loss = -LogSigmoid(pos);
  if (grad != nullptr) {
    const double g = Sigmoid(pos) - 1.0;
    Axpy(g, model.output.row(target), grad_h);
    Axpy(g, h, grad->output.Row(target));
  }
  for (TokenId n : negatives) {
    const double neg = Dot(model.output.row(n), h);
    loss -= LogSigmoid(-neg);
    if (grad != nullptr) {
      const double g = Sigmoid(neg);
      Axpy(g, model.output.row(n), grad_h);
      Axpy(g, h, grad->output.Row(n));
    }
  }
  if (grad != nullptr) {
    for (TokenId c : context) Axpy(scale, grad_h, grad->input.Row(c));
  }
  return loss;
}

EmbeddingModel TrainSkipGram(const EncodedCorpus &corpus, int vocab_size,
                             const TrainConfig &config,
                             std::vector<double> *epoch_losses) {
  config.Validate();
  CheckCorpus(corpus, vocab_size);
  std::mt19937_64 rng(config.seed);
  EmbeddingModel model = Init(EmbeddingFlavor::kSkipGram, vocab_size, config, rng);
  NoiseSampler noise(corpus, vocab_size, kUnigramPower);

  std::vector<Position> order = Positions(corpus);
  const double total_steps =
      static_cast<double>(config.epochs) * static_cast<double>(order.size());
  double step = 0.0;
  EmbeddingGradient grad;
  std::vector<TokenId> negatives;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order, rng);
    double loss = 0.0;
    int64_t pairs = 0;
    for (const Position &pos : order) {
      const EncodedSequence &seq = corpus[pos.seq];
      const int length = static_cast<int>(seq.size());
      const int t = static_cast<int>(pos.t);
      const double rate = DecayedRate(config, step / total_steps);
      step += 1.0;
      const int lo = std::max(0, t - config.window);
      const int hi = std::min(length - 1, t + config.window);
      for (int j = lo; j <= hi; ++j) {
        if (j == t) continue;
        negatives.clear();
        for (int k = 0; k < config.negatives; ++k) {
          const TokenId n = noise.Sample(rng);
          if (n != seq[j]) negatives.push_back(n);
        }
        loss += SkipGramLoss(model, seq[t], seq[j], negatives, &grad);
        ++pairs;
        Apply(grad.output, rate, &model.output);
        Apply(grad.input, rate, &model.input);
      }
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(pairs > 0 ? loss / pairs : 0.0);
    }
  }
  return model;
}

EmbeddingModel TrainCbow(const EncodedCorpus &corpus, int vocab_size,
                         const TrainConfig &config,
                         std::vector<double> *epoch_losses) {
  config.Validate();
  CheckCorpus(corpus, vocab_size);
  std::mt19937_64 rng(config.seed);
  EmbeddingModel model = Init(EmbeddingFlavor::kCbow, vocab_size, config, rng);
  NoiseSampler noise(corpus, vocab_size, kUnigramPower);

  std::vector<Position> order = Positions(corpus);
  const double total_steps =
      static_cast<double>(config.epochs) * static_cast<double>(order.size());
  double step = 0.0;
  EmbeddingGradient grad;
  std::vector<TokenId> context;
  std::vector<TokenId> negatives;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Shuffle(order, rng);
    double loss = 0.0;
    int64_t events = 0;
    for (const Position &pos : order) {
      const EncodedSequence &seq = corpus[pos.seq];
      const int length = static_cast<int>(seq.size());
      const int t = static_cast<int>(pos.t);
      const double rate = DecayedRate(config, step / total_steps);
      step += 1.0;
      context.clear();
      const int lo = std::max(0, t - config.window);
      const int hi = std::min(length - 1, t + config.window);
      for (int j = lo; j <= hi; ++j) {
        if (j != t) context.push_back(seq[j]);
      }
      if (context.empty()) continue;
      negatives.clear();
      for (int k = 0; k < config.negatives; ++k) {
        const TokenId n = noise.Sample(rng);
        if (n != seq[t]) negatives.push_back(n);
      }
      loss += CbowLoss(model, context, seq[t], negatives, &grad);
      ++events;
      Apply(grad.output, rate, &model.output);
      Apply(grad.input, rate, &model.input);
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(events > 0 ? loss / events : 0.0);
    }
  }
  return model;
}

void CbowLogProbAll(const EmbeddingModel &model,
                    std::span<const TokenId> context, std::span<double> out) {
  const std::vector<double> h = ContextMean(model, context);
  for (TokenId w = 0; w < model.vocab_size(); ++w) {
    out[w] = Dot(model.output.row(w), h);
  }
  const double log_z = LogSumExp(out.first(model.vocab_size()));
  for (TokenId w = 0; w < model.vocab_size(); ++w) out[w] -= log_z;
}

double CbowCondProb(const EmbeddingModel &model,
                    std::span<const TokenId> context, TokenId token) {
  std::vector<double> logits(model.vocab_size());
  CbowLogProbAll(model, context, logits);
  return std::exp(logits[token]);
}

std::vector<double> SkipGramLogNormalizers(const EmbeddingModel &model) {
  const int vocab = model.vocab_size();
  std::vector<double> out(vocab);
#pragma omp parallel
  {
    std::vector<double> logits(vocab);
#pragma omp for schedule(static)
    for (TokenId w = 0; w < vocab; ++w) {
      auto in = model.input.row(w);
      for (TokenId c = 0; c < vocab; ++c) logits[c] = Dot(model.output.row(c), in);
      out[w] = LogSumExp(logits);
    }
  }
  return out;
}

double SgScore(const EmbeddingModel &model, TokenId candidate,
               std::span<const TokenId> context,
               std::span<const double> log_normalizers) {
  if (context.empty()) return 0.0;
  double log_z;
  if (!log_normalizers.empty()) {
    log_z = log_normalizers[candidate];
  } else {
    std::vector<double> logits(model.vocab_size());
    auto in = model.input.row(candidate);
    for (TokenId c = 0; c < model.vocab_size(); ++c) {
      logits[c] = Dot(model.output.row(c), in);
    }
    log_z = LogSumExp(logits);
  }
  double score = 0.0;
  auto in = model.input.row(candidate);
  for (TokenId c : context) score += Dot(model.output.row(c), in) - log_z;
  return score;
}

double CbowLanguageModel::LogProb(std::span<const TokenId> history,
                                  TokenId token) const {
  return std::log(CbowCondProb(model_, history, token));
}

void CbowLanguageModel::LogProbAll(std::span<const TokenId> history,
                                   std::span<double> out) const {
  CbowLogProbAll(model_, history, out);
}

SkipGramPseudoModel::SkipGramPseudoModel(const EmbeddingModel &model)
    : model_(model), log_normalizers_(SkipGramLogNormalizers(model)) {}

void SkipGramPseudoModel::LogProbAll(std::span<const TokenId> history,
                                     std::span<double> out) const {
  const size_t used = std::min<size_t>(history.size(), model_.window);
  auto context = history.last(used);
  for (TokenId w = 0; w < model_.vocab_size(); ++w) {
    out[w] = SgScore(model_, w, context, log_normalizers_);
  }
  const double log_z = LogSumExp(out.first(model_.vocab_size()));
  for (TokenId w = 0; w < model_.vocab_size(); ++w) out[w] -= log_z;
}

double SkipGramPseudoModel::LogProb(std::span<const TokenId> history,
                                    TokenId token) const {
  std::vector<double> all(model_.vocab_size());
  LogProbAll(history, all);
  return all[token];
}

void WriteEmbeddingDump(std::ostream &out, const Matrix &vectors,
                        const Vocabulary &vocab) {
  if (vectors.rows != vocab.size()) {
    throw Error("embedding rows do not match the vocabulary");
  }
  out << vectors.rows << ' ' << vectors.cols << '\n';
  for (TokenId w = 0; w < vectors.rows; ++w) {
    out << vocab.token(w);
    for (double v : vectors.row(w)) out << ' ' << ExactDouble(v);
    out << '\n';
  }
}

void SaveEmbeddingModel(const EmbeddingModel &model, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  BinaryWriter writer(out);
  writer.Write<int32_t>(1);
  writer.Write<int32_t>(model.flavor == EmbeddingFlavor::kSkipGram ? 0 : 1);
  writer.Write<int32_t>(model.window);
  writer.Write<int32_t>(model.dim);
  writer.Write<int32_t>(model.vocab_size());
  writer.WriteVector(model.input.data);
  writer.WriteVector(model.output.data);
  if (!out) throw Error("failed writing " + path);
}

EmbeddingModel LoadEmbeddingModel(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + sizeof(magic), kMagic)) {
    throw Error(path + " is not an embedding model");
  }
  BinaryReader reader(in);
  if (reader.Read<int32_t>() != 1) throw Error("unsupported embedding model version");
  EmbeddingModel model;
  model.flavor = reader.Read<int32_t>() == 0 ? EmbeddingFlavor::kSkipGram
                                             : EmbeddingFlavor::kCbow;
  model.window = reader.Read<int32_t>();
  model.dim = reader.Read<int32_t>();
  const int vocab = reader.Read<int32_t>();
  model.input = Matrix(vocab, model.dim);
  model.output = Matrix(vocab, model.dim);
  model.input.data = reader.ReadVector<double>();
  model.output.data = reader.ReadVector<double>();
  if (model.input.data.size() != static_cast<size_t>(vocab) * model.dim ||
      model.output.data.size() != model.input.data.size()) {
    throw Error("corrupt embedding model " + path);
  }
  return model;
}

}  // namespace semlm
