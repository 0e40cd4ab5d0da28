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

#include "semlm/log_bilinear.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "semlm/serialize.h"
#include "semlm/vocab.h"

namespace semlm {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'M', 'L', 'M', 'L', 'B', '1'};

size_t UsedSlots(const LogBilinearModel &model, size_t history) {
  return std::min<size_t>(history, model.window);
}

}  // namespace

bool LogBilinearModel::AllFinite() const {
  return target.AllFinite() && context.AllFinite() && position.AllFinite() &&
         std::all_of(bias.begin(), bias.end(),
                     [](double b) { return std::isfinite(b); });
}

std::vector<double> LbContextVector(const LogBilinearModel &model,
                                    std::span<const TokenId> history) {
  std::vector<double> u(model.dim, 0.0);
  const size_t used = UsedSlots(model, history.size());
  for (size_t i = 0; i < used; ++i) {
    auto q = model.position.row(static_cast<int>(i));
    auto v = model.context.row(history[history.size() - 1 - i]);
    for (int k = 0; k < model.dim; ++k) u[k] += q[k] * v[k];
  }
  return u;
}

double NceLoss(const LogBilinearModel &model, std::span<const TokenId> history,
               TokenId target, std::span<const TokenId> noise,
               std::span<const double> noise_probs, LogBilinearGradient *grad) {
  const std::vector<double> u = LbContextVector(model, history);
  const double log_k = std::log(static_cast<double>(noise.size()));
  auto delta = [&](TokenId x) {
    return Dot(model.target.row(x), u) + model.bias[x] -
           (log_k + std::log(noise_probs[x]));
  };

  std::vector<double> grad_u;
  if (grad != nullptr) {
    grad->target.Reset(model.dim);
    grad->context.Reset(model.dim);
    grad->bias.clear();
    grad->position = Matrix(model.window, model.dim);
    grad_u.assign(model.dim, 0.0);
  }
  auto accumulate = [&](TokenId x, double g) {
    Axpy(g, u, grad->target.Row(x));
    auto it = std::find_if(grad->bias.begin(), grad->bias.end(),
                           [x](const auto &entry) { return entry.first == x; });
    if (it == grad->bias.end()) {
      grad->bias.emplace_back(x, g);
    } else {
      it->second += g;
    }
    Axpy(g, model.target.row(x), grad_u);
  };

  const double d_target = delta(target);
  double loss = -LogSigmoid(d_target);
  if (grad != nullptr) accumulate(target, Sigmoid(d_target) - 1.0);
  for (TokenId n : noise) {
    const double d_noise = delta(n);
    loss -= LogSigmoid(-d_noise);
    if (grad != nullptr) accumulate(n, Sigmoid(d_noise));
  }

  if (grad != nullptr) {
    const size_t used = UsedSlots(model, history.size());
    for (size_t i = 0; i < used; ++i) {
      const TokenId c = history[history.size() - 1 - i];
      auto q = model.position.row(static_cast<int>(i));
      auto v = model.context.row(c);
      auto gq = grad->position.row(static_cast<int>(i));
      auto gv = grad->context.Row(c);
      for (int k = 0; k < model.dim; ++k) {
        gv[k] += grad_u[k] * q[k];
        gq[k] += grad_u[k] * v[k];
      }
    }
  }
  return loss;
}

LogBilinearModel TrainLogBilinear(const EncodedCorpus &corpus, int vocab_size,
                                  const TrainConfig &config,
                                  std::vector<double> *epoch_losses) {
  config.Validate();
  size_t tokens = 0;
  for (const EncodedSequence &seq : corpus) {
    for (TokenId id : seq) {
      if (id < 0 || id >= vocab_size) throw Error("token id out of vocabulary");
    }
    tokens += seq.size();
  }
  if (tokens == 0) throw Error("cannot train on an empty corpus");

  std::mt19937_64 rng(config.seed);
  LogBilinearModel model;
  model.window = config.window;
  model.dim = config.dim;
  model.target = Matrix(vocab_size, config.dim);
  model.context = Matrix(vocab_size, config.dim);
  model.bias.assign(vocab_size, 0.0);
  model.position = Matrix(config.window, config.dim);
  const double scale = 0.5 / config.dim;
  for (double &v : model.context.data) {
    v = (2.0 * UnitDouble(rng()) - 1.0) * scale;
  }
  // Position weights start at one: with zero targets and zero weights the
  // gradient of every parameter would vanish.
  std::fill(model.position.data.begin(), model.position.data.end(), 1.0);

  NoiseSampler noise(corpus, vocab_size, 1.0);
  const double total_steps = static_cast<double>(config.epochs) * tokens;
  double step = 0.0;
  LogBilinearGradient grad;
  std::vector<TokenId> samples(config.negatives);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    int64_t events = 0;
    for (const EncodedSequence &seq : corpus) {
      std::span<const TokenId> ids(seq);
      for (size_t t = 0; t < ids.size(); ++t, step += 1.0) {
        const double rate = DecayedRate(config, step / total_steps);
        for (TokenId &n : samples) n = noise.Sample(rng);
        loss += NceLoss(model, ids.first(t), ids[t], samples, noise.probs(),
                        &grad);
        ++events;
        for (size_t i = 0; i < grad.target.size(); ++i) {
          Axpy(-rate, grad.target.values(i), model.target.row(grad.target.id(i)));
        }
        for (size_t i = 0; i < grad.context.size(); ++i) {
          Axpy(-rate, grad.context.values(i),
               model.context.row(grad.context.id(i)));
        }
        for (const auto &[id, g] : grad.bias) model.bias[id] -= rate * g;
        const size_t used = UsedSlots(model, t);
        for (size_t i = 0; i < used; ++i) {
          Axpy(-rate, grad.position.row(static_cast<int>(i)),
               model.position.row(static_cast<int>(i)));
        }
      }
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(events > 0 ? loss / events : 0.0);
    }
  }
  return model;
}

void LbLogProbAll(const LogBilinearModel &model,
                  std::span<const TokenId> history, std::span<double> out) {
  const std::vector<double> u = LbContextVector(model, history);
  const int vocab = model.vocab_size();
  for (TokenId w = 0; w < vocab; ++w) {
    out[w] = Dot(model.target.row(w), u) + model.bias[w];
  }
  const double log_z = LogSumExp(out.first(vocab));
  for (TokenId w = 0; w < vocab; ++w) out[w] -= log_z;
}

double LbCondProb(const LogBilinearModel &model,
                  std::span<const TokenId> history, TokenId token) {
  std::vector<double> all(model.vocab_size());
  LbLogProbAll(model, history, all);
  return std::exp(all[token]);
}

double LogBilinearLanguageModel::LogProb(std::span<const TokenId> history,
                                         TokenId token) const {
  std::vector<double> all(model_.vocab_size());
  LbLogProbAll(model_, history, all);
  return all[token];
}

void LogBilinearLanguageModel::LogProbAll(std::span<const TokenId> history,
                                          std::span<double> out) const {
  LbLogProbAll(model_, history, out);
}

void WriteLogBilinearDump(std::ostream &out, const LogBilinearModel &model,
                          const Vocabulary &vocab) {
  if (model.vocab_size() != vocab.size()) {
    throw Error("model does not match the vocabulary");
  }
  auto block = [&](const Matrix &m) {
    out << m.rows << ' ' << m.cols << '\n';
    for (TokenId w = 0; w < m.rows; ++w) {
      out << vocab.token(w);
      for (double v : m.row(w)) out << ' ' << ExactDouble(v);
      out << '\n';
    }
  };
  block(model.target);
  out << "# context\n";
  block(model.context);
  out << "# bias\n";
  for (TokenId w = 0; w < model.vocab_size(); ++w) {
    out << vocab.token(w) << ' ' << ExactDouble(model.bias[w]) << '\n';
  }
  out << "# position\n" << model.position.rows << ' ' << model.position.cols
      << '\n';
  for (int i = 0; i < model.position.rows; ++i) {
    out << i;
    for (double v : model.position.row(i)) out << ' ' << ExactDouble(v);
    out << '\n';
  }
}

void SaveLogBilinearModel(const LogBilinearModel &model,
                          const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  BinaryWriter writer(out);
  writer.Write<int32_t>(1);
  writer.Write<int32_t>(model.window);
  writer.Write<int32_t>(model.dim);
  writer.Write<int32_t>(model.vocab_size());
  writer.WriteVector(model.target.data);
  writer.WriteVector(model.context.data);
  writer.WriteVector(model.bias);
  writer.WriteVector(model.position.data);
  if (!out) throw Error("failed writing " + path);
}

LogBilinearModel LoadLogBilinearModel(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  if (!in || !std::equal(magic, magic + sizeof(magic), kMagic)) {
    throw Error(path + " is not a log-bilinear model");
  }
  BinaryReader reader(in);
  if (reader.Read<int32_t>() != 1) throw Error("unsupported log-bilinear model version");
  LogBilinearModel model;
  model.window = reader.Read<int32_t>();
  model.dim = reader.Read<int32_t>();
  const int vocab = reader.Read<int32_t>();
  model.target = Matrix(vocab, model.dim);
  model.context = Matrix(vocab, model.dim);
  model.position = Matrix(model.window, model.dim);
  model.target.data = reader.ReadVector<double>();
  model.context.data = reader.ReadVector<double>();
  model.bias = reader.ReadVector<double>();
  model.position.data = reader.ReadVector<double>();
  const size_t cells = static_cast<size_t>(vocab) * model.dim;
  if (model.target.data.size() != cells || model.context.data.size() != cells ||
      model.bias.size() != static_cast<size_t>(vocab) ||
      model.position.data.size() != static_cast<size_t>(model.window) * model.dim) {
    throw Error("corrupt log-bilinear model " + path);
  }
  return model;
}

}  // namespace semlm
