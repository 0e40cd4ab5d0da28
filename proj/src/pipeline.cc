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

#include "semlm/pipeline.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "semlm/annotations.h"
#include "semlm/embedding.h"
#include "semlm/features.h"
#include "semlm/log_bilinear.h"
#include "semlm/ngram.h"
#include "semlm/ordered_pmi.h"
#include "semlm/report.h"
#include "semlm/unitgen.h"

namespace semlm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kManifest[] = "manifest.json";
constexpr char kPartial[] = ".partial";

std::string Tag(SequenceKind kind) {
  return kind == SequenceKind::kFrameChain ? "fc" : "ec";
}

std::string SequencePath(SequenceKind kind, const std::string &split) {
  return Tag(kind) + "." + split + ".seq";
}
std::string VocabPath(SequenceKind kind) { return Tag(kind) + ".vocab.tsv"; }
std::string ModelPath(SequenceKind kind, const std::string &model) {
  return Tag(kind) + "." + model + ".model";
}

json ReadManifest(const fs::path &dir) {
  std::ifstream in(dir / kManifest);
  if (!in) return json::object();
  return json::parse(in);
}

// Collects the artifacts of one stage under temporary names and publishes
// them, with the updated manifest, only on Commit().
class Stage {
 public:
  Stage(const PipelineConfig &config, std::string name)
      : dir_(config.out), name_(std::move(name)) {
    fs::create_directories(dir_);
    entry_["seed"] = config.seed;
    entry_["config"] = json::object();
    entry_["inputs"] = json::object();
  }
  Stage(const Stage &) = delete;
  Stage &operator=(const Stage &) = delete;

  ~Stage() {
    if (committed_) return;
    std::error_code ignored;
    for (const auto &file : files_) fs::remove(Partial(file), ignored);
    fs::remove(Partial(kManifest), ignored);
  }

  std::string Output(const std::string &file) {
    files_.push_back(file);
    return Partial(file).string();
  }

  // Records an artifact produced by an earlier stage.
  void WorkInput(const std::string &file) {
    const fs::path path = dir_ / file;
    if (!fs::exists(path)) {
      throw Error("missing " + path.string() + "; run the earlier stage first");
    }
    entry_["inputs"][file] = ChecksumOfFile(path.string());
  }

  // Records an external input by the path it was given as.
  void ExternalInput(const std::string &role, const std::string &path) {
    if (!fs::exists(path)) throw Error(role + " not found: " + path);
    entry_["inputs"][role] = {{"path", path},
                              {"checksum", ChecksumOfFile(path)}};
  }

  json &config() { return entry_["config"]; }
  fs::path WorkPath(const std::string &file) const { return dir_ / file; }

  void Commit() {
    json outputs = json::object();
    for (const auto &file : files_) {
      outputs[file] = ChecksumOfFile(Partial(file).string());
    }
    entry_["outputs"] = outputs;
    json manifest = ReadManifest(dir_);
    manifest["toolkit"] = "semlm";
    manifest["version"] = kToolkitVersion;
    manifest["stages"][name_] = entry_;
    WriteTextFile(Partial(kManifest).string(), manifest.dump(2) + "\n");
    for (const auto &file : files_) fs::rename(Partial(file), dir_ / file);
    fs::rename(Partial(kManifest), dir_ / kManifest);
    committed_ = true;
  }

 private:
  fs::path Partial(const std::string &file) const {
    return dir_ / (file + kPartial);
  }

  fs::path dir_;
  std::string name_;
  json entry_;
  std::vector<std::string> files_;
  bool committed_ = false;
};

std::string RowLabel(SequenceKind kind, bool framenet_mapping, bool discourse) {
  std::string label(SequenceKindName(kind));
  if (!framenet_mapping) label += "-FM";
  if (!discourse) label += " w/o DIS";
  return label;
}

// Sequences, vocabulary and encoded splits of one kind.
struct KindData {
  SequenceKind kind;
  std::string row;
  Vocabulary vocab;
  EncodedCorpus train;
  EncodedCorpus heldout;
};

KindData LoadKind(Stage &stage, const PipelineConfig &config,
                  SequenceKind kind) {
  KindData data{kind, {}, {}, {}, {}};
  const json manifest = ReadManifest(config.out);
  const std::string seq_stage = "sequences." + Tag(kind);
  if (!manifest.contains("stages") || !manifest["stages"].contains(seq_stage)) {
    throw Error("no " + Tag(kind) + " sequences in " + config.out +
                "; run `semlm sequences` first");
  }
  data.row = manifest["stages"][seq_stage]["config"]["row"].get<std::string>();
  stage.WorkInput(VocabPath(kind));
  stage.WorkInput(SequencePath(kind, "train"));
  stage.WorkInput(SequencePath(kind, "heldout"));
  data.vocab = Vocabulary::Load(stage.WorkPath(VocabPath(kind)).string());
  data.train = EncodeCorpus(
      ReadSequencesFile(stage.WorkPath(SequencePath(kind, "train")).string()),
      data.vocab);
  data.heldout = EncodeCorpus(
      ReadSequencesFile(stage.WorkPath(SequencePath(kind, "heldout")).string()),
      data.vocab);
  return data;
}

void CheckModelName(const std::string &model) {
  for (const auto &known : KnownModels()) {
    if (known == model) return;
  }
  throw Error("unknown model '" + model + "'");
}

const std::vector<std::string> &RequireModels(const PipelineConfig &config) {
  if (config.models.empty()) throw Error("--model is required");
  for (const auto &model : config.models) CheckModelName(model);
  return config.models;
}

int NGramOrder(const std::string &model) {
  if (model == "uni") return 1;
  if (model == "bg") return 2;
  if (model == "tri") return 3;
  return 0;
}

TrainConfig NeuralConfig(const PipelineConfig &config, const std::string &model) {
  TrainConfig train = model == "sg"     ? TrainConfig::SkipGramDefaults()
                      : model == "cbow" ? TrainConfig::CbowDefaults()
                                        : TrainConfig::LogBilinearDefaults();
  if (config.dim) train.dim = *config.dim;
  if (config.window) train.window = *config.window;
  if (config.epochs) train.epochs = *config.epochs;
  train.seed = config.seed;
  train.Validate();
  return train;
}

// A trained model loaded from the work directory with the views the
// evaluation stages need. Not movable: the views point into it.
struct LoadedModel {
  std::string name;
  std::optional<NGramModel> ngram;
  std::optional<EmbeddingModel> embedding;
  std::optional<LogBilinearModel> log_bilinear;
  std::optional<OrderedPmiModel> ordered_pmi;
  std::unique_ptr<LanguageModel> owned_lm;
  const LanguageModel *lm = nullptr;  // null when the model has no causal form
  std::unique_ptr<GapScorer> scorer;
  const Matrix *embeddings = nullptr;
};

std::unique_ptr<LoadedModel> LoadModel(Stage &stage, const PipelineConfig &config,
                                       const KindData &data,
                                       const std::string &name) {
  const std::string file = ModelPath(data.kind, name);
  stage.WorkInput(file);
  const std::string path = stage.WorkPath(file).string();
  auto loaded = std::make_unique<LoadedModel>();
  loaded->name = name;
  int vocab_size = 0;
  if (NGramOrder(name) > 0) {
    loaded->ngram = NGramModel::LoadFile(path);
    loaded->lm = &*loaded->ngram;
    vocab_size = loaded->ngram->vocab_size();
  } else if (name == "sg" || name == "cbow") {
    loaded->embedding = LoadEmbeddingModel(path);
    if (name == "cbow") {
      loaded->owned_lm = std::make_unique<CbowLanguageModel>(*loaded->embedding);
    } else if (config.sg_pseudo_perplexity) {
      loaded->owned_lm = std::make_unique<SkipGramPseudoModel>(*loaded->embedding);
    }
    loaded->lm = loaded->owned_lm.get();
    if (name == "sg") {
      loaded->scorer = std::make_unique<SkipGramScorer>(*loaded->embedding);
    }
    loaded->embeddings = &loaded->embedding->input;
    vocab_size = loaded->embedding->vocab_size();
  } else if (name == "lb") {
    loaded->log_bilinear = LoadLogBilinearModel(path);
    loaded->owned_lm =
        std::make_unique<LogBilinearLanguageModel>(*loaded->log_bilinear);
    loaded->lm = loaded->owned_lm.get();
    loaded->embeddings = &loaded->log_bilinear->target;
    vocab_size = loaded->log_bilinear->vocab_size();
  } else {
    loaded->ordered_pmi = LoadOrderedPmiModel(path);
    loaded->scorer = std::make_unique<OrderedPmiScorer>(*loaded->ordered_pmi);
    vocab_size = loaded->ordered_pmi->vocab_size;
  }
  if (vocab_size != data.vocab.size()) {
    throw Error(path + " was trained on a different vocabulary");
  }
  if (!loaded->scorer && loaded->lm != nullptr) {
    loaded->scorer = std::make_unique<LanguageModelScorer>(*loaded->lm);
  }
  return loaded;
}

std::string Format(const char *format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

}  // namespace

const std::vector<std::string> &KnownModels() {
  static const std::vector<std::string> models = {"uni", "bg",   "tri", "sg",
                                                  "cbow", "lb", "op"};
  return models;
}

bool IsHeldOut(const std::string &doc_id, int heldout_percent) {
  Checksum hash;
  hash.Update(doc_id);
  return static_cast<int>(hash.value() % 100) < heldout_percent;
}

void RunSequences(const PipelineConfig &config, std::ostream &log) {
  if (config.input.empty()) throw Error("--input is required");
  if (!fs::exists(config.input)) throw Error("input not found: " + config.input);
  MappingTable custom;
  if (!config.mapping.empty()) custom = MappingTable::FromFile(config.mapping);
  const MappingTable &table =
      config.mapping.empty() ? MappingTable::Bundled() : custom;
  const UnitOptions unit_options{config.framenet_mapping};
  const SequenceOptions seq_options{config.discourse};

  const size_t n = config.kinds.size();
  std::vector<std::vector<SemSequence>> train(n), heldout(n);
  int64_t documents = 0;
  DocumentReader reader(config.input);
  while (std::optional<AnnotatedDocument> doc = reader.Next()) {
    ++documents;
    const DocumentUnits units = GenerateUnits(*doc, table, unit_options);
    const bool held = IsHeldOut(doc->doc_id, config.heldout_percent);
    for (size_t k = 0; k < n; ++k) {
      auto &split = held ? heldout[k] : train[k];
      if (config.kinds[k] == SequenceKind::kFrameChain) {
        if (auto seq = BuildFrameChain(*doc, units, seq_options)) {
          split.push_back(std::move(*seq));
        }
      } else {
        for (auto &seq : BuildEntityChains(*doc, units, seq_options)) {
          split.push_back(std::move(seq));
        }
      }
    }
  }
  for (size_t k = 0; k < n; ++k) {
    const SequenceKind kind = config.kinds[k];
    if (train[k].empty()) {
      throw Error("no " + Tag(kind) + " training sequences in " + config.input);
    }
    Stage stage(config, "sequences." + Tag(kind));
    stage.ExternalInput("input", config.input);
    if (!config.mapping.empty()) stage.ExternalInput("mapping", config.mapping);
    json &c = stage.config();
    c["kind"] = std::string(SequenceKindName(kind));
    c["discourse"] = config.discourse;
    c["framenet_mapping"] = config.framenet_mapping;
    c["heldout_percent"] = config.heldout_percent;
    c["row"] = RowLabel(kind, config.framenet_mapping, config.discourse);
    c["documents"] = documents;
    c["train_sequences"] = train[k].size();
    c["heldout_sequences"] = heldout[k].size();
    for (const char *split : {"train", "heldout"}) {
      const auto &seqs = std::string(split) == "train" ? train[k] : heldout[k];
      std::ofstream out(stage.Output(SequencePath(kind, split)), std::ios::binary);
      WriteSequences(out, seqs);
      if (!out) throw Error("failed writing sequences");
    }
    stage.Commit();
    log << Tag(kind) << ": " << train[k].size() << " train / "
        << heldout[k].size() << " held-out sequences from " << documents
        << " documents\n";
  }
}

void RunVocab(const PipelineConfig &config, std::ostream &log) {
  for (SequenceKind kind : config.kinds) {
    Stage stage(config, "vocab." + Tag(kind));
    const std::string train_file = SequencePath(kind, "train");
    stage.WorkInput(train_file);
    const std::vector<SemSequence> train =
        ReadSequencesFile(stage.WorkPath(train_file).string());
    const Vocabulary vocab = Vocabulary::Build(train, config.min_count);
    stage.config()["min_count"] = config.min_count;
    vocab.Save(stage.Output(VocabPath(kind)));
    stage.Commit();
    log << Tag(kind) << ": vocabulary of " << vocab.size() << " tokens\n";
  }
}

void RunTrain(const PipelineConfig &config, std::ostream &log) {
  const auto &models = RequireModels(config);
  for (SequenceKind kind : config.kinds) {
    for (const std::string &name : models) {
      Stage stage(config, "train." + Tag(kind) + "." + name);
      const KindData data = LoadKind(stage, config, kind);
      const int vocab_size = data.vocab.size();
      json &c = stage.config();
      c["model"] = name;
      const std::string model_file = ModelPath(kind, name);
      if (const int order = NGramOrder(name); order > 0) {
        NGramModel model = NGramModel::Train(data.train, vocab_size, {order, {}});
        model.Save(stage.Output(model_file), false);
        model.Save(stage.Output(Tag(kind) + "." + name + ".arpa"), true);
        c["order"] = order;
      } else if (name == "op") {
        OrderedPmiModel model =
            TrainOrderedPmi(data.train, vocab_size, data.vocab.eos_id());
        SaveOrderedPmiModel(model, stage.Output(model_file));
        c["alpha"] = model.alpha;
      } else {
        const TrainConfig train = NeuralConfig(config, name);
        c["dim"] = train.dim;
        c["window"] = train.window;
        c["epochs"] = train.epochs;
        c["learning_rate"] = train.learning_rate;
        c["negatives"] = train.negatives;
        std::ofstream dump;
        if (name == "lb") {
          LogBilinearModel model = TrainLogBilinear(data.train, vocab_size, train);
          SaveLogBilinearModel(model, stage.Output(model_file));
          dump.open(stage.Output(Tag(kind) + ".lb.vec"), std::ios::binary);
          WriteLogBilinearDump(dump, model, data.vocab);
        } else {
          EmbeddingModel model = name == "sg"
                                     ? TrainSkipGram(data.train, vocab_size, train)
                                     : TrainCbow(data.train, vocab_size, train);
          SaveEmbeddingModel(model, stage.Output(model_file));
          dump.open(stage.Output(Tag(kind) + "." + name + ".vec"),
                    std::ios::binary);
          WriteEmbeddingDump(dump, model.input, data.vocab);
        }
        dump.close();
        if (!dump) throw Error("failed writing embedding dump");
      }
      stage.Commit();
      log << Tag(kind) << ": trained " << name << "\n";
    }
  }
}

void RunPerplexity(const PipelineConfig &config, std::ostream &log) {
  const auto &models = RequireModels(config);
  Stage stage(config, "perplexity");
  std::vector<KindData> kinds;
  for (SequenceKind kind : config.kinds) {
    kinds.push_back(LoadKind(stage, config, kind));
  }
  std::vector<std::unique_ptr<LoadedModel>> loaded;
  std::vector<ReportRow> rows;
  json model_ids = json::object();
  for (const KindData &data : kinds) {
    if (data.heldout.empty()) throw Error(data.row + " has no held-out sequences");
    ReportRow row{data.row, &data.heldout, data.vocab.eos_id(),
                  data.vocab.corpus_checksum(), {}};
    for (const std::string &name : models) {
      if (name == "op") throw Error("op ranks candidates but defines no perplexity");
      if (name == "sg" && !config.sg_pseudo_perplexity) {
        throw Error("sg has no left-to-right distribution; pass --sg-pseudo "
                    "for its non-probabilistic reading");
      }
      loaded.push_back(LoadModel(stage, config, data, name));
      const LoadedModel &model = *loaded.back();
      row.models.emplace_back(model.lm->name(), model.lm);
      model_ids[data.row][model.lm->name()] = ModelPath(data.kind, name);
    }
    rows.push_back(std::move(row));
  }
  PerplexityTable table = PerplexityReport(rows);
  table.metadata()["seed"] = config.seed;
  table.metadata()["models"] = model_ids;
  table.metadata()["version"] = kToolkitVersion;
  WriteTextFile(stage.Output("perplexity.json"), table.ToJson().dump(2) + "\n");
  const std::string text = table.ToText();
  WriteTextFile(stage.Output("perplexity.txt"), text);
  stage.config()["models"] = models;
  stage.Commit();
  log << text;
}

void RunCloze(const PipelineConfig &config, std::ostream &log) {
  const auto &models = RequireModels(config);
  if (config.recall_k < 1) throw Error("--recall-k must be positive");
  Stage stage(config, "cloze");
  json report;
  report["seed"] = config.seed;
  report["recall_k"] = config.recall_k;
  report["frames_only"] = config.cloze_frames_only;
  report["version"] = kToolkitVersion;
  std::ostringstream text;
  text << "# seed: " << config.seed << "\n";
  text << "# cells: MRR / Recall@" << config.recall_k << "\n";
  for (SequenceKind kind : config.kinds) {
    const KindData data = LoadKind(stage, config, kind);
    std::function<bool(TokenId)> eligible;
    if (config.cloze_frames_only) {
      eligible = [&data](TokenId id) {
        const VocabKind k = data.vocab.kind(id);
        return k == VocabKind::kFrameSense || k == VocabKind::kFrameArg;
      };
    }
    const std::vector<ClozeInstance> instances =
        MakeClozeSet(data.heldout, data.vocab.eos_id(), config.seed, eligible);
    report["rows"][data.row]["instances"] = instances.size();
    report["rows"][data.row]["corpus_checksum"] = data.vocab.corpus_checksum();
    text << data.row << "  (corpus " << data.vocab.corpus_checksum() << ", "
         << instances.size() << " instances)\n";
    for (const std::string &name : models) {
      const std::unique_ptr<LoadedModel> model = LoadModel(stage, config, data, name);
      const std::vector<int64_t> ranks =
          ClozeRanks(*model->scorer, instances, data.vocab.counts());
      const ClozeReport result = ScoreClozeRanks(ranks, config.recall_k);
      json cell = ClozeReportToJson(result);
      cell["model"] = ModelPath(kind, name);
      report["rows"][data.row]["models"][name] = cell;
      text << "  " << std::left << std::setw(6) << name
           << Format("%.4f", result.mrr) << " / " << Format("%.4f", result.recall)
           << "  " << ModelPath(kind, name) << "\n";
    }
  }
  WriteTextFile(stage.Output("cloze.json"), report.dump(2) + "\n");
  WriteTextFile(stage.Output("cloze.txt"), text.str());
  stage.config()["models"] = models;
  stage.config()["recall_k"] = config.recall_k;
  stage.config()["frames_only"] = config.cloze_frames_only;
  stage.Commit();
  log << text.str();
}

void RunFeatures(const PipelineConfig &config, std::ostream &log) {
  const auto &models = RequireModels(config);
  if (config.queries.empty()) throw Error("--queries is required");
  const std::vector<FeatureQuery> queries = ReadFeatureQueries(config.queries);
  for (SequenceKind kind : config.kinds) {
    for (const std::string &name : models) {
      Stage stage(config, "features." + Tag(kind) + "." + name);
      stage.ExternalInput("queries", config.queries);
      const KindData data = LoadKind(stage, config, kind);
      const std::unique_ptr<LoadedModel> model = LoadModel(stage, config, data, name);
      const FeatureModel features{ModelPath(kind, name), &data.vocab,
                                  model->scorer.get(), model->lm,
                                  model->embeddings};
      std::vector<FeatureRecord> records;
      for (const FeatureQuery &query : queries) {
        if (kind == SequenceKind::kEntityCentered) {
          records.push_back(
              CorefPairFeatures(features, query.first, query.second,
                                query.marker ? std::optional<std::string_view>(
                                                   *query.marker)
                                             : std::nullopt));
        } else {
          if (!query.marker) throw Error("discourse queries need a marker");
          records.push_back(DiscourseFeatures(features, query.first,
                                              query.second, *query.marker));
        }
      }
      std::ofstream out(
          stage.Output(Tag(kind) + "." + name + ".features.jsonl"),
          std::ios::binary);
      WriteFeatureRecords(out, records);
      out.close();
      if (!out) throw Error("failed writing features");
      stage.config()["model"] = name;
      stage.config()["records"] = records.size();
      stage.Commit();
      log << Tag(kind) << ": " << records.size() << " " << name
          << " feature records\n";
    }
  }
}

void RunSubcommand(const std::string &name, const PipelineConfig &config,
                   std::ostream &log) {
  if (name == "sequences") return RunSequences(config, log);
  if (name == "vocab") return RunVocab(config, log);
  if (name == "train") return RunTrain(config, log);
  if (name == "perplexity") return RunPerplexity(config, log);
  if (name == "cloze") return RunCloze(config, log);
  if (name == "features") return RunFeatures(config, log);
  throw Error("unknown subcommand '" + name + "'");
}

}  // namespace semlm
