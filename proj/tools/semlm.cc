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

// Command-line entry point: semlm <subcommand> [flags].

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semlm/common.h"
#include "semlm/parallel.h"
#include "semlm/pipeline.h"

namespace {

struct Flags {
  semlm::PipelineConfig config;
  std::vector<std::string> kinds = {"fc"};
  int dim = 0;
  int window = 0;
  int epochs = 0;
  int threads = 0;
};

void AddFlags(CLI::App *sub, Flags &flags) {
  semlm::PipelineConfig &c = flags.config;
  sub->add_option("--input", c.input, "JSON-Lines annotated corpus");
  sub->add_option("--mapping", c.mapping,
                  "VerbNet-to-FrameNet mapping TSV (default: bundled)");
  sub->add_option("--out", c.out, "work directory for artifacts")
      ->capture_default_str();
  sub->add_option("--kind", flags.kinds, "sequence kinds")
      ->delimiter(',')
      ->check(CLI::IsMember({"fc", "ec"}))
      ->capture_default_str();
  sub->add_option("--min-count", c.min_count, "vocabulary frequency threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("--model", c.models, "models")
      ->delimiter(',')
      ->check(CLI::IsMember(semlm::KnownModels()));
  sub->add_option("--dim", flags.dim, "embedding dimension")
      ->check(CLI::PositiveNumber);
  sub->add_option("--window", flags.window, "context window")
      ->check(CLI::PositiveNumber);
  sub->add_option("--epochs", flags.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "random seed")->capture_default_str();
  sub->add_flag("--no-discourse{false}", c.discourse,
                "drop discourse markers from sequences");
  sub->add_flag("--no-framenet-mapping{false}", c.framenet_mapping,
                "keep PropBank senses");
  sub->add_option("--recall-k", c.recall_k, "cutoff for Recall@k")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_flag("--cloze-frames-only", c.cloze_frames_only,
                "only remove frame tokens in the cloze test");
  sub->add_flag("--sg-pseudo", c.sg_pseudo_perplexity,
                "report the non-probabilistic skip-gram pseudo-perplexity");
  sub->add_option("--queries", c.queries,
                  "feature queries, tab-separated (fa1 fa2 [dis] | f1 f2 dis)");
  sub->add_option("--heldout-percent", c.heldout_percent,
                  "share of documents held out, by document hash")
      ->check(CLI::Range(0, 100))
      ->capture_default_str();
  sub->add_option("--threads", flags.threads, "OpenMP threads (0: default)");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Semantic language models over frame and entity chains"};
  app.set_version_flag("--version", semlm::kToolkitVersion);
  app.require_subcommand(1);
  Flags flags;
  const std::vector<std::pair<const char *, const char *>> commands = {
      {"sequences", "build and dump semantic sequences"},
      {"vocab", "build the vocabulary from the training split"},
      {"train", "train language models"},
      {"perplexity", "held-out perplexity report"},
      {"cloze", "narrative cloze test"},
      {"features", "export coreference or discourse features"},
  };
  for (const auto &[name, help] : commands) AddFlags(app.add_subcommand(name, help), flags);
  CLI11_PARSE(app, argc, argv);

  semlm::PipelineConfig &config = flags.config;
  config.kinds.clear();
  for (const auto &kind : flags.kinds) {
    config.kinds.push_back(kind == "fc" ? semlm::SequenceKind::kFrameChain
                                        : semlm::SequenceKind::kEntityCentered);
  }
  if (flags.dim > 0) config.dim = flags.dim;
  if (flags.window > 0) config.window = flags.window;
  if (flags.epochs > 0) config.epochs = flags.epochs;
  if (flags.threads > 0) semlm::SetThreads(flags.threads);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    semlm::RunSubcommand(name, config, std::cout);
  } catch (const std::exception &e) {
    std::cerr << "semlm " << name << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
