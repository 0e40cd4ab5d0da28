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

#ifndef SEMLM_PIPELINE_H_
#define SEMLM_PIPELINE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "semlm/cloze.h"
#include "semlm/seqbuild.h"
#include "semlm/vocab.h"

namespace semlm {

inline constexpr char kToolkitVersion[] = "1.0.0";

// Everything a subcommand may need. Artifacts live in `out`, named by
// sequence kind and model, so FC and EC runs can share a work directory.
struct PipelineConfig {
  std::string input;    // JSON-Lines corpus
  std::string mapping;  // FrameNet mapping TSV; bundled table when empty
  std::string out = "semlm_out";
  std::vector<SequenceKind> kinds = {SequenceKind::kFrameChain};
  int min_count = kDefaultMinCount;
  std::vector<std::string> models;
  std::optional<int> dim;
  std::optional<int> window;
  std::optional<int> epochs;
  uint64_t seed = 1;
  bool discourse = true;
  bool framenet_mapping = true;
  int recall_k = kDefaultRecallK;
  bool cloze_frames_only = false;
  bool sg_pseudo_perplexity = false;
  std::string queries;  // feature query file
  int heldout_percent = 10;
};

// Model names accepted by --model, in report column order.
const std::vector<std::string> &KnownModels();

// True when the document goes to the held-out split.
bool IsHeldOut(const std::string &doc_id, int heldout_percent);

void RunSequences(const PipelineConfig &config, std::ostream &log);
void RunVocab(const PipelineConfig &config, std::ostream &log);
void RunTrain(const PipelineConfig &config, std::ostream &log);
void RunPerplexity(const PipelineConfig &config, std::ostream &log);
void RunCloze(const PipelineConfig &config, std::ostream &log);
void RunFeatures(const PipelineConfig &config, std::ostream &log);

// Dispatches on the subcommand name; throws Error on failure, in which case
// no artifact of the failing stage is left behind.
void RunSubcommand(const std::string &name, const PipelineConfig &config,
                   std::ostream &log);

}  // namespace semlm

#endif  // SEMLM_PIPELINE_H_
