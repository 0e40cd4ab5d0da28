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

#include "semlm/unitgen.h"

#include <sstream>

#include "semlm/bundled_data.h"
#include "semlm/common.h"

namespace semlm {

namespace {

// Rendered symbols are whitespace-free so sequences can be dumped as
// space-separated tokens.
std::string Squash(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') c = '_';
  }
  return out;
}

}  // namespace

std::string FrameComponent::Render() const {
  std::string out = Squash(base);
  if (negated) out += "(not)";
  if (particle) out += "(" + Squash(*particle) + ")";
  if (secondary) out += "(" + Squash(*secondary) + ")";
  return out;
}

FrameSymbol FrameSymbol::Of(std::vector<FrameComponent> components) {
  FrameSymbol symbol;
  symbol.components = std::move(components);
  for (size_t i = 0; i < symbol.components.size(); ++i) {
    if (i > 0) symbol.rendered += '-';
    symbol.rendered += symbol.components[i].Render();
  }
  return symbol;
}

MappingTable MappingTable::Parse(std::string_view text) {
  MappingTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, '\t')) fields.push_back(field);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() ||
        fields[2].empty()) {
      throw Error("mapping table line " + std::to_string(line_number) +
                  ": expected lemma<TAB>vn_sense<TAB>frame");
    }
    table.Add(fields[0], fields[1], fields[2]);
  }
  return table;
}

MappingTable MappingTable::FromFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open mapping table " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const MappingTable &MappingTable::Bundled() {
  static const MappingTable bundled = Parse(BundledMappingText());
  return bundled;
}

void MappingTable::Add(std::string lemma, std::string vn_sense,
                       std::string frame) {
  entries_[{std::move(lemma), std::move(vn_sense)}] = std::move(frame);
}

std::optional<std::string> MappingTable::Lookup(
    std::string_view lemma, std::string_view vn_sense) const {
  auto it = entries_.find(std::pair<std::string, std::string>(lemma, vn_sense));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string MapToFrameNet(std::string_view lemma, std::string_view pb_sense,
                          const std::optional<std::string> &vn_sense,
                          const MappingTable &table) {
  if (vn_sense) {
    if (auto frame = table.Lookup(lemma, *vn_sense)) return *frame;
  }
  return std::string(pb_sense);
}

FrameComponent AugmentPredicate(const PredicateFrame &frame,
                                const AnnotatedDocument &doc,
                                std::string mapped_base) {
  FrameComponent component;
  component.base = std::move(mapped_base);

  const size_t next = static_cast<size_t>(frame.predicate_index) + 1;
  if (next < doc.tokens.size()) {
    const Token &token = doc.tokens[next];
    if ((token.pos == "IN" || token.pos == "RP") &&
        token.sentence_index == doc.tokens[frame.predicate_index].sentence_index) {
      component.particle = token.lemma;
    }
  }
  for (const ArgumentSpan &arg : frame.args) {
    if (arg.label == "AM-PRD" && !component.secondary) {
      // The span's last token stands in for its syntactic head.
      component.secondary = doc.tokens.at(arg.end).lemma;
    } else if (arg.label == "AM-NEG") {
      component.negated = true;
    }
  }
  return component;
}

std::vector<CompoundFrame> CompoundFrames(
    std::span<const PlacedComponent> components) {
  std::vector<CompoundFrame> out;
  std::vector<FrameComponent> pending;
  for (size_t i = 0; i < components.size(); ++i) {
    const PlacedComponent &current = components[i];
    const bool joins =
        !out.empty() && i > 0 &&
        current.sentence_index == components[i - 1].sentence_index &&
        current.predicate_index - components[i - 1].predicate_index <=
            kCompoundMaxGap;
    if (joins) {
      pending.push_back(current.component);
      out.back().members.push_back(i);
      out.back().symbol = FrameSymbol::Of(pending);
      continue;
    }
    pending = {current.component};
    CompoundFrame frame;
    frame.symbol = FrameSymbol::Of(pending);
    frame.members = {i};
    frame.anchor = current.predicate_index;
    frame.sentence_index = current.sentence_index;
    out.push_back(std::move(frame));
  }
  return out;
}

std::optional<ArgumentMatch> AlignMentionToArgument(
    const Mention &mention, std::span<const FrameRef> frames) {
  for (size_t f = 0; f < frames.size(); ++f) {
    const ArgumentSpan *best = nullptr;
    for (const ArgumentSpan &arg : frames[f].frame->args) {
      if (!arg.Contains(mention.head)) continue;
      if (best == nullptr || arg.end - arg.start < best->end - best->start) {
        best = &arg;
      }
    }
    if (best != nullptr) return ArgumentMatch{f, best->label};
  }
  return std::nullopt;
}

DocumentUnits GenerateUnits(const AnnotatedDocument &doc,
                            const MappingTable &table,
                            const UnitOptions &options) {
  static const MappingTable kEmpty;
  const MappingTable &mapping = options.framenet_mapping ? table : kEmpty;

  std::vector<PlacedComponent> placed;
  placed.reserve(doc.frames.size());
  for (const PredicateFrame &frame : doc.frames) {
    std::string base =
        MapToFrameNet(frame.lemma, frame.pb_sense, frame.vn_sense, mapping);
    placed.push_back({AugmentPredicate(frame, doc, std::move(base)),
                      frame.predicate_index,
                      doc.tokens.at(frame.predicate_index).sentence_index});
  }

  DocumentUnits units;
  units.compounds = CompoundFrames(placed);
  units.compound_of_frame.resize(doc.frames.size());
  for (size_t c = 0; c < units.compounds.size(); ++c) {
    for (size_t member : units.compounds[c].members) {
      units.compound_of_frame[member] = c;
    }
  }
  return units;
}

}  // namespace semlm
