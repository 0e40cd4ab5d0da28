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

#include "semlm/seqbuild.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "semlm/common.h"

namespace semlm {

std::string SemToken::Render() const {
  switch (kind) {
    case SemTokenKind::kFrame:
      return text;
    case SemTokenKind::kFrameArg:
      return text + "#" + label;
    case SemTokenKind::kDisc: {
      std::string marker = text;
      std::replace(marker.begin(), marker.end(), ' ', '_');
      return std::string(kDiscPrefix) + marker;
    }
    case SemTokenKind::kPeriod:
      return std::string(kPeriodText);
    case SemTokenKind::kUnk:
      return std::string(kUnkText);
    case SemTokenKind::kEos:
      return std::string(kEosText);
  }
  return text;
}

SemToken SemToken::Parse(std::string_view rendered) {
  if (rendered.empty()) throw Error("empty sequence token");
  if (rendered == kPeriodText) return Period();
  if (rendered == kUnkText) return {SemTokenKind::kUnk, {}, {}};
  if (rendered == kEosText) return {SemTokenKind::kEos, {}, {}};
  if (rendered.starts_with(kDiscPrefix)) {
    std::string marker(rendered.substr(kDiscPrefix.size()));
    std::replace(marker.begin(), marker.end(), '_', ' ');
    return Disc(std::move(marker));
  }
  const size_t hash = rendered.rfind('#');
  if (hash != std::string_view::npos && hash > 0 &&
      hash + 1 < rendered.size()) {
    return FrameArg(std::string(rendered.substr(0, hash)),
                    std::string(rendered.substr(hash + 1)));
  }
  return Frame(std::string(rendered));
}

std::string_view SequenceKindName(SequenceKind kind) {
  return kind == SequenceKind::kFrameChain ? "FC" : "EC";
}

bool IsFrameRelated(const Connective &conn, std::span<const int> placed) {
  auto covers = [&placed](const TokenRange &range) {
    return std::any_of(placed.begin(), placed.end(),
                       [&range](int index) { return range.Contains(index); });
  };
  return covers(conn.arg1) && covers(conn.arg2);
}

namespace {

// Orders sequence items by textual position. A frame at index p precedes a
// marker starting at p; markers precede their sentence's period.
struct Item {
  int position = 0;
  int rank = 0;  // 0 frame/fa, 1 marker, 2 period
  size_t order = 0;
  SemToken token;
};

std::vector<SemToken> Arrange(std::vector<Item> items) {
  std::stable_sort(items.begin(), items.end(), [](const Item &a, const Item &b) {
    return std::tie(a.position, a.rank, a.order) <
           std::tie(b.position, b.rank, b.order);
  });
  std::vector<SemToken> tokens;
  tokens.reserve(items.size());
  for (Item &item : items) tokens.push_back(std::move(item.token));
  return tokens;
}

void AddMarkers(const AnnotatedDocument &doc, std::span<const int> placed,
                std::vector<Item> *items) {
  for (size_t c = 0; c < doc.connectives.size(); ++c) {
    const Connective &conn = doc.connectives[c];
    if (!IsFrameRelated(conn, placed)) continue;
    items->push_back({conn.span.start, 1, c, SemToken::Disc(conn.marker)});
  }
}

}  // namespace

std::optional<SemSequence> BuildFrameChain(const AnnotatedDocument &doc,
                                           const DocumentUnits &units,
                                           const SequenceOptions &options) {
  if (units.compounds.empty()) return std::nullopt;

  std::vector<Item> items;
  for (size_t c = 0; c < units.compounds.size(); ++c) {
    const CompoundFrame &frame = units.compounds[c];
    items.push_back({frame.anchor, 0, c, SemToken::Frame(frame.symbol.rendered)});
  }

  // One period after the last token of every sentence holding a frame.
  std::vector<int> sentence_end;
  for (const Token &token : doc.tokens) {
    if (token.sentence_index >= static_cast<int>(sentence_end.size())) {
      sentence_end.resize(token.sentence_index + 1, -1);
    }
    sentence_end[token.sentence_index] = token.index;
  }
  int last_sentence = -1;
  for (const CompoundFrame &frame : units.compounds) {
    if (frame.sentence_index == last_sentence) continue;
    last_sentence = frame.sentence_index;
    items.push_back({sentence_end.at(frame.sentence_index), 2, 0,
                     SemToken::Period()});
  }

  if (options.discourse) {
    std::vector<int> placed;
    for (const PredicateFrame &frame : doc.frames) {
      placed.push_back(frame.predicate_index);
    }
    AddMarkers(doc, placed, &items);
  }

  SemSequence seq;
  seq.doc_id = doc.doc_id;
  seq.kind = SequenceKind::kFrameChain;
  seq.tokens = Arrange(std::move(items));
  return seq;
}

std::vector<SemSequence> BuildEntityChains(const AnnotatedDocument &doc,
                                           const DocumentUnits &units,
                                           const SequenceOptions &options) {
  std::vector<FrameRef> refs;
  refs.reserve(doc.frames.size());
  for (size_t f = 0; f < doc.frames.size(); ++f) {
    refs.push_back(
        {&doc.frames[f], &units.compounds[units.compound_of_frame[f]].symbol});
  }

  std::vector<SemSequence> out;
  for (size_t c = 0; c < doc.chains.size(); ++c) {
    std::vector<Mention> mentions = doc.chains[c];
    std::stable_sort(mentions.begin(), mentions.end(),
                     [](const Mention &a, const Mention &b) {
                       return std::tie(a.start, a.head) < std::tie(b.start, b.head);
                     });

    std::vector<Item> items;
    std::vector<size_t> hosts;
    for (size_t m = 0; m < mentions.size(); ++m) {
      auto match = AlignMentionToArgument(mentions[m], refs);
      if (!match) continue;
      items.push_back({mentions[m].head, 0, m,
                       SemToken::FrameArg(refs[match->frame].symbol->rendered,
                                          match->label)});
      hosts.push_back(units.compound_of_frame[match->frame]);
    }
    if (items.size() < 2) continue;

    if (options.discourse) {
      std::sort(hosts.begin(), hosts.end());
      hosts.erase(std::unique(hosts.begin(), hosts.end()), hosts.end());
      std::vector<int> placed;
      for (size_t host : hosts) {
        for (size_t member : units.compounds[host].members) {
          placed.push_back(doc.frames[member].predicate_index);
        }
      }
      AddMarkers(doc, placed, &items);
    }

    SemSequence seq;
    seq.doc_id = doc.doc_id;
    seq.kind = SequenceKind::kEntityCentered;
    seq.chain_id = static_cast<int>(c);
    seq.tokens = Arrange(std::move(items));
    out.push_back(std::move(seq));
  }
  return out;
}

void WriteSequences(std::ostream &out, std::span<const SemSequence> sequences) {
  for (const SemSequence &seq : sequences) {
    out << "# doc_id=" << seq.doc_id << " kind=" << SequenceKindName(seq.kind);
    if (seq.chain_id) out << " chain_id=" << *seq.chain_id;
    out << '\n';
    for (size_t i = 0; i < seq.tokens.size(); ++i) {
      if (i > 0) out << ' ';
      out << seq.tokens[i].Render();
    }
    out << '\n';
  }
}

std::vector<SemSequence> ReadSequences(std::istream &in) {
  std::vector<SemSequence> out;
  std::string line;
  int line_number = 0;
  std::optional<SemSequence> header;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("#")) {
      SemSequence seq;
      std::istringstream fields(line.substr(1));
      std::string field;
      while (fields >> field) {
        const size_t eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "doc_id") {
          seq.doc_id = value;
        } else if (key == "kind") {
          if (value != "FC" && value != "EC") {
            throw Error("sequence line " + std::to_string(line_number) +
                        ": unknown kind " + value);
          }
          seq.kind = value == "FC" ? SequenceKind::kFrameChain
                                   : SequenceKind::kEntityCentered;
        } else if (key == "chain_id") {
          seq.chain_id = std::stoi(value);
        }
      }
      header = std::move(seq);
      continue;
    }
    if (line.empty()) continue;
    SemSequence seq = header ? std::move(*header) : SemSequence{};
    header.reset();
    std::istringstream tokens(line);
    std::string token;
    while (tokens >> token) seq.tokens.push_back(SemToken::Parse(token));
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<SemSequence> ReadSequencesFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return ReadSequences(in);
}

}  // namespace semlm
