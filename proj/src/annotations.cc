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

#include "semlm/annotations.h"

#include <algorithm>
#include <regex>
#include <sstream>

#include "semlm/bundled_data.h"
#include "semlm/common.h"

namespace semlm {

using nlohmann::json;

MarkerList MarkerList::Parse(std::string_view text) {
  MarkerList list;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (line.empty() || line[0] == '#') continue;
    list.markers_.insert(line);
  }
  return list;
}

MarkerList MarkerList::FromFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open marker list " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const MarkerList &MarkerList::Bundled() {
  static const MarkerList bundled = Parse(BundledMarkerText());
  return bundled;
}

namespace {

std::string At(std::string_view prefix, size_t index) {
  return std::string(prefix) + "[" + std::to_string(index) + "]";
}

bool InRange(int index, int size) { return index >= 0 && index < size; }

bool RangeValid(const TokenRange &range, int size) {
  return range.start <= range.end && InRange(range.start, size) &&
         InRange(range.end, size);
}

}  // namespace

std::vector<Violation> ValidateDocument(const AnnotatedDocument &doc,
                                        const MarkerList &markers) {
  static const std::regex sense_pattern(R"(^[^\s.]+(\.[^\s.]+)*\.[0-9]{2}$)");
  std::vector<Violation> out;
  auto add = [&out](std::string field, std::string_view rule) {
    out.push_back({std::move(field), std::string(rule)});
  };
  const int size = static_cast<int>(doc.tokens.size());

  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token &token = doc.tokens[i];
    if (i > 0 && token.index <= doc.tokens[i - 1].index) {
      add(At("tokens", i) + ".index", rules::kTokenIndexOrder);
    }
    if (i > 0 && token.sentence_index < doc.tokens[i - 1].sentence_index) {
      add(At("tokens", i) + ".sentence", rules::kSentenceOrder);
    }
  }

  for (size_t f = 0; f < doc.frames.size(); ++f) {
    const PredicateFrame &frame = doc.frames[f];
    const std::string where = At("frames", f);
    if (!InRange(frame.predicate_index, size)) {
      add(where + ".predicate", rules::kPredicateRange);
    }
    if (!std::regex_match(frame.pb_sense, sense_pattern)) {
      add(where + ".pb_sense", rules::kSenseFormat);
    }
    int negations = 0;
    int secondaries = 0;
    for (size_t a = 0; a < frame.args.size(); ++a) {
      const ArgumentSpan &arg = frame.args[a];
      const std::string arg_where = where + At(".args", a);
      if (arg.start > arg.end) {
        add(arg_where, rules::kArgOrder);
      } else if (!InRange(arg.start, size) || !InRange(arg.end, size)) {
        add(arg_where, rules::kArgRange);
      }
      if (arg.label == "AM-NEG" && ++negations == 2) {
        add(arg_where + ".label", rules::kOneNeg);
      }
      if (arg.label == "AM-PRD" && ++secondaries == 2) {
        add(arg_where + ".label", rules::kOnePrd);
      }
    }
    if (f > 0) {
      const int previous = doc.frames[f - 1].predicate_index;
      if (frame.predicate_index == previous) {
        add(where + ".predicate", rules::kFrameUnique);
      } else if (frame.predicate_index < previous) {
        add(where + ".predicate", rules::kFrameOrder);
      }
    }
  }

  for (size_t c = 0; c < doc.connectives.size(); ++c) {
    const Connective &conn = doc.connectives[c];
    const std::string where = At("connectives", c);
    if (!markers.Contains(conn.marker)) {
      add(where + ".marker", rules::kUnknownMarker);
    }
    if (!RangeValid(conn.span, size)) add(where, rules::kConnectiveRange);
    if (!RangeValid(conn.arg1, size)) add(where + ".arg1", rules::kConnectiveRange);
    if (!RangeValid(conn.arg2, size)) add(where + ".arg2", rules::kConnectiveRange);
    if (c > 0 && conn.span.start < doc.connectives[c - 1].span.start) {
      add(where + ".start", rules::kConnectiveOrder);
    }
  }

  for (size_t c = 0; c < doc.chains.size(); ++c) {
    for (size_t m = 0; m < doc.chains[c].size(); ++m) {
      const Mention &mention = doc.chains[c][m];
      const std::string where = At("chains", c) + At("", m);
      if (!(mention.start <= mention.head && mention.head <= mention.end)) {
        add(where + ".head", rules::kMentionHead);
      } else if (!InRange(mention.start, size) || !InRange(mention.end, size)) {
        add(where, rules::kMentionRange);
      }
    }
  }
  return out;
}

namespace {

void CheckKeys(const json &object, std::initializer_list<const char *> keys,
               std::string_view what) {
  if (!object.is_object()) {
    throw Error(std::string(what) + " must be a JSON object");
  }
  for (const char *key : keys) {
    if (!object.contains(key)) {
      throw Error(std::string(what) + " is missing key '" + key + "'");
    }
  }
  for (const auto &item : object.items()) {
    bool known = std::any_of(keys.begin(), keys.end(),
                             [&](const char *key) { return item.key() == key; });
    if (!known) {
      throw Error(std::string(what) + " has unexpected key '" + item.key() + "'");
    }
  }
}

TokenRange PairRange(const json &pair, std::string_view what) {
  if (!pair.is_array() || pair.size() != 2) {
    throw Error(std::string(what) + " must be a [start, end] pair");
  }
  return {pair[0].get<int>(), pair[1].get<int>()};
}

}  // namespace

AnnotatedDocument DocumentFromJson(const json &j) {
  CheckKeys(j, {"doc_id", "tokens", "frames", "connectives", "chains"},
            "document");
  AnnotatedDocument doc;
  doc.doc_id = j.at("doc_id").get<std::string>();

  int index = 0;
  for (const json &t : j.at("tokens")) {
    CheckKeys(t, {"surface", "lemma", "pos", "sentence"}, "token");
    doc.tokens.push_back({index++, t.at("surface").get<std::string>(),
                          t.at("lemma").get<std::string>(),
                          t.at("pos").get<std::string>(),
                          t.at("sentence").get<int>()});
  }
  for (const json &f : j.at("frames")) {
    CheckKeys(f, {"predicate", "lemma", "pb_sense", "vn_sense", "args"},
              "frame");
    PredicateFrame frame;
    frame.predicate_index = f.at("predicate").get<int>();
    frame.lemma = f.at("lemma").get<std::string>();
    frame.pb_sense = f.at("pb_sense").get<std::string>();
    if (!f.at("vn_sense").is_null()) {
      frame.vn_sense = f.at("vn_sense").get<std::string>();
    }
    for (const json &a : f.at("args")) {
      CheckKeys(a, {"label", "start", "end"}, "argument");
      frame.args.push_back({a.at("label").get<std::string>(),
                            a.at("start").get<int>(), a.at("end").get<int>()});
    }
    doc.frames.push_back(std::move(frame));
  }
  for (const json &c : j.at("connectives")) {
    CheckKeys(c, {"marker", "start", "end", "arg1", "arg2"}, "connective");
    Connective conn;
    conn.marker = c.at("marker").get<std::string>();
    conn.span = {c.at("start").get<int>(), c.at("end").get<int>()};
    conn.arg1 = PairRange(c.at("arg1"), "arg1");
    conn.arg2 = PairRange(c.at("arg2"), "arg2");
    doc.connectives.push_back(std::move(conn));
  }
  int chain_id = 0;
  for (const json &chain : j.at("chains")) {
    if (!chain.is_array()) throw Error("chain must be an array of mentions");
    std::vector<Mention> mentions;
    for (const json &m : chain) {
      CheckKeys(m, {"start", "end", "head"}, "mention");
      mentions.push_back({m.at("start").get<int>(), m.at("end").get<int>(),
                          m.at("head").get<int>(), chain_id});
    }
    doc.chains.push_back(std::move(mentions));
    ++chain_id;
  }
  return doc;
}

json DocumentToJson(const AnnotatedDocument &doc) {
  json tokens = json::array();
  for (const Token &t : doc.tokens) {
    tokens.push_back({{"surface", t.surface},
                      {"lemma", t.lemma},
                      {"pos", t.pos},
                      {"sentence", t.sentence_index}});
  }
  json frames = json::array();
  for (const PredicateFrame &f : doc.frames) {
    json args = json::array();
    for (const ArgumentSpan &a : f.args) {
      args.push_back({{"label", a.label}, {"start", a.start}, {"end", a.end}});
    }
    frames.push_back({{"predicate", f.predicate_index},
                      {"lemma", f.lemma},
                      {"pb_sense", f.pb_sense},
                      {"vn_sense", f.vn_sense ? json(*f.vn_sense) : json(nullptr)},
                      {"args", std::move(args)}});
  }
  json connectives = json::array();
  for (const Connective &c : doc.connectives) {
    connectives.push_back({{"marker", c.marker},
                           {"start", c.span.start},
                           {"end", c.span.end},
                           {"arg1", {c.arg1.start, c.arg1.end}},
                           {"arg2", {c.arg2.start, c.arg2.end}}});
  }
  json chains = json::array();
  for (const auto &chain : doc.chains) {
    json mentions = json::array();
    for (const Mention &m : chain) {
      mentions.push_back({{"start", m.start}, {"end", m.end}, {"head", m.head}});
    }
    chains.push_back(std::move(mentions));
  }
  return {{"doc_id", doc.doc_id},
          {"tokens", std::move(tokens)},
          {"frames", std::move(frames)},
          {"connectives", std::move(connectives)},
          {"chains", std::move(chains)}};
}

DocumentReader::DocumentReader(const std::string &path,
                               const MarkerList &markers)
    : path_(path), in_(path), markers_(&markers) {
  if (!in_) throw Error("cannot open " + path);
}

std::optional<AnnotatedDocument> DocumentReader::Next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_number_;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path_ + ":" + std::to_string(line_number_) + ": ";
    AnnotatedDocument doc;
    try {
      doc = DocumentFromJson(json::parse(line));
    } catch (const json::exception &e) {
      throw Error(where + "malformed document: " + e.what());
    } catch (const Error &e) {
      throw Error(where + "malformed document: " + e.what());
    }
    std::vector<Violation> violations = ValidateDocument(doc, *markers_);
    if (!violations.empty()) {
      throw Error(where + "invalid document '" + doc.doc_id + "': " +
                  violations.front().ToString());
    }
    return doc;
  }
  return std::nullopt;
}

std::vector<AnnotatedDocument> LoadDocuments(const std::string &path,
                                             const MarkerList &markers) {
  DocumentReader reader(path, markers);
  std::vector<AnnotatedDocument> docs;
  while (auto doc = reader.Next()) docs.push_back(std::move(*doc));
  return docs;
}

}  // namespace semlm
