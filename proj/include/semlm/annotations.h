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

#ifndef SEMLM_ANNOTATIONS_H_
#define SEMLM_ANNOTATIONS_H_

#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace semlm {

// Inclusive token range. Token indices are global within a document.
struct TokenRange {
  int start = 0;
  int end = 0;

  bool Contains(int index) const { return start <= index && index <= end; }
  bool operator==(const TokenRange &other) const = default;
};

struct Token {
  int index = 0;
  std::string surface;
  std::string lemma;
  std::string pos;
  int sentence_index = 0;

  bool operator==(const Token &other) const = default;
};

struct ArgumentSpan {
  std::string label;
  int start = 0;
  int end = 0;

  bool Contains(int index) const { return start <= index && index <= end; }
  bool operator==(const ArgumentSpan &other) const = default;
};

struct PredicateFrame {
  int predicate_index = 0;
  std::string lemma;
  std::string pb_sense;
  std::optional<std::string> vn_sense;
  std::vector<ArgumentSpan> args;

  bool operator==(const PredicateFrame &other) const = default;
};

struct Connective {
  std::string marker;
  TokenRange span;
  TokenRange arg1;
  TokenRange arg2;

  bool operator==(const Connective &other) const = default;
};

struct Mention {
  int start = 0;
  int end = 0;
  int head = 0;
  int chain_id = 0;

  bool operator==(const Mention &other) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<PredicateFrame> frames;
  std::vector<Connective> connectives;
  // chains[i] holds the mentions of chain i; chain_id == i for each.
  std::vector<std::vector<Mention>> chains;

  bool operator==(const AnnotatedDocument &other) const = default;
};

// Closed set of canonical discourse markers.
class MarkerList {
 public:
  MarkerList() = default;

  // Parses newline-delimited markers; blank lines and '#' lines are skipped.
  static MarkerList Parse(std::string_view text);
  static MarkerList FromFile(const std::string &path);
  static const MarkerList &Bundled();

  bool Contains(std::string_view marker) const {
    return markers_.count(std::string(marker)) > 0;
  }
  size_t size() const { return markers_.size(); }
  const std::set<std::string> &markers() const { return markers_; }

 private:
  std::set<std::string> markers_;
};

// One broken invariant. `field` locates the offending element, e.g.
// "frames[2].args[0]"; `rule` names the invariant.
struct Violation {
  std::string field;
  std::string rule;

  std::string ToString() const { return field + ": " + rule; }
};

namespace rules {
inline constexpr std::string_view kTokenIndexOrder =
    "Token index strictly increasing violated";
inline constexpr std::string_view kSentenceOrder =
    "Token sentence_index non-decreasing violated";
inline constexpr std::string_view kArgOrder =
    "ArgumentSpan start ≤ end violated";
inline constexpr std::string_view kArgRange =
    "ArgumentSpan within document range violated";
inline constexpr std::string_view kSenseFormat =
    "PredicateFrame pb_sense matches lemma.NN violated";
inline constexpr std::string_view kPredicateRange =
    "PredicateFrame predicate_index within range violated";
inline constexpr std::string_view kOneNeg = "at most one AM-NEG violated";
inline constexpr std::string_view kOnePrd = "at most one AM-PRD violated";
inline constexpr std::string_view kUnknownMarker =
    "Connective marker in bundled marker list violated";
inline constexpr std::string_view kConnectiveRange =
    "Connective spans within document range violated";
inline constexpr std::string_view kMentionHead =
    "Mention start ≤ head ≤ end violated";
inline constexpr std::string_view kMentionRange =
    "Mention within document range violated";
inline constexpr std::string_view kFrameOrder =
    "AnnotatedDocument frames sorted by predicate_index violated";
inline constexpr std::string_view kFrameUnique =
    "AnnotatedDocument unique predicate_index violated";
inline constexpr std::string_view kConnectiveOrder =
    "AnnotatedDocument connectives sorted by span start violated";
}  // namespace rules

// Checks every document invariant. An empty result means the document is
// valid; otherwise each entry pinpoints one broken invariant.
std::vector<Violation> ValidateDocument(const AnnotatedDocument &doc,
                                        const MarkerList &markers =
                                            MarkerList::Bundled());

// JSON-Lines codec for one document object.
AnnotatedDocument DocumentFromJson(const nlohmann::json &json);
nlohmann::json DocumentToJson(const AnnotatedDocument &doc);

// Streams documents from a JSON-Lines file, one per line, validating each.
// Blank lines are skipped. Errors carry the 1-based line number.
class DocumentReader {
 public:
  explicit DocumentReader(const std::string &path,
                          const MarkerList &markers = MarkerList::Bundled());

  // Returns the next document, or nullopt at end of file.
  std::optional<AnnotatedDocument> Next();

  int line_number() const { return line_number_; }

 private:
  std::string path_;
  std::ifstream in_;
  const MarkerList *markers_;
  int line_number_ = 0;
};

// Convenience wrapper reading a whole file.
std::vector<AnnotatedDocument> LoadDocuments(
    const std::string &path, const MarkerList &markers = MarkerList::Bundled());

}  // namespace semlm

#endif  // SEMLM_ANNOTATIONS_H_
