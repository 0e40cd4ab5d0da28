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

#include <fstream>

#include "gtest/gtest.h"
#include "test_util.h"

namespace semlm {
namespace {

using testing::DocBuilder;

AnnotatedDocument ValidDoc() {
  DocBuilder b("doc-1");
  const int s = b.Sentence("John/NNP bought/VBD a/DT car/NN ./.");
  b.Frame(s + 1, "buy", "buy.01", "13.5.1",
          {{"A0", s, s}, {"A1", s + 2, s + 3}});
  b.Chain({{{s, s, s}}, {{s + 2, s + 3, s + 3}}});
  return b.doc();
}

void WriteLines(const std::string &path, const std::vector<std::string> &lines) {
  std::ofstream out(path);
  for (const auto &line : lines) out << line << "\n";
}

TEST(ValidateTest, WellFormedDocumentIsOk) {
  EXPECT_TRUE(ValidateDocument(ValidDoc()).empty());
}

TEST(ValidateTest, TwoNegationsViolateOneRule) {
  AnnotatedDocument doc = ValidDoc();
  doc.frames[0].args.push_back({"AM-NEG", 0, 0});
  doc.frames[0].args.push_back({"AM-NEG", 2, 2});
  const auto violations = ValidateDocument(doc);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, rules::kOneNeg);
  EXPECT_NE(violations[0].field.find("frames[0]"), std::string::npos);
}

TEST(ValidateTest, MentionHeadOutsideSpan) {
  AnnotatedDocument doc = ValidDoc();
  doc.chains[0][1].head = 1;
  const auto violations = ValidateDocument(doc);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, rules::kMentionHead);
  EXPECT_NE(violations[0].field.find("head"), std::string::npos);
}

TEST(ValidateTest, EachViolationNamesOneRule) {
  AnnotatedDocument doc = ValidDoc();
  doc.frames[0].args[0] = {"A0", 3, 1};
  doc.frames[0].pb_sense = "buy";
  doc.connectives.push_back({"notamarker", {0, 0}, {0, 1}, {2, 3}});
  doc.tokens[2].sentence_index = -1;
  const auto violations = ValidateDocument(doc);
  std::vector<std::string> found;
  for (const auto &v : violations) found.push_back(v.rule);
  const std::vector<std::string> expected = {
      std::string(rules::kSentenceOrder), std::string(rules::kSenseFormat),
      std::string(rules::kArgOrder), std::string(rules::kUnknownMarker)};
  EXPECT_EQ(found, expected);
}

TEST(ValidateTest, FrameOrderAndUniqueness) {
  AnnotatedDocument doc = ValidDoc();
  doc.frames.push_back(doc.frames[0]);
  auto violations = ValidateDocument(doc);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, rules::kFrameUnique);
  doc.frames[1].predicate_index = 0;
  violations = ValidateDocument(doc);
  ASSERT_EQ(violations.size(), 1u);
  EXPECT_EQ(violations[0].rule, rules::kFrameOrder);
}

TEST(ValidateTest, RangesChecked) {
  AnnotatedDocument doc = ValidDoc();
  doc.frames[0].predicate_index = 99;
  doc.chains[0][0] = {7, 9, 8, 0};
  const auto violations = ValidateDocument(doc);
  ASSERT_EQ(violations.size(), 2u);
  EXPECT_EQ(violations[0].rule, rules::kPredicateRange);
  EXPECT_EQ(violations[1].rule, rules::kMentionRange);
}

TEST(JsonTest, RoundTrip) {
  DocBuilder b("doc-2");
  const int s = b.Sentence("He/PRP did/VBD not/RB pick/VB it/PRP up/RP ./.");
  const int t = b.Sentence("because/IN He/PRP left/VBD ./.");
  b.Frame(s + 3, "pick", "pick.01", std::nullopt,
          {{"A0", s, s}, {"AM-NEG", s + 2, s + 2}, {"A1", s + 4, s + 4}});
  b.Frame(t + 2, "leave", "leave.01", "51.2", {{"A0", t + 1, t + 1}});
  b.Connective("because", t, t, {s, s + 6}, {t + 1, t + 3});
  b.Chain({{{s, s, s}}, {{t + 1, t + 1, t + 1}}});
  const AnnotatedDocument doc = b.doc();
  const nlohmann::json json = DocumentToJson(doc);
  EXPECT_EQ(DocumentFromJson(json), doc);
  EXPECT_EQ(DocumentFromJson(nlohmann::json::parse(json.dump())), doc);
}

TEST(JsonTest, RejectsMissingAndUnknownKeys) {
  nlohmann::json json = DocumentToJson(ValidDoc());
  nlohmann::json missing = json;
  missing.erase("chains");
  EXPECT_THROW(DocumentFromJson(missing), Error);
  nlohmann::json extra = json;
  extra["tokens"][0]["ner"] = "PER";
  EXPECT_THROW(DocumentFromJson(extra), Error);
}

TEST(ReaderTest, EmptyFileYieldsNothing) {
  const auto dir = testing::TempDir("reader_empty");
  const std::string path = (dir / "empty.jsonl").string();
  WriteLines(path, {});
  EXPECT_TRUE(LoadDocuments(path).empty());
}

TEST(ReaderTest, YieldsDocumentsInOrder) {
  const auto dir = testing::TempDir("reader_order");
  const std::string path = (dir / "docs.jsonl").string();
  std::vector<std::string> lines;
  for (int i = 0; i < 5; ++i) {
    AnnotatedDocument doc = ValidDoc();
    doc.doc_id = "d" + std::to_string(i);
    lines.push_back(DocumentToJson(doc).dump());
    if (i == 2) lines.push_back("");
  }
  WriteLines(path, lines);
  const auto docs = LoadDocuments(path);
  ASSERT_EQ(docs.size(), 5u);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(docs[i].doc_id, "d" + std::to_string(i));
}

TEST(ReaderTest, InvalidSpanReportsLineAndRule) {
  const auto dir = testing::TempDir("reader_invalid");
  const std::string path = (dir / "bad.jsonl").string();
  AnnotatedDocument bad = ValidDoc();
  bad.frames[0].args[1] = {"A1", 3, 2};
  WriteLines(path, {DocumentToJson(ValidDoc()).dump(), DocumentToJson(bad).dump()});
  DocumentReader reader(path);
  ASSERT_TRUE(reader.Next().has_value());
  try {
    reader.Next();
    FAIL() << "expected an error";
  } catch (const Error &e) {
    const std::string what = e.what();
    EXPECT_NE(what.find(":2:"), std::string::npos) << what;
    EXPECT_NE(what.find("ArgumentSpan start ≤ end violated"), std::string::npos)
        << what;
  }
}

TEST(ReaderTest, MalformedJsonReportsLine) {
  const auto dir = testing::TempDir("reader_malformed");
  const std::string path = (dir / "bad.jsonl").string();
  WriteLines(path, {"{not json"});
  try {
    LoadDocuments(path);
    FAIL() << "expected an error";
  } catch (const Error &e) {
    EXPECT_NE(std::string(e.what()).find(":1:"), std::string::npos) << e.what();
  }
}

TEST(MarkerListTest, BundledListIsClosed) {
  const MarkerList &markers = MarkerList::Bundled();
  EXPECT_TRUE(markers.Contains("because"));
  EXPECT_TRUE(markers.Contains("as a result"));
  EXPECT_FALSE(markers.Contains("Because"));
  EXPECT_FALSE(markers.Contains("banana"));
  EXPECT_GT(markers.size(), 90u);
}

}  // namespace
}  // namespace semlm
