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

// Writes the synthetic mini-corpus: short shopping-and-errand narratives with
// predicate frames, particles, negation, secondary predicates, "want to"
// compounds, explicit connectives and two coreference chains per document.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "semlm/annotations.h"
#include "semlm/common.h"

namespace {

using nlohmann::json;

struct Verb {
  const char *lemma;
  const char *past;
  const char *pb_sense;
  const char *vn_sense;  // nullptr: not in the mapping table
  const char *particle;  // nullptr: none
  const char *object;    // "thing": the document's object chain
  const char *marker;    // preferred connective when this verb follows
  std::vector<std::pair<int, double>> next;
};

enum VerbId { kArrive, kBuy, kPay, kEat, kPick, kPut, kGive, kSell, kSay,
              kCall, kFix, kPlace, kLeave };

const std::vector<Verb> &Verbs() {
  static const std::vector<Verb> verbs = {
      {"arrive", "arrived", "arrive.01", "51.1-2", nullptr, nullptr, "when",
       {{kBuy, .5}, {kPick, .3}, {kCall, .2}}},
      {"buy", "bought", "buy.01", "13.5.1", nullptr, "thing", "then",
       {{kPay, .7}, {kEat, .3}}},
      {"pay", "paid", "pay.01", "68", "for", "thing", "then",
       {{kEat, .4}, {kPut, .3}, {kLeave, .3}}},
      {"eat", "ate", "eat.01", "39.1-1", nullptr, "thing", "because",
       {{kSay, .5}, {kLeave, .3}, {kFix, .2}}},
      {"pick", "picked", "pick.01", nullptr, "up", "thing", "and",
       {{kPut, .5}, {kGive, .5}}},
      {"put", "put", "put.01", "9.1-2", "away", "thing", "so",
       {{kLeave, .5}, {kCall, .5}}},
      {"give", "gave", "give.01", "13.1-1", nullptr, "thing", "but",
       {{kSay, .6}, {kSell, .4}}},
      {"sell", "sold", "sell.01", "13.1-1", nullptr, "thing", "but",
       {{kPay, .5}, {kLeave, .5}}},
      {"say", "said", "say.01", "37.7-1", nullptr, "hello", "and",
       {{kLeave, .6}, {kGive, .4}}},
      {"call", "called", "call.02", nullptr, nullptr, "friend", "after",
       {{kArrive, .5}, {kFix, .5}}},
      {"fix", "fixed", "fix.02", nullptr, nullptr, "thing", "so",
       {{kSell, .5}, {kPlace, .5}}},
      {"place", "placed", "place.01", "9.1-2", nullptr, "thing", "then",
       {{kLeave, 1.0}}},
      {"leave", "left", "leave.01", "51.2", nullptr, "shop", "finally",
       {{kArrive, .6}, {kCall, .4}}},
  };
  return verbs;
}

const char *kNames[][2] = {{"John", "he"}, {"Mary", "she"}, {"Alice", "she"},
                           {"Bob", "he"},  {"Tom", "he"},   {"Anna", "she"}};
const char *kThings[] = {"bread", "car", "fish", "book", "radio", "apple"};
const char *kOtherMarkers[] = {"then", "because", "but", "so", "and", "after"};

class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {}

  double Uniform() { return semlm::UnitDouble(rng_()); }
  size_t Pick(size_t n) {
    return std::min(n - 1, static_cast<size_t>(Uniform() * n));
  }
  int Next(const Verb &verb) {
    double u = Uniform();
    for (const auto &[id, weight] : verb.next) {
      if ((u -= weight) < 0) return id;
    }
    return verb.next.back().first;
  }

  json Document(int index);

 private:
  int Add(const std::string &surface, const std::string &lemma,
          const std::string &pos) {
    tokens_.push_back({{"surface", surface}, {"lemma", lemma}, {"pos", pos},
                       {"sentence", sentence_}});
    return static_cast<int>(tokens_.size()) - 1;
  }
  static json Arg(const std::string &label, int start, int end) {
    return {{"label", label}, {"start", start}, {"end", end}};
  }
  static json Mention(int start, int end, int head) {
    return {{"start", start}, {"end", end}, {"head", head}};
  }
  json Frame(int predicate, const Verb &verb, json args) {
    return {{"predicate", predicate},
            {"lemma", verb.lemma},
            {"pb_sense", verb.pb_sense},
            {"vn_sense", verb.vn_sense ? json(verb.vn_sense) : json(nullptr)},
            {"args", std::move(args)}};
  }

  std::mt19937_64 rng_;
  json tokens_;
  int sentence_ = 0;
};

json Generator::Document(int index) {
  tokens_ = json::array();
  sentence_ = 0;
  json frames = json::array();
  json connectives = json::array();
  json hero_chain = json::array();
  json thing_chain = json::array();

  const auto &name = kNames[Pick(std::size(kNames))];
  const char *thing = kThings[Pick(std::size(kThings))];
  const int sentences = 5 + static_cast<int>(Pick(5));
  int verb_id = Uniform() < 0.7 ? kArrive : kCall;
  int previous_start = -1;
  int previous_end = -1;

  for (sentence_ = 0; sentence_ < sentences; ++sentence_) {
    const Verb &verb = Verbs()[verb_id];
    const int start = static_cast<int>(tokens_.size());
    int marker_token = -1;
    std::string marker;
    if (sentence_ > 0 && Uniform() < 0.45) {
      marker = Uniform() < 0.8 ? verb.marker
                               : kOtherMarkers[Pick(std::size(kOtherMarkers))];
      marker_token = Add(marker, marker, "IN");
    }

    const bool first = sentence_ == 0;
    const int subject = first ? Add(name[0], name[0], "NNP")
                              : Add(name[1], name[1], "PRP");
    hero_chain.push_back(Mention(subject, subject, subject));

    int negation = -1;
    if (Uniform() < 0.1) {
      Add("did", "do", "VBD");
      negation = Add("not", "not", "RB");
    }
    int want = -1;
    const bool can_want = verb_id == kBuy || verb_id == kEat || verb_id == kSell;
    if (can_want && negation < 0 && Uniform() < 0.3) {
      want = Add("wanted", "want", "VBD");
      Add("to", "to", "TO");
    }
    const int predicate = Add(negation >= 0 || want >= 0 ? verb.lemma : verb.past,
                              verb.lemma, "VBD");
    if (verb.particle) {
      const bool preposition = std::string(verb.particle) == "for";
      Add(verb.particle, verb.particle, preposition ? "IN" : "RP");
    }
    json args = json::array();
    args.push_back(Arg("A0", subject, subject));
    if (verb.object) {
      const std::string object = verb.object;
      int obj_start = 0, obj_end = 0;
      if (object == "thing") {
        if (thing_chain.empty()) {
          obj_start = Add("the", "the", "DT");
          obj_end = Add(thing, thing, "NN");
        } else {
          obj_start = obj_end = Add("it", "it", "PRP");
        }
        thing_chain.push_back(Mention(obj_start, obj_end, obj_end));
      } else {
        obj_start = Add(object == "hello" ? "hello" : "the",
                        object == "hello" ? "hello" : "the",
                        object == "hello" ? "UH" : "DT");
        obj_end = object == "hello" ? obj_start : Add(object, object, "NN");
      }
      args.push_back(Arg("A1", obj_start, obj_end));
    }
    if (verb_id == kEat && Uniform() < 0.3) {
      const int secondary = Add("raw", "raw", "JJ");
      args.push_back(Arg("AM-PRD", secondary, secondary));
    }
    if (negation >= 0) args.push_back(Arg("AM-NEG", negation, negation));
    const int end = Add(".", ".", ".");

    if (want >= 0) {
      json want_args = json::array();
      want_args.push_back(Arg("A0", subject, subject));
      want_args.push_back(Arg("A1", want + 1, end - 1));
      static const Verb kWant{"want", "wanted", "want.01", "32.1", nullptr,
                              nullptr, nullptr, {}};
      frames.push_back(Frame(want, kWant, std::move(want_args)));
    }
    frames.push_back(Frame(predicate, verb, std::move(args)));
    if (marker_token >= 0) {
      connectives.push_back({{"marker", marker},
                             {"start", marker_token},
                             {"end", marker_token},
                             {"arg1", {previous_start, previous_end}},
                             {"arg2", {marker_token + 1, end}}});
    }
    previous_start = start;
    previous_end = end;
    verb_id = Next(verb);
  }

  json chains = json::array();
  chains.push_back(hero_chain);
  if (thing_chain.size() >= 2) chains.push_back(thing_chain);
  char id[32];
  std::snprintf(id, sizeof(id), "mini-%03d", index);
  return {{"doc_id", id},
          {"tokens", tokens_},
          {"frames", frames},
          {"connectives", connectives},
          {"chains", chains}};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Generate the synthetic mini-corpus"};
  std::string out = "mini_corpus.jsonl";
  int documents = 100;
  uint64_t seed = 2016;
  app.add_option("--out", out)->capture_default_str();
  app.add_option("--documents", documents)->capture_default_str();
  app.add_option("--seed", seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  Generator generator(seed);
  std::ofstream file(out, std::ios::binary);
  for (int i = 0; i < documents; ++i) {
    const json doc = generator.Document(i);
    // Round-trip through the reader's codec so the file is always valid.
    const semlm::AnnotatedDocument parsed = semlm::DocumentFromJson(doc);
    const auto violations = semlm::ValidateDocument(parsed);
    if (!violations.empty()) {
      std::cerr << doc["doc_id"] << ": " << violations[0].ToString() << "\n";
      return 1;
    }
    file << doc.dump() << "\n";
  }
  if (!file) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  return 0;
}
