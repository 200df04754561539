// Copyright 2026 The semindex Authors
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

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <filesystem>

#include "semindex/textprep.hpp"

using namespace semindex;

namespace {

const std::string kStoplistPath = std::string(SEMINDEX_REPO_DIR) + "/data/stopwords_it.txt";
const std::string kDictPath = std::string(SEMINDEX_REPO_DIR) + "/data/erk_dictionary.txt";

ErkDictionary make_dict(const std::vector<std::string>& lines, const StopwordSet& stops,
                        const Stemmer& stemmer) {
  auto path = std::filesystem::temp_directory_path() / "semindex_dict_test.txt";
  std::string contents;
  for (const auto& l : lines) contents += l + "\n";
  write_file(path.string(), contents);
  ErkDictionary d = ErkDictionary::load(path.string(), stops, stemmer);
  std::filesystem::remove(path);
  return d;
}

std::vector<std::string> texts_of(const TokenStream& ts) {
  std::vector<std::string> out;
  for (const auto& t : ts) out.push_back((t.is_erk() ? "@" : "") + t.text);
  return out;
}

}  // namespace

TEST_CASE("tokenizer splits on non-letters and lowercases") {
  CHECK(tokenize("Lo Spread sale!") == std::vector<std::string>{"lo", "spread", "sale"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("COVID-19, quarantena.") == std::vector<std::string>{"covid", "quarantena"});
  CHECK(tokenize("1234 5,6%") == std::vector<std::string>{});
  CHECK(tokenize("città  più\n\tPERCHÉ") == std::vector<std::string>{"città", "più", "perché"});
  CHECK(tokenize("dell'economia") == std::vector<std::string>{"dell", "economia"});
  // malformed UTF-8 bytes act as separators
  CHECK(tokenize("ab\xFF" "cd") == std::vector<std::string>{"ab", "cd"});
}

TEST_CASE("stopword removal preserves order and is identity with empty list") {
  StopwordSet stops = StopwordSet::load(kStoplistPath);
  CHECK(stops.filter({"lo", "spread", "sale"}) == std::vector<std::string>{"spread", "sale"});
  StopwordSet empty;
  CHECK(empty.filter({"lo", "spread"}) == std::vector<std::string>{"lo", "spread"});
  CHECK(stops.filter({}) == std::vector<std::string>{});
  CHECK_THROWS_AS(StopwordSet::load("/nonexistent/stoplist.txt"), ConfigError);
}

TEST_CASE("aliasing merges variant phrases into canonical tokens") {
  Stemmer stemmer = Stemmer::make("it");
  StopwordSet stops;
  ErkDictionary dict = make_dict({"economic_crisis: crisi economica", "spread: spread"}, stops, stemmer);

  auto run = [&](const std::string& text) {
    return texts_of(preprocess_text(text, stops, stemmer, dict));
  };
  CHECK(run("crisi economica oggi") == std::vector<std::string>{"@economic_crisis", "oggi"});
  CHECK(run("spread") == std::vector<std::string>{"@spread"});
  CHECK(run("nessuna corrispondenza qui") ==
        std::vector<std::string>{"nessun", "corrispondent", "qui"});
  // plural/singular variants collapse through stemming before matching
  CHECK(run("crisi economiche") == std::vector<std::string>{"@economic_crisis"});
}

TEST_CASE("aliasing is greedy longest-first with dictionary-order ties") {
  Stemmer stemmer = Stemmer::make("none");
  StopwordSet stops;
  ErkDictionary dict = make_dict({"ab: alfa beta", "a: alfa", "b: beta | beta gamma"}, stops, stemmer);

  auto run = [&](const std::string& text) {
    return texts_of(preprocess_text(text, stops, stemmer, dict));
  };
  // longest wins over the earlier singleton
  CHECK(run("alfa beta resto") == std::vector<std::string>{"@ab", "resto"});
  // consumed positions cannot rematch: beta was eaten by "alfa beta"
  CHECK(run("alfa beta gamma") == std::vector<std::string>{"@ab", "gamma"});
  CHECK(run("beta gamma") == std::vector<std::string>{"@b"});
  CHECK(run("alfa solo") == std::vector<std::string>{"@a", "solo"});
}

TEST_CASE("exact variants match surface forms, not stems") {
  Stemmer stemmer = Stemmer::make("it");
  StopwordSet stops;
  ErkDictionary dict = make_dict({"esm: =mes", "sure: =sure"}, stops, stemmer);

  auto run = [&](const std::string& text) {
    return texts_of(preprocess_text(text, stops, stemmer, dict));
  };
  // the Italian word "mese" stems to "mes" but must NOT trigger the acronym
  CHECK(run("mese di marzo") == std::vector<std::string>{"mes", "di", "marz"});
  CHECK(run("il MES approvato") == std::vector<std::string>{"il", "@esm", "approv"});
  // "sure" would stem to "sur"; as an exact variant the surface form matches
  CHECK(run("fondo SURE europeo") == std::vector<std::string>{"fond", "@sure", "europe"});
}

TEST_CASE("aliasing never grows the stream and erk ids come from the dictionary") {
  Stemmer stemmer = Stemmer::make("it");
  StopwordSet stops = StopwordSet::load(kStoplistPath);
  ErkDictionary dict = ErkDictionary::load(kDictPath, stops, stemmer);
  std::string text =
      "Lo spread tra BTP e Bund sale mentre la Banca d'Italia avverte sulla crisi economica "
      "e la disoccupazione; quantitative easing e smart working restano temi del giorno.";
  auto plain_tokens = stops.filter(tokenize(text));
  TokenStream ts = preprocess_text(text, stops, stemmer, dict);
  CHECK(ts.size() <= plain_tokens.size());
  for (const auto& tok : ts)
    if (tok.is_erk()) CHECK(dict.has(tok.text));
  // spot checks: multi-token merges happened
  auto texts = texts_of(ts);
  CHECK(std::count(texts.begin(), texts.end(), "@spread") == 1);
  CHECK(std::count(texts.begin(), texts.end(), "@bank_of_italy") == 1);
  CHECK(std::count(texts.begin(), texts.end(), "@economic_crisis") == 1);
  CHECK(std::count(texts.begin(), texts.end(), "@quantitative_easing") == 1);
  CHECK(std::count(texts.begin(), texts.end(), "@smart_working") == 1);
  CHECK(std::count(texts.begin(), texts.end(), "@btp") == 1);
}

TEST_CASE("shipped dictionary loads with 38 entries and unique variants") {
  Stemmer stemmer = Stemmer::make("it");
  StopwordSet stops = StopwordSet::load(kStoplistPath);
  ErkDictionary dict = ErkDictionary::load(kDictPath, stops, stemmer);
  CHECK(dict.size() == 38);
  for (const auto& e : dict.entries()) CHECK(!e.variants.empty());
}

TEST_CASE("dictionary loader rejects malformed files") {
  Stemmer stemmer = Stemmer::make("none");
  StopwordSet stops;
  CHECK_THROWS_AS(make_dict({"a: x", "a: y"}, stops, stemmer), ConfigError);   // duplicate id
  CHECK_THROWS_AS(make_dict({"a: x", "b: x"}, stops, stemmer), ConfigError);   // shared variant
  CHECK_THROWS_AS(make_dict({"no-colon-line"}, stops, stemmer), ConfigError);
  CHECK_THROWS_AS(ErkDictionary::load("/nonexistent/dict.txt", stops, stemmer), ConfigError);
  StopwordSet all = StopwordSet::from_words({"solo", "stop"});
  CHECK_THROWS_AS(make_dict({"a: solo stop"}, all, stemmer), ConfigError);  // empty after cleanup
}

TEST_CASE("pipeline determinism: identical input gives identical streams") {
  Stemmer stemmer = Stemmer::make("it");
  StopwordSet stops = StopwordSet::load(kStoplistPath);
  ErkDictionary dict = ErkDictionary::load(kDictPath, stops, stemmer);
  std::string text = "Il PIL crolla, lo spread sale: recessione alle porte secondo Confindustria.";
  TokenStream a = preprocess_text(text, stops, stemmer, dict);
  TokenStream b = preprocess_text(text, stops, stemmer, dict);
  CHECK(a == b);
}

TEST_CASE("stemming a stream leaves erk tokens alone") {
  Stemmer stemmer = Stemmer::make("it");
  TokenStream ts{{StreamToken::Kind::erk, "spread"}, {StreamToken::Kind::word, "mercati"}};
  TokenStream out = stem_stream(ts, stemmer);
  CHECK(out[0].text == "spread");
  CHECK(out[0].is_erk());
  CHECK(out[1].text == "merc");
}
