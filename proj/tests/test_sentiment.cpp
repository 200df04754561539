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
#include <filesystem>
#include <random>

#include "semindex/sentiment.hpp"

using namespace semindex;

namespace {

CooccurrenceNetwork net_with(const std::vector<CooccurrenceNetwork::Edge>& edges,
                             std::vector<std::string> labels) {
  return CooccurrenceNetwork::from_parts(std::move(labels), edges);
}

}  // namespace

TEST_CASE("erk sentiment is the weight-weighted neighbor polarity average") {
  // erk at index 1 with neighbors a (w=3, +1) and c (w=1, -1)
  auto net = net_with({{0, 1, 3}, {1, 2, 1}}, {"a", "erk", "c"});
  auto lex = PolarityLexicon::from_map({{"a", 1.0}, {"c", -1.0}});
  auto s = erk_sentiment(net, "erk", lex);
  REQUIRE(s.has_value());
  CHECK_THAT(*s, Catch::Matchers::WithinAbs(0.5, 1e-12));  // (3 - 1) / 4
}

TEST_CASE("uniform positive polarity saturates at +1 regardless of weights") {
  auto net = net_with({{0, 1, 3}, {1, 2, 7}, {1, 3, 2}}, {"a", "erk", "c", "d"});
  auto lex = PolarityLexicon::from_map({{"a", 1.0}, {"c", 1.0}, {"d", 1.0}});
  CHECK_THAT(*erk_sentiment(net, "erk", lex), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("no polar neighbor gives the neutral default") {
  auto net = net_with({{0, 1, 3}}, {"a", "erk"});
  PolarityLexicon empty = PolarityLexicon::from_map({});
  CHECK(*erk_sentiment(net, "erk", empty) == 0.0);
}

TEST_CASE("absent keyword is masked, not zero") {
  auto net = net_with({{0, 1, 1}}, {"a", "b"});
  auto lex = PolarityLexicon::from_map({{"a", 0.4}});
  CHECK(!erk_sentiment(net, "missing", lex).has_value());
}

TEST_CASE("sentiment stays in [-1, 1] and flips with the lexicon sign") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CooccurrenceNetwork::Edge> edges;
    std::vector<std::string> labels{"erk"};
    std::unordered_map<std::string, double> pol, neg;
    uint32_t n = 2 + static_cast<uint32_t>(rng() % 6);
    for (uint32_t i = 1; i <= n; ++i) {
      labels.push_back("w" + std::to_string(i));
      edges.push_back({0, i, 1 + static_cast<uint32_t>(rng() % 9)});
      if (rng() % 3 != 0) {
        double p = (static_cast<double>(rng() % 2001) - 1000.0) / 1000.0;
        pol["w" + std::to_string(i)] = p;
        neg["w" + std::to_string(i)] = -p;
      }
    }
    auto net = net_with(edges, labels);
    auto s = erk_sentiment(net, "erk", PolarityLexicon::from_map(pol));
    auto sneg = erk_sentiment(net, "erk", PolarityLexicon::from_map(neg));
    REQUIRE(s.has_value());
    CHECK(*s >= -1.0);
    CHECK(*s <= 1.0);
    CHECK_THAT(*sneg, Catch::Matchers::WithinAbs(-*s, 1e-12));
  }
}

TEST_CASE("sentiment is invariant to uniform weight rescaling") {
  auto lex = PolarityLexicon::from_map({{"a", 0.8}, {"c", -0.3}});
  auto net1 = net_with({{0, 1, 3}, {1, 2, 5}}, {"a", "erk", "c"});
  auto net2 = net_with({{0, 1, 9}, {1, 2, 15}}, {"a", "erk", "c"});
  CHECK_THAT(*erk_sentiment(net1, "erk", lex),
             Catch::Matchers::WithinAbs(*erk_sentiment(net2, "erk", lex), 1e-12));
}

TEST_CASE("lexicon loader stems, clamps and averages collisions") {
  auto path = std::filesystem::temp_directory_path() / "semindex_lexicon_test.tsv";
  write_file(path.string(),
             "crescita\t0.8\n"
             "crescite\t0.4\n"      // same stem as crescita -> averaged
             "panico\t-7\n"         // clamped to -1
             "# comment\n"
             "solido\t0.5\n");
  Stemmer stemmer = Stemmer::make("it");
  PolarityLexicon lex = PolarityLexicon::load(path.string(), stemmer);
  std::filesystem::remove(path);

  auto grown = lex.get(stemmer.apply("crescita"));
  REQUIRE(grown.has_value());
  CHECK_THAT(*grown, Catch::Matchers::WithinAbs(0.6, 1e-12));
  CHECK_THAT(*lex.get(stemmer.apply("panico")), Catch::Matchers::WithinAbs(-1.0, 1e-12));
  CHECK(!lex.get("sconosciuto").has_value());
}

TEST_CASE("lexicon loader rejects malformed files") {
  Stemmer stemmer = Stemmer::make("none");
  auto path = std::filesystem::temp_directory_path() / "semindex_lexicon_bad.tsv";
  write_file(path.string(), "token_without_polarity\n");
  CHECK_THROWS_AS(PolarityLexicon::load(path.string(), stemmer), ConfigError);
  write_file(path.string(), "due parole\t0.5\n");
  CHECK_THROWS_AS(PolarityLexicon::load(path.string(), stemmer), ConfigError);
  write_file(path.string(), "token\tnot_a_number\n");
  CHECK_THROWS_AS(PolarityLexicon::load(path.string(), stemmer), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(PolarityLexicon::load("/nonexistent/lexicon.tsv", stemmer), ConfigError);
}

TEST_CASE("sentiment matrix and aggregate series") {
  std::vector<ErkEntry> entries(2);
  entries[0].id = "alpha";
  entries[0].variants = {{false, {"alpha"}}};
  entries[1].id = "beta";
  entries[1].variants = {{false, {"beta"}}};
  auto dict = ErkDictionary::from_entries(std::move(entries));
  auto lex = PolarityLexicon::from_map({{"good", 1.0}, {"bad", -1.0}});

  std::vector<CooccurrenceNetwork> nets;
  nets.push_back(net_with({{0, 2, 1}, {1, 2, 1}}, {"alpha", "beta", "good"}));
  nets.push_back(net_with({{0, 1, 2}}, {"alpha", "bad"}));
  nets.push_back(net_with({}, {}));

  ScoreMatrix m = build_sentiment_matrix(nets, dict, {"p1", "p2", "p3"}, lex);
  CHECK(m.at(0, 0) == 1.0);
  CHECK(m.at(0, 1) == 1.0);
  CHECK(m.at(1, 0) == -1.0);
  CHECK(m.is_masked(1, 1));
  CHECK(m.is_masked(2, 0));

  SentimentSeries si = aggregate_sentiment(m);
  CHECK(si.values[0] == 1.0);
  CHECK(si.values[1] == -1.0);
  CHECK(si.present[2] == 0);
}

TEST_CASE("erk sentiment via the demo lexicon on a built network") {
  // end to end through textprep: the keyword's neighbors carry polarity
  Stemmer stemmer = Stemmer::make("it");
  StopwordSet stops;
  std::vector<ErkEntry> entries(1);
  entries[0].id = "spread";
  entries[0].variants = {{false, {stemmer.apply("spread")}}};
  auto dict = ErkDictionary::from_entries(std::move(entries));

  TokenStream ts = preprocess_text("spread crollo paura", stops, stemmer, dict);
  auto net = build_network({ts}, 3);
  auto lex = PolarityLexicon::from_map(
      {{stemmer.apply("crollo"), -0.9}, {stemmer.apply("paura"), -0.8}});
  auto s = erk_sentiment(net, "spread", lex);
  REQUIRE(s.has_value());
  CHECK_THAT(*s, Catch::Matchers::WithinAbs(-0.85, 1e-12));
}
