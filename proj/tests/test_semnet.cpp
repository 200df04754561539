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
#include <random>

#include "semindex/semnet.hpp"

using namespace semindex;

namespace {

TokenStream words(const std::vector<std::string>& ws) {
  TokenStream ts;
  for (const auto& w : ws) ts.push_back({StreamToken::Kind::word, w});
  return ts;
}

// Position-pair counter written as the obvious double loop; used as the
// conservation oracle.
uint64_t brute_pair_count(const std::vector<TokenStream>& streams, size_t window) {
  uint64_t count = 0;
  for (const auto& s : streams)
    for (size_t p = 0; p < s.size(); ++p)
      for (size_t q = p + 1; q < s.size() && q - p <= window; ++q)
        if (s[p].text != s[q].text) ++count;
  return count;
}

}  // namespace

TEST_CASE("two tokens make one edge") {
  auto net = build_network({words({"a", "b"})}, 3);
  REQUIRE(net.node_count() == 2);
  REQUIRE(net.edge_count() == 1);
  CHECK(net.edges()[0].weight == 1);
  CHECK(net.to_edge_list() == "a\tb\t1\n");
}

TEST_CASE("repeated pairs accumulate weight without self-loops") {
  auto net = build_network({words({"a", "b", "a"})}, 3);
  REQUIRE(net.node_count() == 2);
  REQUIRE(net.edge_count() == 1);
  CHECK(net.edges()[0].weight == 2);  // (0,1) and (1,2); (0,2) is a-a, skipped
}

TEST_CASE("window limits co-occurrence distance") {
  auto net = build_network({words({"a", "b", "c", "d", "e"})}, 1);
  CHECK(net.edge_count() == 4);  // chain only
  auto wide = build_network({words({"a", "b", "c", "d", "e"})}, 4);
  CHECK(wide.edge_count() == 10);  // complete graph on 5 nodes
}

TEST_CASE("documents never co-occur across their boundary") {
  auto joint = build_network({words({"a", "b"}), words({"c", "d"})}, 3);
  CHECK(joint.edge_count() == 2);
  CHECK(joint.index_of("a") != CooccurrenceNetwork::npos);
  // no a-c, a-d, b-c, b-d edges
  for (const auto& e : joint.edges()) {
    bool first = joint.label(e.a) == "a" || joint.label(e.a) == "b";
    bool second = joint.label(e.b) == "a" || joint.label(e.b) == "b";
    CHECK(first == second);
  }
}

TEST_CASE("empty period yields an empty network") {
  auto net = build_network({}, 3);
  CHECK(net.node_count() == 0);
  CHECK(net.edge_count() == 0);
}

TEST_CASE("single-token documents contribute isolated nodes") {
  auto net = build_network({words({"solo"})}, 3);
  CHECK(net.node_count() == 1);
  CHECK(net.edge_count() == 0);
  CHECK(net.degree(0) == 0);
}

TEST_CASE("total edge weight equals the brute-force pair count") {
  std::mt19937 rng(7);
  std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TokenStream> streams;
    size_t docs = 1 + rng() % 4;
    for (size_t d = 0; d < docs; ++d) {
      std::vector<std::string> ws;
      size_t len = rng() % 12;
      for (size_t i = 0; i < len; ++i) ws.push_back(vocab[rng() % vocab.size()]);
      streams.push_back(words(ws));
    }
    size_t window = 1 + rng() % 4;
    auto net = build_network(streams, window);
    CHECK(net.total_weight() == brute_pair_count(streams, window));
  }
}

TEST_CASE("serialized output is sorted and independent of document order") {
  std::vector<TokenStream> docs{words({"gamma", "alfa", "beta"}), words({"beta", "delta"}),
                                words({"alfa", "gamma"})};
  auto net1 = build_network(docs, 2);
  std::reverse(docs.begin(), docs.end());
  auto net2 = build_network(docs, 2);
  CHECK(net1.to_edge_list() == net2.to_edge_list());
  CHECK(net1.labels() == std::vector<std::string>{"alfa", "beta", "delta", "gamma"});
  // rows sorted lexicographically
  auto lines = split(net1.to_edge_list(), '\n');
  auto sorted = lines;
  std::sort(sorted.begin(), sorted.end());
  // (ignore the trailing empty line from the final newline)
  CHECK(std::is_sorted(lines.begin(), lines.end() - 1));
  (void)sorted;
}

TEST_CASE("min edge weight pruning drops weak edges but keeps nodes") {
  std::vector<TokenStream> docs{words({"a", "b"}), words({"a", "b"}), words({"a", "c"})};
  auto net = build_network(docs, 3, 2);
  CHECK(net.node_count() == 3);  // c stays as a node
  REQUIRE(net.edge_count() == 1);
  CHECK(net.label(net.edges()[0].a) == "a");
  CHECK(net.label(net.edges()[0].b) == "b");
}

TEST_CASE("figure-style sentence builds the expected node set") {
  // Stopwords removed, no stemming, window 3. The sentence is tokenized and
  // filtered inline; the node set must be exactly the 13 content words and
  // the network comes out connected with each node linked to its neighbors
  // within three positions.
  std::string sentence =
      "The proud and unfeeling landlord views his extensive fields, and without a thought for "
      "the wants of his brethren, in imagination consumes himself the whole harvest";
  StopwordSet stops = StopwordSet::from_words(
      {"the", "and", "his", "without", "a", "for", "of", "in", "himself"});
  auto tokens = stops.filter(tokenize(sentence));
  REQUIRE(tokens.size() == 13);
  auto net = build_network({words(tokens)}, 3);
  CHECK(net.node_count() == 13);
  std::vector<std::string> expected{"brethren",  "consumes", "extensive", "fields",
                                    "harvest",   "imagination", "landlord", "proud",
                                    "thought",   "unfeeling", "views",     "wants",
                                    "whole"};
  CHECK(net.labels() == expected);
  // every position pair within the window is an edge: 12 + 11 + 10
  CHECK(net.edge_count() == 33);
  // spot-check adjacency: "landlord" sits between "proud unfeeling" and
  // "views extensive fields"
  size_t landlord = net.index_of("landlord");
  auto [it, end] = net.neighbors(static_cast<uint32_t>(landlord));
  std::vector<std::string> neigh;
  for (; it != end; ++it) neigh.push_back(net.label(it->node));
  CHECK(std::find(neigh.begin(), neigh.end(), "proud") != neigh.end());
  CHECK(std::find(neigh.begin(), neigh.end(), "unfeeling") != neigh.end());
  CHECK(std::find(neigh.begin(), neigh.end(), "views") != neigh.end());
  CHECK(std::find(neigh.begin(), neigh.end(), "extensive") != neigh.end());
  CHECK(std::find(neigh.begin(), neigh.end(), "fields") != neigh.end());
  CHECK(neigh.size() == 5);
}

TEST_CASE("prevalence counts occurrences across the period") {
  std::vector<TokenStream> docs{words({"a", "b", "a"}), words({"a"}), words({"c", "b"})};
  auto net = build_network(docs, 3);
  auto counts = prevalence_counts(docs, net);
  CHECK(counts[net.index_of("a")] == 3);
  CHECK(counts[net.index_of("b")] == 2);
  CHECK(counts[net.index_of("c")] == 1);
}
