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

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "semindex/common.hpp"
#include "semindex/textprep.hpp"

namespace semindex {

/// Weighted undirected word co-occurrence graph for one period. Nodes are
/// the tokens that occurred in the period (isolated ones included); edge
/// weights count in-window position pairs. Stored as CSR with node labels
/// sorted lexicographically and adjacency sorted by neighbor index, so any
/// serialization is deterministic.
class CooccurrenceNetwork {
 public:
  CooccurrenceNetwork() = default;

  size_t node_count() const { return labels_.size(); }
  size_t edge_count() const { return edge_a_.size(); }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(uint32_t v) const { return labels_[v]; }

  /// Index of a label, or npos when absent.
  static constexpr size_t npos = static_cast<size_t>(-1);
  size_t index_of(const std::string& label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) return npos;
    return static_cast<size_t>(it - labels_.begin());
  }

  uint32_t degree(uint32_t v) const { return offsets_[v + 1] - offsets_[v]; }

  struct Neighbor {
    uint32_t node;
    uint32_t weight;
  };
  /// Adjacency of v, sorted by neighbor index.
  std::pair<const Neighbor*, const Neighbor*> neighbors(uint32_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }

  uint64_t total_weight() const {
    uint64_t sum = 0;
    for (size_t e = 0; e < edge_a_.size(); ++e) sum += edge_w_[e];
    return sum;
  }

  /// Unique undirected edges with a < b, ordered by (a, b).
  struct Edge {
    uint32_t a, b, weight;
  };
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_a_.size());
    for (size_t e = 0; e < edge_a_.size(); ++e) out.push_back({edge_a_[e], edge_b_[e], edge_w_[e]});
    return out;
  }

  /// Edge-list serialization: "token_a<TAB>token_b<TAB>weight", rows sorted
  /// lexicographically; nodes implicit.
  std::string to_edge_list() const {
    std::string out;
    for (size_t e = 0; e < edge_a_.size(); ++e) {
      out += labels_[edge_a_[e]];
      out += '\t';
      out += labels_[edge_b_[e]];
      out += '\t';
      out += std::to_string(edge_w_[e]);
      out += '\n';
    }
    return out;
  }

  static CooccurrenceNetwork from_parts(std::vector<std::string> labels,
                                        std::vector<Edge> edges) {
    CooccurrenceNetwork net;
    // canonical node order is lexicographic; remap edge endpoints if the
    // caller's order differs
    if (!std::is_sorted(labels.begin(), labels.end())) {
      std::vector<uint32_t> order(labels.size());
      for (uint32_t i = 0; i < labels.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](uint32_t x, uint32_t y) { return labels[x] < labels[y]; });
      std::vector<uint32_t> rank(labels.size());
      std::vector<std::string> sorted(labels.size());
      for (uint32_t pos = 0; pos < order.size(); ++pos) {
        rank[order[pos]] = pos;
        sorted[pos] = std::move(labels[order[pos]]);
      }
      labels = std::move(sorted);
      for (auto& e : edges) {
        e.a = rank[e.a];
        e.b = rank[e.b];
        if (e.a > e.b) std::swap(e.a, e.b);
      }
    }
    for (size_t i = 1; i < labels.size(); ++i)
      if (labels[i] == labels[i - 1]) throw DataError("duplicate node label: " + labels[i]);
    net.labels_ = std::move(labels);
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
      return x.a != y.a ? x.a < y.a : x.b < y.b;
    });
    net.edge_a_.reserve(edges.size());
    net.edge_b_.reserve(edges.size());
    net.edge_w_.reserve(edges.size());
    for (const Edge& e : edges) {
      if (e.a == e.b) throw DataError("self-loop in network construction");
      if (e.weight == 0) throw DataError("zero edge weight in network construction");
      net.edge_a_.push_back(e.a);
      net.edge_b_.push_back(e.b);
      net.edge_w_.push_back(e.weight);
    }
    net.build_csr();
    return net;
  }

 private:
  void build_csr() {
    const size_t n = labels_.size();
    offsets_.assign(n + 1, 0);
    for (size_t e = 0; e < edge_a_.size(); ++e) {
      ++offsets_[edge_a_[e] + 1];
      ++offsets_[edge_b_[e] + 1];
    }
    for (size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    adjacency_.resize(2 * edge_a_.size());
    std::vector<uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (size_t e = 0; e < edge_a_.size(); ++e) {
      adjacency_[cursor[edge_a_[e]]++] = {edge_b_[e], edge_w_[e]};
      adjacency_[cursor[edge_b_[e]]++] = {edge_a_[e], edge_w_[e]};
    }
    for (size_t v = 0; v < n; ++v)
      std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1],
                [](const Neighbor& x, const Neighbor& y) { return x.node < y.node; });
  }

  std::vector<std::string> labels_;       // sorted lexicographically
  std::vector<uint32_t> edge_a_, edge_b_; // a < b, ordered by (a, b)
  std::vector<uint32_t> edge_w_;
  std::vector<uint32_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Builds the co-occurrence network of one period from its token streams.
/// Within each document, every unordered pair of distinct tokens at
/// positions p < q with q - p <= window adds one to the pair weight;
/// documents never co-occur across their boundary.
inline CooccurrenceNetwork build_network(const std::vector<TokenStream>& streams, size_t window,
                                         uint32_t min_edge_weight = 1) {
  if (window < 1) throw ConfigError("co-occurrence window must be >= 1");

  // Node ids from the sorted distinct token set.
  std::vector<std::string> labels;
  {
    std::unordered_set<std::string> seen;
    for (const auto& stream : streams)
      for (const auto& tok : stream)
        if (seen.insert(tok.text).second) labels.push_back(tok.text);
    std::sort(labels.begin(), labels.end());
  }
  std::unordered_map<std::string, uint32_t> index;
  index.reserve(labels.size());
  for (uint32_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;

  std::unordered_map<uint64_t, uint32_t> weights;
  std::vector<uint32_t> ids;
  for (const auto& stream : streams) {
    ids.clear();
    ids.reserve(stream.size());
    for (const auto& tok : stream) ids.push_back(index[tok.text]);
    const size_t n = ids.size();
    for (size_t p = 0; p < n; ++p) {
      const size_t hi = std::min(n - 1, p + window);
      for (size_t q = p + 1; q <= hi; ++q) {
        uint32_t a = ids[p], b = ids[q];
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        ++weights[(static_cast<uint64_t>(a) << 32) | b];
      }
    }
  }

  std::vector<CooccurrenceNetwork::Edge> edges;
  edges.reserve(weights.size());
  for (const auto& [key, w] : weights) {
    if (w < min_edge_weight) continue;
    edges.push_back({static_cast<uint32_t>(key >> 32), static_cast<uint32_t>(key & 0xFFFFFFFFu), w});
  }
  return CooccurrenceNetwork::from_parts(std::move(labels), std::move(edges));
}

/// Token occurrence counts over a period's streams, aligned to the network's
/// sorted label order.
inline std::vector<int64_t> prevalence_counts(const std::vector<TokenStream>& streams,
                                              const CooccurrenceNetwork& net) {
  std::vector<int64_t> counts(net.node_count(), 0);
  for (const auto& stream : streams)
    for (const auto& tok : stream) {
      size_t idx = net.index_of(tok.text);
      if (idx != CooccurrenceNetwork::npos) ++counts[idx];
    }
  return counts;
}

}  // namespace semindex
