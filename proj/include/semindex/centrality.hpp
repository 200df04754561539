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

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "semindex/parallel.hpp"
#include "semindex/semnet.hpp"

namespace semindex {

/// Distinctiveness of every node: sum over neighbors j of
/// log((n-1) / degree(j)). Only edge existence matters, not weights; an
/// isolated node (or a graph with a single node) scores 0.
inline std::vector<double> distinctiveness_all(const CooccurrenceNetwork& net,
                                               double log_base = 0.0) {
  const size_t n = net.node_count();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  const double scale = log_base > 0.0 ? 1.0 / std::log(log_base) : 1.0;
  const double log_n1 = std::log(static_cast<double>(n - 1));
  for (uint32_t v = 0; v < n; ++v) {
    double sum = 0.0;
    auto [it, end] = net.neighbors(v);
    for (; it != end; ++it) sum += log_n1 - std::log(static_cast<double>(net.degree(it->node)));
    d[v] = sum * scale;
  }
  return d;
}

namespace detail {

// Adjacency flattened into parallel arrays with the 1/weight distances
// precomputed once, shared read-only by all source passes.
struct FlatGraph {
  std::vector<uint32_t> offsets;
  std::vector<uint32_t> nbr;
  std::vector<double> len;

  explicit FlatGraph(const CooccurrenceNetwork& net) {
    const size_t n = net.node_count();
    offsets.resize(n + 1);
    offsets[0] = 0;
    size_t total = 0;
    for (uint32_t v = 0; v < n; ++v) {
      total += net.degree(v);
      offsets[v + 1] = static_cast<uint32_t>(total);
    }
    nbr.resize(total);
    len.resize(total);
    size_t pos = 0;
    for (uint32_t v = 0; v < n; ++v) {
      auto [it, end] = net.neighbors(v);
      for (; it != end; ++it, ++pos) {
        nbr[pos] = it->node;
        len[pos] = 1.0 / static_cast<double>(it->weight);
      }
    }
  }
};

// When the distinct edge weights have a small least common multiple L, the
// path distances 1/w scale to exact integers L/w: shortest paths and ties
// become integer arithmetic and the priority queue becomes a bucket queue.
// Weekly co-occurrence graphs with quantized counts routinely qualify.
inline uint64_t weight_lcm_capped(const CooccurrenceNetwork& net, uint64_t cap) {
  uint64_t l = 1;
  std::unordered_set<uint32_t> distinct;
  for (uint32_t v = 0; v < net.node_count(); ++v) {
    auto [it, end] = net.neighbors(v);
    for (; it != end; ++it) {
      if (!distinct.insert(it->weight).second) continue;
      uint64_t w = it->weight;
      uint64_t g = std::gcd(l, w);
      if (l / g > cap / w) return 0;  // lcm would exceed the cap
      l = l / g * w;
    }
  }
  return l;
}

// Integer-distance mirror of FlatGraph: edge length L/w.
struct IntGraph {
  std::vector<uint32_t> offsets;
  std::vector<uint32_t> nbr;
  std::vector<uint32_t> ilen;
  uint32_t max_ilen = 0;

  IntGraph(const CooccurrenceNetwork& net, uint64_t l) {
    const size_t n = net.node_count();
    offsets.resize(n + 1);
    offsets[0] = 0;
    size_t total = 0;
    for (uint32_t v = 0; v < n; ++v) {
      total += net.degree(v);
      offsets[v + 1] = static_cast<uint32_t>(total);
    }
    nbr.resize(total);
    ilen.resize(total);
    size_t pos = 0;
    for (uint32_t v = 0; v < n; ++v) {
      auto [it, end] = net.neighbors(v);
      for (; it != end; ++it, ++pos) {
        nbr[pos] = it->node;
        ilen[pos] = static_cast<uint32_t>(l / it->weight);
        max_ilen = std::max(max_ilen, ilen[pos]);
      }
    }
  }
};

// Indexed 4-ary min-heap with decrease-key. Keys are stored inline with the
// node ids (16-byte entries, so one child group fills a cache line) and every
// node is in the heap at most once, bounding pops by n. Equal keys settle in
// node-id order, which keeps the settlement order, and with it every
// downstream float sum, deterministic.
class DistanceHeap {
 public:
  explicit DistanceHeap(size_t n) : pos_(n, kAbsent) {}

  void reset() {
    heap_.clear();
    std::fill(pos_.begin(), pos_.end(), kAbsent);
  }

  bool empty() const { return heap_.empty(); }

  void push_or_decrease(uint32_t node, double key) {
    uint32_t p = pos_[node];
    if (p == kAbsent) {
      heap_.push_back(Item{key, node});
      sift_up(static_cast<uint32_t>(heap_.size() - 1));
    } else {
      heap_[p].key = key;
      sift_up(p);
    }
  }

  uint32_t pop_min() {
    const uint32_t top = heap_[0].node;
    pos_[top] = kAbsent;
    Item last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      sift_down(0);
    }
    return top;
  }

 private:
  struct Item {
    double key;
    uint32_t node;
  };
  static constexpr uint32_t kAbsent = 0xFFFFFFFFu;

  static bool less(const Item& a, const Item& b) {
    return a.key != b.key ? a.key < b.key : a.node < b.node;
  }

  void sift_up(uint32_t i) {
    Item item = heap_[i];
    while (i > 0) {
      uint32_t parent = (i - 1) >> 2;
      if (!less(item, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[heap_[i].node] = i;
      i = parent;
    }
    heap_[i] = item;
    pos_[item.node] = i;
  }

  void sift_down(uint32_t i) {
    Item item = heap_[i];
    const uint32_t size = static_cast<uint32_t>(heap_.size());
    while (true) {
      uint32_t first = (i << 2) + 1;
      if (first >= size) break;
      uint32_t best = first;
      uint32_t last_child = std::min(first + 4, size);
      for (uint32_t c = first + 1; c < last_child; ++c)
        if (less(heap_[c], heap_[best])) best = c;
      if (!less(heap_[best], item)) break;
      heap_[i] = heap_[best];
      pos_[heap_[i].node] = i;
      i = best;
    }
    heap_[i] = item;
    pos_[item.node] = i;
  }

  std::vector<Item> heap_;
  std::vector<uint32_t> pos_;
};

// Scratch buffers for one single-source shortest-path pass, reused across
// sources to avoid reallocation.
struct BrandesScratch {
  std::vector<double> dist;
  std::vector<double> sigma;   // shortest-path counts
  std::vector<double> delta;   // dependency accumulator
  std::vector<uint8_t> settled;
  std::vector<uint32_t> order;  // settlement order
  DistanceHeap heap;

  explicit BrandesScratch(size_t n) : dist(n), sigma(n), delta(n), settled(n), heap(n) {
    order.reserve(n);
  }
};

// One Dijkstra-with-path-counting pass from `source`, accumulating the pair
// dependencies into `acc`. Equal-length paths are detected with a relative
// tolerance; edge distances are bounded away from zero (weights are finite
// counts), so a tie can only be discovered before the target settles.
// Predecessors are not stored: the dependency sweep rediscovers them by
// rescanning each settled node's neighbors against the final distances,
// which sees exactly the edges the forward pass accepted.
inline void brandes_source_pass(const FlatGraph& g, uint32_t source, BrandesScratch& s,
                                std::vector<double>& acc) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kTieRel = 1e-12;
  constexpr double kCoarseTie = 1e-6;  // upper bound on any plausible tie window

  s.order.clear();
  s.heap.reset();
  std::fill(s.dist.begin(), s.dist.end(), kInf);
  std::fill(s.sigma.begin(), s.sigma.end(), 0.0);
  std::fill(s.delta.begin(), s.delta.end(), 0.0);
  std::fill(s.settled.begin(), s.settled.end(), 0);

  s.dist[source] = 0.0;
  s.sigma[source] = 1.0;
  s.heap.push_or_decrease(source, 0.0);

  while (!s.heap.empty()) {
    const uint32_t v = s.heap.pop_min();
    const double d = s.dist[v];
    s.settled[v] = 1;
    s.order.push_back(v);

    const uint32_t lo = g.offsets[v], hi = g.offsets[v + 1];
    for (uint32_t e = lo; e < hi; ++e) {
      const uint32_t u = g.nbr[e];
#if defined(__GNUC__)
      if (e + 8 < hi) __builtin_prefetch(&s.dist[g.nbr[e + 8]], 0, 1);
#endif
      const double nd = d + g.len[e];
      const double du = s.dist[u];
      if (du == kInf) {  // first touch
        s.dist[u] = nd;
        s.sigma[u] = s.sigma[v];
        s.heap.push_or_decrease(u, nd);
        continue;
      }
      // coarse reject before the exact tie arithmetic; anything landing in
      // the window is re-checked precisely, so the cutoff only trades work
      const double diff = nd - du;
      if (diff > kCoarseTie) continue;
      // settled nodes cannot be improved or tied (every edge outweighs the
      // tie window), so this load stays off the common path
      if (s.settled[u]) continue;
      const double tol = kTieRel * std::max(1.0, du);
      if (diff < -tol) {
        s.dist[u] = nd;
        s.sigma[u] = s.sigma[v];
        s.heap.push_or_decrease(u, nd);
      } else if (diff <= tol) {
        s.sigma[u] += s.sigma[v];
      }
    }
  }

  for (size_t k = s.order.size(); k-- > 0;) {
    const uint32_t w = s.order[k];
    const double dw = s.dist[w];
    const double tol = kTieRel * std::max(1.0, dw);
    const double coeff = (1.0 + s.delta[w]) / s.sigma[w];
    const uint32_t lo = g.offsets[w], hi = g.offsets[w + 1];
    for (uint32_t e = lo; e < hi; ++e) {
      const uint32_t u = g.nbr[e];
#if defined(__GNUC__)
      if (e + 8 < hi) __builtin_prefetch(&s.dist[g.nbr[e + 8]], 0, 1);
#endif
      // u is a shortest-path predecessor of w iff dist[u] + len == dist[w]
      if (std::abs(s.dist[u] + g.len[e] - dw) <= tol) s.delta[u] += s.sigma[u] * coeff;
    }
    if (w != source) acc[w] += s.delta[w];
  }
}

// Scratch for the integer-distance pass: a circular bucket queue over
// distances modulo (max edge length + 1), with a occupancy bitset so empty
// stretches are skipped a word at a time.
struct DialScratch {
  std::vector<uint64_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<uint8_t> settled;
  std::vector<uint32_t> order;
  std::vector<std::vector<uint32_t>> buckets;  // max_ilen + 1 slots
  std::vector<uint64_t> occupied;              // one bit per slot

  DialScratch(size_t n, uint32_t max_ilen)
      : dist(n), sigma(n), delta(n), settled(n), buckets(max_ilen + 1),
        occupied((max_ilen + 1 + 63) / 64) {
    order.reserve(n);
  }
};

inline void brandes_source_pass_integer(const IntGraph& g, uint32_t source, DialScratch& s,
                                        std::vector<double>& acc) {
  constexpr uint64_t kUnreached = ~uint64_t{0};
  const size_t slots = s.buckets.size();

  s.order.clear();
  std::fill(s.dist.begin(), s.dist.end(), kUnreached);
  std::fill(s.sigma.begin(), s.sigma.end(), 0.0);
  std::fill(s.delta.begin(), s.delta.end(), 0.0);
  std::fill(s.settled.begin(), s.settled.end(), 0);
  std::fill(s.occupied.begin(), s.occupied.end(), 0);

  auto mark = [&](size_t slot) { s.occupied[slot >> 6] |= uint64_t{1} << (slot & 63); };
  auto unmark = [&](size_t slot) { s.occupied[slot >> 6] &= ~(uint64_t{1} << (slot & 63)); };

  // next occupied slot at or after `from`, searching circularly; only called
  // while at least one bucket is non-empty
  auto next_occupied = [&](size_t from) -> size_t {
    size_t word = from >> 6;
    uint64_t bits = s.occupied[word] & (~uint64_t{0} << (from & 63));
    while (bits == 0) {
      word = word + 1 == s.occupied.size() ? 0 : word + 1;
      bits = s.occupied[word];
    }
    return (word << 6) + static_cast<size_t>(std::countr_zero(bits));
  };

  s.dist[source] = 0;
  s.sigma[source] = 1.0;
  s.buckets[0].push_back(source);
  mark(0);
  size_t queued = 1;
  uint64_t cur = 0;

  while (queued > 0) {
    size_t slot = cur % slots;
    // every pending key lies in (cur - 1, cur + max_ilen], so the circular
    // distance to the next occupied slot is exactly the key increment
    size_t target = next_occupied(slot);
    cur += (target + slots - slot) % slots;
    slot = target;
    auto& bucket = s.buckets[slot];
    while (!bucket.empty()) {
      const uint32_t v = bucket.back();
      bucket.pop_back();
      --queued;
      if (s.settled[v] || s.dist[v] != cur) continue;  // stale
      s.settled[v] = 1;
      s.order.push_back(v);
      const uint64_t d = cur;
      const uint32_t lo = g.offsets[v], hi = g.offsets[v + 1];
      for (uint32_t e = lo; e < hi; ++e) {
        const uint32_t u = g.nbr[e];
        const uint64_t nd = d + g.ilen[e];
        const uint64_t du = s.dist[u];
        if (nd < du) {
          s.dist[u] = nd;
          s.sigma[u] = s.sigma[v];
          size_t bslot = nd % slots;
          s.buckets[bslot].push_back(u);
          mark(bslot);
          ++queued;
        } else if (nd == du && !s.settled[u]) {
          s.sigma[u] += s.sigma[v];
        }
      }
    }
    unmark(slot);
  }

  for (size_t k = s.order.size(); k-- > 0;) {
    const uint32_t w = s.order[k];
    const uint64_t dw = s.dist[w];
    const double coeff = (1.0 + s.delta[w]) / s.sigma[w];
    const uint32_t lo = g.offsets[w], hi = g.offsets[w + 1];
    for (uint32_t e = lo; e < hi; ++e) {
      const uint32_t u = g.nbr[e];
      if (s.dist[u] + g.ilen[e] == dw) s.delta[u] += s.sigma[u] * coeff;
    }
    if (w != source) acc[w] += s.delta[w];
  }
}

}  // namespace detail

/// Weighted betweenness of every node: for each unordered pair {j, k} the
/// fraction of minimum-distance paths through the node, summed
/// (unnormalized); pairs with no connecting path contribute nothing. Edge
/// weights are co-occurrence counts; path length uses distance 1/weight.
///
/// Exact Brandes accumulation, one shortest-path pass per source. Passes run
/// in parallel over sources; per-block accumulators merge in a fixed block
/// order, so results are identical for any thread count.
inline std::vector<double> betweenness_all(const CooccurrenceNetwork& net, int threads = 1) {
  const size_t n = net.node_count();
  std::vector<double> centrality(n, 0.0);
  if (n < 3) return centrality;

  constexpr size_t kBlock = 32;        // sources per reduction block
  constexpr uint64_t kLcmCap = 65536;  // bucket budget for the integer path

  auto merge = [&](std::vector<double>&& acc) {
    for (size_t v = 0; v < n; ++v) centrality[v] += acc[v];
  };
  auto make_acc = [n] { return std::vector<double>(n, 0.0); };

  const uint64_t l = detail::weight_lcm_capped(net, kLcmCap);
  if (l > 0) {
    const detail::IntGraph graph(net, l);
    const uint32_t max_ilen = graph.max_ilen;
    ordered_block_reduce(
        n, kBlock, threads, make_acc,
        [&](std::vector<double>& acc, size_t source) {
          thread_local std::unique_ptr<detail::DialScratch> scratch;
          if (!scratch || scratch->dist.size() != n || scratch->buckets.size() != max_ilen + 1)
            scratch = std::make_unique<detail::DialScratch>(n, max_ilen);
          detail::brandes_source_pass_integer(graph, static_cast<uint32_t>(source), *scratch, acc);
        },
        merge);
  } else {
    const detail::FlatGraph graph(net);
    ordered_block_reduce(
        n, kBlock, threads, make_acc,
        [&](std::vector<double>& acc, size_t source) {
          thread_local std::unique_ptr<detail::BrandesScratch> scratch;
          if (!scratch || scratch->dist.size() != n)
            scratch = std::make_unique<detail::BrandesScratch>(n);
          detail::brandes_source_pass(graph, static_cast<uint32_t>(source), *scratch, acc);
        },
        merge);
  }

  // Each unordered pair was counted from both endpoints.
  for (auto& c : centrality) c *= 0.5;
  return centrality;
}

/// Population z-scores; a zero-variance vector maps to all zeros.
inline std::vector<double> standardize(const std::vector<double>& values) {
  const size_t n = values.size();
  std::vector<double> z(n, 0.0);
  if (n == 0) return z;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  const double sd = std::sqrt(var);
  if (sd == 0.0) return z;
  for (size_t i = 0; i < n; ++i) z[i] = (values[i] - mean) / sd;
  return z;
}

/// Per-node measures of one period network plus their per-period z-scores.
struct NodeMeasures {
  std::vector<std::string> labels;  // sorted, aligned with the network
  std::vector<double> prevalence;
  std::vector<double> diversity;
  std::vector<double> connectivity;
  std::vector<double> z_prev;
  std::vector<double> z_div;
  std::vector<double> z_conn;

  size_t size() const { return labels.size(); }

  size_t index_of(const std::string& label) const {
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) return static_cast<size_t>(-1);
    return static_cast<size_t>(it - labels.begin());
  }
};

inline NodeMeasures compute_measures(const std::vector<TokenStream>& streams,
                                     const CooccurrenceNetwork& net, int threads = 1) {
  NodeMeasures m;
  m.labels = net.labels();
  auto counts = prevalence_counts(streams, net);
  m.prevalence.assign(counts.begin(), counts.end());
  m.diversity = distinctiveness_all(net);
  m.connectivity = betweenness_all(net, threads);
  m.z_prev = standardize(m.prevalence);
  m.z_div = standardize(m.diversity);
  m.z_conn = standardize(m.connectivity);
  return m;
}

}  // namespace semindex
