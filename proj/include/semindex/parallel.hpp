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

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace semindex {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs f(i) for i in [0, n) on `threads` workers. Iterations must write to
/// disjoint state; no ordering is guaranteed.
template <class Body>
void parallel_for(size_t n, int threads, Body&& f) {
  threads = resolve_threads(threads);
  if (n == 0) return;
  if (threads == 1 || n == 1) {
    for (size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  size_t n_workers = std::min<size_t>(static_cast<size_t>(threads), n);
  pool.reserve(n_workers);
  for (size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Deterministic parallel reduction. Items [0, n) are cut into fixed-size
/// blocks independent of the worker count; each block is folded locally in
/// item order and the block partials are merged strictly in block order, so
/// floating-point results are identical for any number of threads.
///
///   make_partial()            -> Partial
///   fold(Partial&, size_t i)  accumulates item i
///   merge(Partial&&)          called in block order, single-threaded
template <class MakePartial, class Fold, class Merge>
void ordered_block_reduce(size_t n, size_t block_size, int threads, MakePartial&& make_partial,
                          Fold&& fold, Merge&& merge) {
  threads = resolve_threads(threads);
  if (n == 0) return;
  if (block_size == 0) block_size = 1;
  const size_t n_blocks = (n + block_size - 1) / block_size;

  if (threads == 1 || n_blocks == 1) {
    for (size_t b = 0; b < n_blocks; ++b) {
      auto partial = make_partial();
      size_t lo = b * block_size, hi = std::min(n, lo + block_size);
      for (size_t i = lo; i < hi; ++i) fold(partial, i);
      merge(std::move(partial));
    }
    return;
  }

  using Partial = decltype(make_partial());
  std::atomic<size_t> next_block{0};
  std::mutex m;
  std::map<size_t, Partial> pending;
  size_t next_merge = 0;
  std::exception_ptr error;

  auto worker = [&] {
    while (true) {
      size_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      try {
        auto partial = make_partial();
        size_t lo = b * block_size, hi = std::min(n, lo + block_size);
        for (size_t i = lo; i < hi; ++i) fold(partial, i);
        std::lock_guard<std::mutex> lock(m);
        pending.emplace(b, std::move(partial));
        while (!pending.empty() && pending.begin()->first == next_merge) {
          merge(std::move(pending.begin()->second));
          pending.erase(pending.begin());
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!error) error = std::current_exception();
        next_block.store(n_blocks);
        break;
      }
    }
  };
  std::vector<std::thread> pool;
  size_t n_workers = std::min<size_t>(static_cast<size_t>(threads), n_blocks);
  pool.reserve(n_workers);
  for (size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace semindex
