// Copyright 2026 The Authors.
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
#include <climits>
#include <cstddef>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "tangleforge/subset.hpp"

namespace tangleforge {

// Memo for an integer-valued set function. Writes are idempotent (the same
// value is always stored for the same key), so racing inserts are harmless.
// Dense for n <= kDenseLimit, sharded hash maps above that.
class SetFunctionMemo {
 public:
  static constexpr int kDenseLimit = 20;
  static constexpr int kEmpty = INT_MIN;

  explicit SetFunctionMemo(int n) : n_(n) {
    if (n <= kDenseLimit) {
      dense_ = std::make_unique<std::atomic<int>[]>(std::size_t{1} << n);
      Clear();
    }
  }

  template <typename F>
  int GetOrCompute(SubsetMask x, F&& compute) const {
    if (dense_) {
      int v = dense_[x].load(std::memory_order_relaxed);
      if (v == kEmpty) {
        v = compute(x);
        dense_[x].store(v, std::memory_order_relaxed);
      }
      return v;
    }
    Shard& shard = shards_[x % kShards];
    {
      std::lock_guard<std::mutex> lock(shard.mu);
      auto it = shard.map.find(x);
      if (it != shard.map.end()) return it->second;
    }
    const int v = compute(x);
    std::lock_guard<std::mutex> lock(shard.mu);
    shard.map.emplace(x, v);
    return v;
  }

  void Clear() const {
    if (dense_) {
      const std::size_t size = std::size_t{1} << n_;
      for (std::size_t i = 0; i < size; ++i) {
        dense_[i].store(kEmpty, std::memory_order_relaxed);
      }
      return;
    }
    for (Shard& s : shards_) {
      std::lock_guard<std::mutex> lock(s.mu);
      s.map.clear();
    }
  }

 private:
  static constexpr std::size_t kShards = 16;
  struct Shard {
    std::mutex mu;
    std::unordered_map<SubsetMask, int> map;
  };

  int n_;
  std::unique_ptr<std::atomic<int>[]> dense_;
  mutable Shard shards_[kShards];
};

}  // namespace tangleforge
