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

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tangleforge/error.hpp"

namespace tangleforge {

// Bit e is element e of the ground set {0, ..., n-1}.
using SubsetMask = std::uint64_t;

inline constexpr int kMaxGroundSize = 64;

inline constexpr SubsetMask FullMask(int n) {
  return n >= 64 ? ~SubsetMask{0} : ((SubsetMask{1} << n) - 1);
}
inline constexpr SubsetMask Singleton(int e) { return SubsetMask{1} << e; }
inline constexpr bool Contains(SubsetMask x, int e) { return (x >> e) & 1U; }
inline constexpr bool IsSubset(SubsetMask a, SubsetMask b) {
  return (a & ~b) == 0;
}
inline constexpr int Size(SubsetMask x) { return std::popcount(x); }
inline constexpr int LowestElement(SubsetMask x) {
  return std::countr_zero(x);
}
inline constexpr int HighestElement(SubsetMask x) {
  return 63 - std::countl_zero(x);
}

inline std::vector<int> Elements(SubsetMask x) {
  std::vector<int> out;
  out.reserve(Size(x));
  for (; x != 0; x &= x - 1) out.push_back(LowestElement(x));
  return out;
}

template <typename Range>
SubsetMask MaskOf(const Range& elements) {
  SubsetMask m = 0;
  for (int e : elements) m |= Singleton(e);
  return m;
}

inline SubsetMask MaskOf(std::initializer_list<int> elements) {
  SubsetMask m = 0;
  for (int e : elements) m |= Singleton(e);
  return m;
}

// Lexicographic order on sorted element lists, so {0,1} < {0,1,2} < {0,2}.
inline bool LexLess(SubsetMask a, SubsetMask b) {
  if (a == b) return false;
  const int d = LowestElement(a ^ b);
  const SubsetMask above = ~FullMask(d + 1);
  if (Contains(a, d)) {
    // b continues with something larger than d, or b is a proper prefix of a.
    return (b & above) != 0;
  }
  return (a & above) == 0;
}

// Singletons first, then by size, then lexicographically.
inline bool SizeLexLess(SubsetMask a, SubsetMask b) {
  const int sa = Size(a), sb = Size(b);
  if (sa != sb) return sa < sb;
  return LexLess(a, b);
}

// Calls f on every submask of m, including 0 and m, in decreasing numeric
// order.
template <typename F>
void ForEachSubmask(SubsetMask m, F&& f) {
  SubsetMask s = m;
  while (true) {
    f(s);
    if (s == 0) break;
    s = (s - 1) & m;
  }
}

inline std::string FormatMask(SubsetMask x) {
  std::string s = "{";
  bool first = true;
  for (int e : Elements(x)) {
    if (!first) s += ",";
    s += std::to_string(e);
    first = false;
  }
  return s + "}";
}

class GroundSet {
 public:
  GroundSet() = default;
  explicit GroundSet(int n, std::vector<std::string> labels = {})
      : n_(n), labels_(std::move(labels)) {
    if (n < 1 || n > kMaxGroundSize) {
      throw InvalidInput("ground set size must be in [1, 64], got " +
                         std::to_string(n));
    }
    if (!labels_.empty()) {
      if (static_cast<int>(labels_.size()) != n) {
        throw InvalidInput("label count does not match ground set size");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (labels_[i] == labels_[j]) {
            throw InvalidInput("duplicate element label " + labels_[i]);
          }
        }
      }
    }
  }

  int size() const { return n_; }
  SubsetMask full() const { return FullMask(n_); }
  SubsetMask Complement(SubsetMask x) const { return full() & ~x; }
  bool InRange(SubsetMask x) const { return (x & ~full()) == 0; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string Label(int e) const {
    return labels_.empty() ? std::to_string(e) : labels_[e];
  }

  void CheckInRange(SubsetMask x) const {
    if (!InRange(x)) {
      throw InvalidInput("subset " + FormatMask(x) +
                         " leaves the ground set of size " +
                         std::to_string(n_));
    }
  }

 private:
  int n_ = 0;
  std::vector<std::string> labels_;
};

}  // namespace tangleforge
