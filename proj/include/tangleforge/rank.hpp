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

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tangleforge/error.hpp"
#include "tangleforge/memo.hpp"
#include "tangleforge/subset.hpp"

namespace tangleforge {

// Exhaustive checks run up to this many elements; larger inputs are sampled.
inline constexpr int kExhaustiveRankLimit = 14;
inline constexpr int kRankSamples = 200000;

struct RankViolation {
  std::string axiom;  // "empty", "unit_increase", "submodular"
  SubsetMask x = 0;
  SubsetMask y = 0;
};

class RankFunction {
 public:
  enum class Source { kTable, kUniform, kGraphic, kBases };

  static RankFunction FromTable(std::vector<int> table) {
    int n = 0;
    while ((std::size_t{1} << n) < table.size()) ++n;
    if (table.empty() || (std::size_t{1} << n) != table.size()) {
      throw InvalidInput("rank table length must be a power of two");
    }
    auto shared = std::make_shared<std::vector<int>>(std::move(table));
    return RankFunction(Source::kTable, n,
                        [shared](SubsetMask x) { return (*shared)[x]; });
  }

  static RankFunction Uniform(int r, int n) {
    if (r < 0 || r > n) throw InvalidInput("uniform matroid needs 0 <= r <= n");
    RankFunction rf(Source::kUniform, n,
                    [r](SubsetMask x) { return std::min(Size(x), r); });
    rf.uniform_ = {r, n};
    return rf;
  }

  // Cycle matroid; element i is edges[i]. Vertex ids are arbitrary ints.
  static RankFunction Graphic(std::vector<std::pair<int, int>> edges) {
    const int n = static_cast<int>(edges.size());
    std::vector<int> ids;
    for (auto [u, v] : edges) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<std::pair<int, int>> compact;
    for (auto [u, v] : edges) {
      auto idx = [&](int w) {
        return static_cast<int>(std::lower_bound(ids.begin(), ids.end(), w) -
                                ids.begin());
      };
      compact.emplace_back(idx(u), idx(v));
    }
    const int nv = static_cast<int>(ids.size());
    RankFunction rf(Source::kGraphic, n, [compact, nv](SubsetMask x) {
      std::vector<int> parent(nv);
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
      };
      int rank = 0;
      for (int e : Elements(x)) {
        const int a = find(compact[e].first), b = find(compact[e].second);
        if (a != b) {
          parent[a] = b;
          ++rank;
        }
      }
      return rank;
    });
    rf.edges_ = std::move(edges);
    return rf;
  }

  static RankFunction FromBases(int n, std::vector<SubsetMask> bases) {
    if (bases.empty()) throw InvalidInput("a matroid needs at least one basis");
    const int r = Size(bases.front());
    for (SubsetMask b : bases) {
      if ((b & ~FullMask(n)) != 0) throw InvalidInput("basis outside ground set");
      if (Size(b) != r) throw InvalidInput("bases differ in size");
    }
    auto shared = std::make_shared<std::vector<SubsetMask>>(std::move(bases));
    return RankFunction(Source::kBases, n, [shared](SubsetMask x) {
      int best = 0;
      for (SubsetMask b : *shared) best = std::max(best, Size(x & b));
      return best;
    });
  }

  int n() const { return impl_->n; }
  Source source() const { return impl_->source; }
  int operator()(SubsetMask x) const {
    return impl_->memo.GetOrCompute(x, impl_->eval);
  }
  int FullRank() const { return (*this)(FullMask(n())); }
  const std::vector<std::pair<int, int>>& graph_edges() const { return edges_; }
  std::pair<int, int> uniform_parameters() const { return uniform_; }
  void ClearCache() const { impl_->memo.Clear(); }

 private:
  struct Impl {
    Impl(Source s, int n, std::function<int(SubsetMask)> f)
        : source(s), n(n), eval(std::move(f)), memo(n) {}
    Source source;
    int n;
    std::function<int(SubsetMask)> eval;
    SetFunctionMemo memo;
  };

  RankFunction(Source s, int n, std::function<int(SubsetMask)> f) {
    if (n < 1 || n > kMaxGroundSize) {
      throw InvalidInput("ground set size must be in [1, 64]");
    }
    impl_ = std::make_shared<Impl>(s, n, std::move(f));
  }

  std::shared_ptr<Impl> impl_;
  std::vector<std::pair<int, int>> edges_;
  std::pair<int, int> uniform_{-1, -1};
};

// Local checks: r(X+e)-r(X) in {0,1} and r(X+a)+r(X+b) >= r(X+a+b)+r(X).
// Together with r(empty)=0 these imply monotonicity and full submodularity.
inline std::vector<RankViolation> VerifyRankAxioms(const RankFunction& r,
                                                   std::uint64_t seed = 1) {
  std::vector<RankViolation> out;
  const int n = r.n();
  if (r(0) != 0) out.push_back({"empty", 0, 0});
  auto check_at = [&](SubsetMask x) {
    const int rx = r(x);
    for (int a = 0; a < n; ++a) {
      if (Contains(x, a)) continue;
      const int ra = r(x | Singleton(a));
      if (ra - rx != 0 && ra - rx != 1) {
        out.push_back({"unit_increase", x, Singleton(a)});
        return false;
      }
      for (int b = a + 1; b < n; ++b) {
        if (Contains(x, b)) continue;
        const int rb = r(x | Singleton(b));
        const int rab = r(x | Singleton(a) | Singleton(b));
        if (ra + rb < rab + rx) {
          out.push_back({"submodular", x | Singleton(a), x | Singleton(b)});
          return false;
        }
      }
    }
    return true;
  };
  if (n <= kExhaustiveRankLimit) {
    for (SubsetMask x = 0; x <= FullMask(n); ++x) {
      if (!check_at(x)) break;
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kRankSamples / (n * n) + 1; ++i) {
      if (!check_at(rng() & FullMask(n))) break;
    }
  }
  return out;
}

inline RankFunction CheckedRank(RankFunction r) {
  auto bad = VerifyRankAxioms(r);
  if (!bad.empty()) {
    throw InvalidInput("not a matroid rank function: " + bad[0].axiom +
                       " fails at " + FormatMask(bad[0].x) + ", " +
                       FormatMask(bad[0].y));
  }
  return r;
}

// The 4-point planes of the cube: six faces and six diagonal planes through
// opposite edges. Elements are 0-based; label i+1 is element i.
inline std::vector<SubsetMask> R8Planes() {
  const std::vector<std::vector<int>> planes = {
      {1, 2, 3, 4}, {5, 6, 7, 8}, {1, 2, 5, 6}, {2, 3, 6, 7},
      {3, 4, 7, 8}, {1, 4, 5, 8}, {1, 3, 5, 7}, {2, 4, 6, 8},
      {1, 2, 7, 8}, {3, 4, 5, 6}, {1, 4, 6, 7}, {2, 3, 5, 8},
  };
  std::vector<SubsetMask> out;
  for (const auto& p : planes) {
    SubsetMask m = 0;
    for (int label : p) m |= Singleton(label - 1);
    out.push_back(m);
  }
  return out;
}

inline RankFunction BuildR8Rank() {
  const auto planes = R8Planes();
  std::vector<int> table(256);
  for (SubsetMask x = 0; x < 256; ++x) {
    const int s = Size(x);
    if (s <= 3) {
      table[x] = s;
    } else if (s == 4) {
      table[x] = std::find(planes.begin(), planes.end(), x) != planes.end()
                     ? 3
                     : 4;
    } else {
      table[x] = 4;
    }
  }
  return RankFunction::FromTable(std::move(table));
}

inline std::vector<std::string> R8Labels() {
  return {"1", "2", "3", "4", "5", "6", "7", "8"};
}

}  // namespace tangleforge
