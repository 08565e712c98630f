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
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "tangleforge/error.hpp"
#include "tangleforge/memo.hpp"
#include "tangleforge/rank.hpp"
#include "tangleforge/subset.hpp"

namespace tangleforge {

inline constexpr int kExhaustiveAxiomLimit = 12;
inline constexpr int kAxiomSamples = 1 << 20;

class ConnectivitySystem {
 public:
  enum class Kind { kMatroid, kGraph, kPolymatroidR8, kTable };

  static ConnectivitySystem FromMatroid(RankFunction r,
                                        std::vector<std::string> labels = {}) {
    const int full = r.FullRank();
    ConnectivitySystem sys(Kind::kMatroid, GroundSet(r.n(), std::move(labels)),
                           [r, full, n = r.n()](SubsetMask x) {
                             return r(x) + r(FullMask(n) & ~x) - full + 1;
                           });
    sys.rank_ = std::move(r);
    return sys;
  }

  // Element i is edges[i]. A vertex is on the boundary of X when it meets a
  // non-loop edge in X and a non-loop edge outside X.
  static ConnectivitySystem FromGraph(std::vector<std::pair<int, int>> edges,
                                      std::vector<std::string> labels = {}) {
    const int n = static_cast<int>(edges.size());
    std::vector<int> ids;
    for (auto [u, v] : edges) {
      ids.push_back(u);
      ids.push_back(v);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    std::vector<SubsetMask> incident(ids.size(), 0);
    for (int e = 0; e < n; ++e) {
      auto [u, v] = edges[e];
      if (u == v) continue;
      for (int w : {u, v}) {
        const auto at = std::lower_bound(ids.begin(), ids.end(), w) - ids.begin();
        incident[at] |= Singleton(e);
      }
    }
    ConnectivitySystem sys(Kind::kGraph, GroundSet(n, std::move(labels)),
                           [incident](SubsetMask x) {
                             int count = 0;
                             for (SubsetMask inc : incident) {
                               if ((inc & x) != 0 && (inc & ~x) != 0) ++count;
                             }
                             return count;
                           });
    sys.edges_ = std::move(edges);
    return sys;
  }

  // f(X) = r(X) + ell for non-empty X, f(empty) = 0, r the rank of R_8;
  // lambda(X) = f(X) + f(E-X) - f(E) + 1.
  static ConnectivitySystem R8Polymatroid(int ell) {
    if (ell < 1) throw InvalidInput("ell must be a positive integer");
    RankFunction r = BuildR8Rank();
    auto f = [r, ell](SubsetMask x) { return x == 0 ? 0 : r(x) + ell; };
    ConnectivitySystem sys(Kind::kPolymatroidR8, GroundSet(8, R8Labels()),
                           [f](SubsetMask x) {
                             return f(x) + f(FullMask(8) & ~x) - f(FullMask(8)) + 1;
                           });
    sys.rank_ = std::move(r);
    sys.ell_ = ell;
    return sys;
  }

  static ConnectivitySystem FromTable(std::vector<int> lambda,
                                      std::vector<std::string> labels = {}) {
    int n = 0;
    while ((std::size_t{1} << n) < lambda.size()) ++n;
    if (lambda.empty() || (std::size_t{1} << n) != lambda.size() || n < 1) {
      throw InvalidInput("lambda table length must be 2^n with n >= 1");
    }
    auto shared = std::make_shared<std::vector<int>>(std::move(lambda));
    return ConnectivitySystem(Kind::kTable, GroundSet(n, std::move(labels)),
                              [shared](SubsetMask x) { return (*shared)[x]; });
  }

  // Arbitrary lambda given as a callable; provenance is reported as a table.
  static ConnectivitySystem FromFunction(int n,
                                         std::function<int(SubsetMask)> f,
                                         std::vector<std::string> labels = {}) {
    return ConnectivitySystem(Kind::kTable, GroundSet(n, std::move(labels)),
                              std::move(f));
  }

  const GroundSet& ground() const { return impl_->ground; }
  int n() const { return impl_->ground.size(); }
  SubsetMask full() const { return impl_->ground.full(); }
  SubsetMask Complement(SubsetMask x) const { return full() & ~x; }
  Kind kind() const { return impl_->kind; }

  int Lambda(SubsetMask x) const {
    return impl_->memo.GetOrCompute(x, impl_->eval);
  }
  int operator()(SubsetMask x) const { return Lambda(x); }

  bool IsKSeparating(SubsetMask x, int k) const { return Lambda(x) <= k; }
  bool IsExactlyKSeparating(SubsetMask x, int k) const {
    return Lambda(x) == k;
  }

  // Present for matroid and R_8 polymatroid systems.
  const std::optional<RankFunction>& rank() const { return rank_; }
  const std::vector<std::pair<int, int>>& graph_edges() const { return edges_; }
  int ell() const { return ell_; }

  void ClearCache() const { impl_->memo.Clear(); }

 private:
  struct Impl {
    Impl(Kind k, GroundSet g, std::function<int(SubsetMask)> f)
        : kind(k), ground(std::move(g)), eval(std::move(f)), memo(ground.size()) {}
    Kind kind;
    GroundSet ground;
    std::function<int(SubsetMask)> eval;
    SetFunctionMemo memo;
  };

  ConnectivitySystem(Kind kind, GroundSet ground,
                     std::function<int(SubsetMask)> f)
      : impl_(std::make_shared<Impl>(kind, std::move(ground), std::move(f))) {}

  std::shared_ptr<Impl> impl_;
  std::optional<RankFunction> rank_;
  std::vector<std::pair<int, int>> edges_;
  int ell_ = 0;
};

inline std::string KindName(ConnectivitySystem::Kind kind) {
  switch (kind) {
    case ConnectivitySystem::Kind::kMatroid: return "matroid";
    case ConnectivitySystem::Kind::kGraph: return "graph";
    case ConnectivitySystem::Kind::kPolymatroidR8: return "r8_polymatroid";
    case ConnectivitySystem::Kind::kTable: return "table";
  }
  return "table";
}

struct AxiomViolation {
  std::string property;  // symmetry, submodularity, lower_bound, difference
  SubsetMask x = 0;
  SubsetMask y = 0;
};

// Reports the first witness found for each property.
inline std::vector<AxiomViolation> VerifyConnectivityAxioms(
    const ConnectivitySystem& sys, std::uint64_t seed = 1) {
  const int n = sys.n();
  const SubsetMask e = sys.full();
  const int at_empty = sys(0);
  std::optional<AxiomViolation> sym, sub, low, diff;

  auto single = [&](SubsetMask x) {
    if (!sym && sys(x) != sys(e & ~x)) sym = AxiomViolation{"symmetry", x, 0};
    if (!low && sys(x) < at_empty) low = AxiomViolation{"lower_bound", x, 0};
  };
  auto pair = [&](SubsetMask x, SubsetMask y) {
    const int lx = sys(x), ly = sys(y);
    if (!sub && lx + ly < sys(x | y) + sys(x & y)) {
      sub = AxiomViolation{"submodularity", x, y};
    }
    if (!diff && lx + ly < sys(x & ~y) + sys(y & ~x)) {
      diff = AxiomViolation{"difference", x, y};
    }
  };

  if (n <= kExhaustiveAxiomLimit) {
    for (SubsetMask x = 0; x <= e; ++x) single(x);
    for (SubsetMask x = 0; x <= e && !(sub && diff); ++x) {
      for (SubsetMask y = x + 1; y <= e; ++y) pair(x, y);
    }
  } else {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < kAxiomSamples; ++i) {
      const SubsetMask x = rng() & e, y = rng() & e;
      single(x);
      pair(x, y);
    }
  }
  std::vector<AxiomViolation> out;
  for (const auto& v : {sym, sub, low, diff}) {
    if (v) out.push_back(*v);
  }
  return out;
}

// Every (k-1)-separation (lambda_M <= k-1) has a side of rank <= k-2.
inline bool IsVerticallyKConnected(const RankFunction& r, int k) {
  if (k < 2) throw PreconditionFailed("vertical connectivity needs k >= 2");
  if (r.n() > 24) throw SearchSpaceTooLarge("vertical connectivity needs n <= 24");
  const SubsetMask e = FullMask(r.n());
  const int full = r.FullRank();
  for (SubsetMask x = 0; x <= e; ++x) {
    const SubsetMask y = e & ~x;
    if (x > y) continue;
    const int rx = r(x), ry = r(y);
    if (rx + ry - full + 1 <= k - 1 && rx > k - 2 && ry > k - 2) return false;
  }
  return true;
}

}  // namespace tangleforge
