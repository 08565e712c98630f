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
#include <string>
#include <vector>

#include "tangleforge/connectivity.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/subset.hpp"

namespace tangleforge {

// T2 verification and tangle enumeration scan all 2^n subsets.
inline constexpr int kTangleScanLimit = 20;

class Tangle {
 public:
  Tangle() = default;
  Tangle(int k, int n, std::vector<SubsetMask> members)
      : k_(k), n_(n), members_(std::move(members)) {
    for (SubsetMask m : members_) {
      if ((m & ~FullMask(n)) != 0) {
        throw InvalidInput("tangle member " + FormatMask(m) +
                           " leaves the ground set");
      }
    }
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()),
                   members_.end());
    // Larger sets first so a candidate is only compared against possible
    // supersets already accepted.
    std::vector<SubsetMask> by_size = members_;
    std::sort(by_size.begin(), by_size.end(), [](SubsetMask a, SubsetMask b) {
      return Size(a) != Size(b) ? Size(a) > Size(b) : a < b;
    });
    for (SubsetMask m : by_size) {
      bool dominated = false;
      for (SubsetMask top : maximal_) {
        if (IsSubset(m, top)) {
          dominated = true;
          break;
        }
      }
      if (!dominated) maximal_.push_back(m);
    }
    std::sort(maximal_.begin(), maximal_.end());
  }

  int k() const { return k_; }
  int n() const { return n_; }
  SubsetMask ground() const { return FullMask(n_); }
  const std::vector<SubsetMask>& members() const { return members_; }
  const std::vector<SubsetMask>& maximal_members() const { return maximal_; }

  bool IsMember(SubsetMask x) const {
    return std::binary_search(members_.begin(), members_.end(), x);
  }
  bool IsWeak(SubsetMask x) const {
    for (SubsetMask top : maximal_) {
      if (IsSubset(x, top)) return true;
    }
    return false;
  }
  bool IsStrong(SubsetMask x) const { return !IsWeak(x); }

  friend bool operator==(const Tangle& a, const Tangle& b) {
    return a.k_ == b.k_ && a.n_ == b.n_ && a.members_ == b.members_;
  }

 private:
  int k_ = 0;
  int n_ = 0;
  std::vector<SubsetMask> members_;
  std::vector<SubsetMask> maximal_;
};

inline void CheckPartition(int n, const std::vector<SubsetMask>& parts) {
  SubsetMask seen = 0;
  for (SubsetMask p : parts) {
    if ((p & ~FullMask(n)) != 0) {
      throw NotAPartition("part " + FormatMask(p) + " leaves the ground set");
    }
    if ((seen & p) != 0) {
      throw NotAPartition("parts overlap in " + FormatMask(seen & p));
    }
    seen |= p;
  }
  if (seen != FullMask(n)) {
    throw NotAPartition("parts miss " + FormatMask(FullMask(n) & ~seen));
  }
}

inline bool IsStrongPartition(const Tangle& t,
                              const std::vector<SubsetMask>& parts) {
  CheckPartition(t.n(), parts);
  for (SubsetMask p : parts) {
    if (t.IsWeak(p)) return false;
  }
  return true;
}

struct TangleViolation {
  std::string axiom;  // T1..T4
  std::vector<SubsetMask> witness;
};

inline std::vector<TangleViolation> VerifyTangle(const ConnectivitySystem& sys,
                                                 const Tangle& t) {
  if (t.n() != sys.n()) {
    throw InvalidInput("tangle and system have different ground sets");
  }
  if (sys.n() > kTangleScanLimit) {
    throw SearchSpaceTooLarge("T2 verification needs n <= 20");
  }
  std::vector<TangleViolation> out;
  const int k = t.k();
  const SubsetMask e = sys.full();
  for (SubsetMask a : t.members()) {
    if (sys(a) >= k) out.push_back({"T1", {a}});
  }
  for (SubsetMask x = 0; x <= e; ++x) {
    const SubsetMask y = e & ~x;
    if (x > y || sys(x) > k - 1) continue;
    if (!t.IsMember(x) && !t.IsMember(y)) out.push_back({"T2", {x, y}});
  }
  const auto& top = t.maximal_members();
  for (std::size_t i = 0; i < top.size(); ++i) {
    for (std::size_t j = i; j < top.size(); ++j) {
      for (std::size_t l = j; l < top.size(); ++l) {
        if ((top[i] | top[j] | top[l]) == e) {
          out.push_back({"T3", {top[i], top[j], top[l]}});
        }
      }
    }
  }
  for (int el = 0; el < sys.n(); ++el) {
    const SubsetMask co = e & ~Singleton(el);
    if (t.IsMember(co)) out.push_back({"T4", {co}});
  }
  return out;
}

// No eight members (repetition allowed) cover E. Branches on the members that
// contain the lowest uncovered element.
inline bool IsRobust(const Tangle& t) {
  const SubsetMask e = t.ground();
  const auto& top = t.maximal_members();
  long long nodes = 0;
  const long long cap = SearchNodeCap(1LL << 24);
  auto covers = [&](auto&& self, SubsetMask covered, int used) -> bool {
    if (covered == e) return true;
    if (used == 8) return false;
    if (++nodes > cap) throw SearchSpaceTooLarge("robustness search exceeded cap");
    const int el = LowestElement(e & ~covered);
    for (SubsetMask m : top) {
      if (Contains(m, el) && self(self, covered | m, used + 1)) return true;
    }
    return false;
  };
  return !covers(covers, 0, 0);
}

// {A : r(A) <= k-2} for a vertically k-connected matroid of rank at least
// max(3k-5, 2).
inline Tangle CanonicalVerticalTangle(const RankFunction& r, int k) {
  if (k < 2) throw PreconditionFailed("canonical tangle needs k >= 2");
  const int bound = std::max(3 * k - 5, 2);
  if (r.FullRank() < bound) {
    throw PreconditionFailed("rank bound: r(M) = " + std::to_string(r.FullRank()) +
                             " < " + std::to_string(bound));
  }
  if (r.n() > kTangleScanLimit) {
    throw SearchSpaceTooLarge("canonical tangle listing needs n <= 20");
  }
  if (!IsVerticallyKConnected(r, k)) {
    throw PreconditionFailed("not vertically " + std::to_string(k) +
                             "-connected");
  }
  std::vector<SubsetMask> members;
  for (SubsetMask x = 0; x <= FullMask(r.n()); ++x) {
    if (r(x) <= k - 2) members.push_back(x);
  }
  return Tangle(k, r.n(), std::move(members));
}

// All tangles of order k. Each pair {X, E-X} with lambda(X) <= k-1 is oriented
// (exactly one side becomes a member), smaller sides first.
inline std::vector<Tangle> EnumerateTangles(const ConnectivitySystem& sys,
                                            int k) {
  if (sys.n() > kTangleScanLimit) {
    throw SearchSpaceTooLarge("tangle enumeration needs n <= 20");
  }
  const SubsetMask e = sys.full();
  struct Choice {
    SubsetMask small, big;
  };
  std::vector<Choice> pairs;
  for (SubsetMask x = 0; x <= e; ++x) {
    const SubsetMask y = e & ~x;
    if (sys(x) > k - 1) continue;
    if (Size(x) < Size(y) || (Size(x) == Size(y) && x < y)) {
      pairs.push_back({x, y});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Choice& a, const Choice& b) {
    return SizeLexLess(a.small, b.small);
  });

  std::vector<Tangle> out;
  std::vector<SubsetMask> chosen;
  long long nodes = 0;
  const long long cap = SearchNodeCap();
  auto admissible = [&](SubsetMask c) {
    if (c == e || Size(e & ~c) == 1) return false;  // T3 with c three times, T4
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if ((c | chosen[i]) == e) return false;
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        if ((c | chosen[i] | chosen[j]) == e) return false;
      }
    }
    return true;
  };
  auto branch = [&](auto&& self, std::size_t at) -> void {
    if (++nodes > cap) {
      throw SearchSpaceTooLarge("tangle enumeration exceeded " +
                                std::to_string(cap) + " nodes");
    }
    if (at == pairs.size()) {
      out.emplace_back(k, sys.n(), chosen);
      return;
    }
    for (SubsetMask side : {pairs[at].small, pairs[at].big}) {
      if (!admissible(side)) continue;
      chosen.push_back(side);
      self(self, at + 1);
      chosen.pop_back();
    }
  };
  branch(branch, 0);
  return out;
}

}  // namespace tangleforge
