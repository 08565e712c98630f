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
#include <utility>
#include <vector>

#include "tangleforge/connectivity.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/subset.hpp"
#include "tangleforge/tangle.hpp"

namespace tangleforge {

// A bipartition {X, E-X}, stored by the side that contains element 0.
struct Separation {
  SubsetMask side = 0;
  int k = 0;

  static Separation Of(SubsetMask x, int n, int k) {
    return {Contains(x, 0) ? x : (FullMask(n) & ~x), k};
  }
  SubsetMask Other(int n) const { return FullMask(n) & ~side; }

  friend bool operator==(const Separation& a, const Separation& b) {
    return a.side == b.side && a.k == b.k;
  }
};

inline SubsetMask CanonicalSide(SubsetMask x, int n) {
  return Contains(x, 0) ? x : (FullMask(n) & ~x);
}

// Greedy candidates in SizeLexLess order (kForward) or its reverse.
enum class ClosureOrder { kForward, kReverse };

// Non-empty weak subsets of `remaining`, i.e. non-empty subsets of
// (maximal member & remaining), sorted and deduplicated.
inline std::vector<SubsetMask> WeakCandidates(const Tangle& t,
                                              SubsetMask remaining,
                                              ClosureOrder order) {
  std::vector<SubsetMask> out;
  for (SubsetMask top : t.maximal_members()) {
    ForEachSubmask(top & remaining, [&](SubsetMask y) {
      if (y != 0) out.push_back(y);
    });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::sort(out.begin(), out.end(), SizeLexLess);
  if (order == ClosureOrder::kReverse) std::reverse(out.begin(), out.end());
  return out;
}

inline void RequireStrongKSeparating(const ConnectivitySystem& sys,
                                     const Tangle& t, SubsetMask x,
                                     const char* what) {
  sys.ground().CheckInRange(x);
  if (sys(x) > t.k()) {
    throw PreconditionFailed(std::string(what) + ": " + FormatMask(x) +
                             " is not " + std::to_string(t.k()) +
                             "-separating");
  }
  if (t.IsWeak(x)) {
    throw PreconditionFailed(std::string(what) + ": " + FormatMask(x) +
                             " is weak");
  }
}

// No non-empty weak Y in E-X keeps X+Y k-separating.
inline bool IsFullyClosed(const ConnectivitySystem& sys, const Tangle& t,
                          SubsetMask x) {
  RequireStrongKSeparating(sys, t, x, "IsFullyClosed");
  for (SubsetMask y :
       WeakCandidates(t, sys.Complement(x), ClosureOrder::kForward)) {
    if (sys(x | y) <= t.k()) return false;
  }
  return true;
}

// The sequence of sets the greedy closure adds; its union with X is fcl(X).
inline std::vector<SubsetMask> GreedyPartialSequence(
    const ConnectivitySystem& sys, const Tangle& t, SubsetMask x,
    ClosureOrder order = ClosureOrder::kForward) {
  RequireStrongKSeparating(sys, t, x, "FullClosure");
  std::vector<SubsetMask> seq;
  SubsetMask current = x;
  bool grew = true;
  while (grew) {
    grew = false;
    for (SubsetMask y : WeakCandidates(t, sys.Complement(current), order)) {
      if (sys(current | y) <= t.k()) {
        seq.push_back(y);
        current |= y;
        grew = true;
        break;
      }
    }
  }
  return seq;
}

inline SubsetMask FullClosure(const ConnectivitySystem& sys, const Tangle& t,
                              SubsetMask x,
                              ClosureOrder order = ClosureOrder::kForward) {
  SubsetMask out = x;
  for (SubsetMask y : GreedyPartialSequence(sys, t, x, order)) out |= y;
  return out;
}

inline bool ValidatePartialKSequence(const ConnectivitySystem& sys,
                                     const Tangle& t, SubsetMask x,
                                     const std::vector<SubsetMask>& seq) {
  SubsetMask current = x;
  for (SubsetMask y : seq) {
    if (!sys.ground().InRange(y)) return false;
    if (y == 0 || (y & current) != 0 || t.IsStrong(y)) return false;
    current |= y;
    if (sys(current) > t.k()) return false;
  }
  return true;
}

// X is sequential when E-X is strong and fcl(E-X) = E. A weak E-X, or an X
// that is not k-separating, is reported as not sequential.
inline bool IsSequential(const ConnectivitySystem& sys, const Tangle& t,
                         SubsetMask x) {
  const SubsetMask y = sys.Complement(x);
  if (t.IsWeak(y) || sys(y) > t.k()) return false;
  return FullClosure(sys, t, y) == sys.full();
}

inline bool IsSequentialSeparation(const ConnectivitySystem& sys,
                                   const Tangle& t, SubsetMask x) {
  return IsSequential(sys, t, x) || IsSequential(sys, t, sys.Complement(x));
}

using ClassKey = std::pair<SubsetMask, SubsetMask>;

inline ClassKey MakeClassKey(SubsetMask a, SubsetMask b) {
  return a < b ? ClassKey{a, b} : ClassKey{b, a};
}

inline ClassKey ClosurePair(const ConnectivitySystem& sys, const Tangle& t,
                            SubsetMask x) {
  return MakeClassKey(FullClosure(sys, t, x),
                      FullClosure(sys, t, sys.Complement(x)));
}

// The unordered pairs of full closures coincide.
inline bool EquivalentSeparations(const ConnectivitySystem& sys,
                                  const Tangle& t, const Separation& s1,
                                  const Separation& s2) {
  return ClosurePair(sys, t, s1.side) == ClosurePair(sys, t, s2.side);
}

// One-sided test: fcl(A) equals fcl(C) or fcl(D). Only meaningful when both
// separations are non-sequential.
inline bool EquivalentOneSided(const ConnectivitySystem& sys, const Tangle& t,
                               const Separation& s1, const Separation& s2) {
  const SubsetMask a = FullClosure(sys, t, s1.side);
  return a == FullClosure(sys, t, s2.side) ||
         a == FullClosure(sys, t, s2.Other(sys.n()));
}

class TreeCompatibleSet {
 public:
  // Non-sequential k-separating sets with strong complements.
  static TreeCompatibleSet Default() { return TreeCompatibleSet(); }

  static TreeCompatibleSet Explicit(std::vector<SubsetMask> sets) {
    TreeCompatibleSet s;
    s.explicit_ = true;
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    s.sets_ = std::move(sets);
    return s;
  }

  bool is_default() const { return !explicit_; }
  const std::vector<SubsetMask>& sets() const { return sets_; }

  bool Contains(const ConnectivitySystem& sys, const Tangle& t,
                SubsetMask x) const {
    if (explicit_) return std::binary_search(sets_.begin(), sets_.end(), x);
    return IsDefaultMember(sys, t, x);
  }

  static bool IsDefaultMember(const ConnectivitySystem& sys, const Tangle& t,
                              SubsetMask x) {
    const SubsetMask y = sys.Complement(x);
    if (sys(x) > t.k() || t.IsWeak(y)) return false;
    return FullClosure(sys, t, y) != sys.full();
  }

 private:
  bool explicit_ = false;
  std::vector<SubsetMask> sets_;
};

}  // namespace tangleforge
