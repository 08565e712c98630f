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
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tangleforge/closure.hpp"
#include "tangleforge/connectivity.hpp"
#include "tangleforge/subset.hpp"
#include "tangleforge/tangle.hpp"

namespace tangleforge {

inline constexpr int kSeparationScanLimit = 20;

// A system, a tangle and a tree compatible set bound together, with closures,
// S-membership and the strong-separation index memoized. Copies share the
// caches.
class Workspace {
 public:
  Workspace(ConnectivitySystem sys, Tangle t,
            TreeCompatibleSet s = TreeCompatibleSet::Default())
      : state_(std::make_shared<State>(std::move(sys), std::move(t),
                                       std::move(s))) {
    if (state_->tangle.n() != state_->sys.n()) {
      throw InvalidInput("tangle and system have different ground sets");
    }
  }

  const ConnectivitySystem& sys() const { return state_->sys; }
  const Tangle& tangle() const { return state_->tangle; }
  const TreeCompatibleSet& S() const { return state_->s; }
  int k() const { return state_->tangle.k(); }
  int n() const { return state_->sys.n(); }
  SubsetMask full() const { return state_->sys.full(); }
  SubsetMask Complement(SubsetMask x) const { return full() & ~x; }

  int Lambda(SubsetMask x) const { return state_->sys(x); }
  bool IsKSep(SubsetMask x) const { return Lambda(x) <= k(); }
  bool IsWeak(SubsetMask x) const { return state_->tangle.IsWeak(x); }
  bool IsStrong(SubsetMask x) const { return !IsWeak(x); }
  bool IsStrongKSeparation(SubsetMask x) const {
    return IsKSep(x) && IsStrong(x) && IsStrong(Complement(x));
  }
  Separation Sep(SubsetMask x) const { return Separation::Of(x, n(), k()); }

  SubsetMask Fcl(SubsetMask x) const {
    {
      std::lock_guard<std::mutex> lock(state_->mu);
      auto it = state_->fcl.find(x);
      if (it != state_->fcl.end()) return it->second;
    }
    const SubsetMask c = FullClosure(sys(), tangle(), x);
    std::lock_guard<std::mutex> lock(state_->mu);
    state_->fcl.emplace(x, c);
    return c;
  }

  bool InS(SubsetMask x) const {
    {
      std::lock_guard<std::mutex> lock(state_->mu);
      auto it = state_->in_s.find(x);
      if (it != state_->in_s.end()) return it->second;
    }
    bool v;
    if (S().is_default()) {
      const SubsetMask y = Complement(x);
      v = IsKSep(x) && IsStrong(y) && Fcl(y) != full();
    } else {
      v = S().Contains(sys(), tangle(), x);
    }
    std::lock_guard<std::mutex> lock(state_->mu);
    state_->in_s.emplace(x, v);
    return v;
  }

  // (X, E-X) is a (k,S)-separation.
  bool IsKS(SubsetMask x) const { return InS(x) && InS(Complement(x)); }

  bool IsSequentialSet(SubsetMask x) const {
    const SubsetMask y = Complement(x);
    if (IsWeak(y) || !IsKSep(y)) return false;
    return Fcl(y) == full();
  }

  ClassKey Key(SubsetMask x) const {
    return MakeClassKey(Fcl(x), Fcl(Complement(x)));
  }
  bool Equivalent(SubsetMask x, SubsetMask y) const { return Key(x) == Key(y); }

  // Canonical sides of all T-strong k-separations, lexicographically sorted.
  const std::vector<SubsetMask>& StrongSeparations() const {
    BuildIndex();
    return state_->strong;
  }
  // Canonical sides of all (k,S)-separations, lexicographically sorted.
  const std::vector<SubsetMask>& KSSeparations() const {
    BuildIndex();
    return state_->ks;
  }
  // Canonical sides of the T-strong k-separations equivalent to X.
  const std::vector<SubsetMask>& ClassOf(SubsetMask x) const {
    BuildIndex();
    static const std::vector<SubsetMask> kNone;
    auto it = state_->classes.find(Key(x));
    return it == state_->classes.end() ? kNone : it->second;
  }
  // Equivalence classes of (k,S)-separations, each lexicographically sorted,
  // ordered by their first member.
  std::vector<std::vector<SubsetMask>> KSClasses() const {
    BuildIndex();
    std::map<ClassKey, std::vector<SubsetMask>> by_key;
    for (SubsetMask x : state_->ks) by_key[Key(x)].push_back(x);
    std::vector<std::vector<SubsetMask>> out;
    for (auto& [key, members] : by_key) out.push_back(std::move(members));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return LexLess(a[0], b[0]); });
    return out;
  }

 private:
  struct State {
    State(ConnectivitySystem s, Tangle t, TreeCompatibleSet c)
        : sys(std::move(s)), tangle(std::move(t)), s(std::move(c)) {}
    ConnectivitySystem sys;
    Tangle tangle;
    TreeCompatibleSet s;
    std::mutex mu;
    std::unordered_map<SubsetMask, SubsetMask> fcl;
    std::unordered_map<SubsetMask, bool> in_s;
    std::once_flag index_once;
    std::vector<SubsetMask> strong, ks;
    std::map<ClassKey, std::vector<SubsetMask>> classes;
  };

  void BuildIndex() const {
    std::call_once(state_->index_once, [this] {
      if (n() > kSeparationScanLimit) {
        throw SearchSpaceTooLarge("separation enumeration needs n <= 20");
      }
      // Canonical sides contain element 0: odd masks.
      for (SubsetMask x = 1; x <= full(); x += 2) {
        if (!IsStrongKSeparation(x)) continue;
        state_->strong.push_back(x);
      }
      std::sort(state_->strong.begin(), state_->strong.end(), LexLess);
      for (SubsetMask x : state_->strong) {
        state_->classes[Key(x)].push_back(x);
        if (IsKS(x)) state_->ks.push_back(x);
      }
    });
  }

  std::shared_ptr<State> state_;
};

inline TreeCompatibleSet BuildDefaultS(const ConnectivitySystem&,
                                       const Tangle&) {
  return TreeCompatibleSet::Default();
}

inline std::vector<Separation> EnumerateKSSeparations(const Workspace& ws) {
  std::vector<Separation> out;
  for (SubsetMask x : ws.KSSeparations()) out.push_back(ws.Sep(x));
  return out;
}

inline std::vector<Separation> EnumerateKSSeparations(
    const ConnectivitySystem& sys, const Tangle& t, const TreeCompatibleSet& s) {
  return EnumerateKSSeparations(Workspace(sys, t, s));
}

struct CompatibilityViolation {
  std::string axiom;  // "definition", "S1", "S2"
  std::vector<SubsetMask> witness;
};

// Members must be non-sequential k-separating sets with strong complements;
// then S1 (closed under equivalence) and S2 (upward along strong
// k-separations) are checked over all sets.
inline std::vector<CompatibilityViolation> VerifyTreeCompatible(
    const ConnectivitySystem& sys, const Tangle& t, const TreeCompatibleSet& s) {
  Workspace ws(sys, t, s);
  std::vector<CompatibilityViolation> out;
  const SubsetMask e = ws.full();
  std::vector<SubsetMask> members;
  for (SubsetMask x = 0; x <= e; ++x) {
    if (ws.InS(x)) members.push_back(x);
  }
  for (SubsetMask x : members) {
    if (!TreeCompatibleSet::IsDefaultMember(sys, t, x)) {
      out.push_back({"definition", {x}});
    }
  }
  const auto& strong = ws.StrongSeparations();
  for (SubsetMask x : strong) {
    if (!ws.IsKS(x)) continue;
    for (SubsetMask y : ws.ClassOf(x)) {
      if (!ws.IsKS(y)) out.push_back({"S1", {x, y}});
    }
  }
  std::vector<SubsetMask> strong_sides;
  for (SubsetMask x : strong) {
    strong_sides.push_back(x);
    strong_sides.push_back(e & ~x);
  }
  for (SubsetMask x : members) {
    for (SubsetMask y : strong_sides) {
      if (IsSubset(x, y) && !ws.InS(y)) out.push_back({"S2", {x, y}});
    }
  }
  return out;
}

}  // namespace tangleforge
