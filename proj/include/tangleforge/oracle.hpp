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

// Brute-force reference implementations. Everything here is recomputed from
// the definitions over all subsets; the only engine code shared is lambda
// evaluation and the plain data types.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tangleforge/connectivity.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/pitree.hpp"
#include "tangleforge/subset.hpp"
#include "tangleforge/tangle.hpp"

namespace tangleforge::oracle {

inline constexpr int kOracleLimit = 14;

struct OracleFlower {
  std::vector<SubsetMask> petals;
  std::string klass;  // anemone, daisy or neither
};

struct Certificate {
  bool ok = true;
  std::string failure;
  std::vector<SubsetMask> witness;
};

class Oracle {
 public:
  // `explicit_s` empty means the default tree compatible set.
  Oracle(ConnectivitySystem sys, const Tangle& t,
         std::vector<SubsetMask> explicit_s = {}, bool use_explicit_s = false)
      : sys_(std::move(sys)),
        k_(t.k()),
        n_(sys_.n()),
        e_(sys_.full()),
        members_(t.members()),
        explicit_s_(std::move(explicit_s)),
        use_explicit_s_(use_explicit_s) {
    if (n_ > kOracleLimit) throw SearchSpaceTooLarge("oracle needs n <= 14");
    const std::size_t size = std::size_t{1} << n_;
    weak_.assign(size, 0);
    for (SubsetMask m : members_) {
      SubsetMask s = m;
      while (true) {
        weak_[s] = 1;
        if (s == 0) break;
        s = (s - 1) & m;
      }
    }
    fully_closed_.assign(size, 0);
    for (SubsetMask y = 0; y <= e_; ++y) {
      if (!Sep(y) || weak_[y]) continue;
      bool closed = true;
      const SubsetMask rest = e_ & ~y;
      for (SubsetMask z = rest; z != 0 && closed; z = (z - 1) & rest) {
        if (weak_[z] && Sep(y | z)) closed = false;
      }
      fully_closed_[y] = closed;
    }
    std::sort(explicit_s_.begin(), explicit_s_.end());
  }

  int k() const { return k_; }
  bool Sep(SubsetMask x) const { return sys_(x) <= k_; }
  bool Weak(SubsetMask x) const { return weak_[x] != 0; }
  bool Strong(SubsetMask x) const { return !Weak(x); }
  bool FullyClosed(SubsetMask x) const { return fully_closed_[x] != 0; }

  // Intersection of all fully closed k-separating supersets of X.
  SubsetMask FullClosure(SubsetMask x) const {
    auto it = fcl_.find(x);
    if (it != fcl_.end()) return it->second;
    if (!Sep(x) || Weak(x)) {
      throw PreconditionFailed("oracle closure of a weak or non-separating set");
    }
    SubsetMask acc = e_;
    const SubsetMask rest = e_ & ~x;
    SubsetMask z = rest;
    while (true) {
      if (fully_closed_[x | z]) acc &= (x | z);
      if (z == 0) break;
      z = (z - 1) & rest;
    }
    fcl_.emplace(x, acc);
    return acc;
  }

  bool Sequential(SubsetMask x) const {
    const SubsetMask y = e_ & ~x;
    return Sep(x) && Strong(y) && FullClosure(y) == e_;
  }

  bool InS(SubsetMask x) const {
    if (use_explicit_s_) {
      return std::binary_search(explicit_s_.begin(), explicit_s_.end(), x);
    }
    return Sep(x) && Strong(e_ & ~x) && !Sequential(x);
  }
  bool KS(SubsetMask x) const { return InS(x) && InS(e_ & ~x); }
  bool StrongSeparation(SubsetMask x) const {
    return Sep(x) && Strong(x) && Strong(e_ & ~x);
  }

  std::pair<SubsetMask, SubsetMask> Key(SubsetMask x) const {
    const SubsetMask a = FullClosure(x), b = FullClosure(e_ & ~x);
    return {std::min(a, b), std::max(a, b)};
  }

  // Canonical sides (element 0 inside) of all (k,S)-separations.
  std::vector<SubsetMask> KSSeparations() const {
    std::vector<SubsetMask> out;
    for (SubsetMask x = 0; x <= e_; ++x) {
      if (Contains(x, 0) && StrongSeparation(x) && KS(x)) out.push_back(x);
    }
    return out;
  }

  // Equivalence classes of strong k-separations with canonical sides.
  std::map<std::pair<SubsetMask, SubsetMask>, std::vector<SubsetMask>>
  StrongClasses() const {
    std::map<std::pair<SubsetMask, SubsetMask>, std::vector<SubsetMask>> out;
    for (SubsetMask x = 0; x <= e_; ++x) {
      if (Contains(x, 0) && StrongSeparation(x)) out[Key(x)].push_back(x);
    }
    return out;
  }

  // Classes of (k,S)-separations, each sorted numerically, sorted overall.
  std::vector<std::vector<SubsetMask>> Classes() const {
    std::map<std::pair<SubsetMask, SubsetMask>, std::vector<SubsetMask>> by;
    for (SubsetMask x : KSSeparations()) by[Key(x)].push_back(x);
    std::vector<std::vector<SubsetMask>> out;
    for (auto& [key, v] : by) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
  }

  // Tangles of order k: every orientation of every (k-1)-separation, in
  // numeric order of canonical sides, abandoning a branch as soon as three
  // chosen sides (repetition allowed) cover E. Survivors are re-checked
  // against T1-T4 literally.
  std::vector<std::vector<SubsetMask>> Tangles(int order) const {
    std::vector<SubsetMask> small;
    for (SubsetMask x = 0; x <= e_; ++x) {
      if (Contains(x, 0) && sys_(x) <= order - 1) small.push_back(x);
    }
    std::vector<std::vector<SubsetMask>> out;
    std::vector<SubsetMask> chosen;
    long long nodes = 0;
    const long long cap = SearchNodeCap(1LL << 24);
    auto covers_with = [&](SubsetMask c) {
      for (SubsetMask a : chosen) {
        for (SubsetMask b : chosen) {
          if ((a | b | c) == e_) return true;
        }
      }
      return (c | c | c) == e_;
    };
    auto walk = [&](auto&& self, std::size_t i) -> void {
      if (++nodes > cap) throw SearchSpaceTooLarge("oracle tangle search");
      if (i == small.size()) {
        if (IsTangleLiteral(chosen, order)) {
          auto t = chosen;
          std::sort(t.begin(), t.end());
          out.push_back(t);
        }
        return;
      }
      for (SubsetMask c : {small[i], e_ & ~small[i]}) {
        if (covers_with(c)) continue;
        chosen.push_back(c);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    walk(walk, 0);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool IsTangleLiteral(const std::vector<SubsetMask>& t, int order) const {
    std::set<SubsetMask> in(t.begin(), t.end());
    for (SubsetMask a : t) {
      if (sys_(a) >= order) return false;
    }
    for (SubsetMask x = 0; x <= e_; ++x) {
      if (sys_(x) <= order - 1 && !in.count(x) && !in.count(e_ & ~x)) {
        return false;
      }
    }
    for (SubsetMask a : t) {
      for (SubsetMask b : t) {
        for (SubsetMask c : t) {
          if ((a | b | c) == e_) return false;
        }
      }
    }
    for (int el = 0; el < n_; ++el) {
      if (in.count(e_ & ~Singleton(el))) return false;
    }
    return true;
  }

  // Which of the non-empty index sets I give k-separating unions.
  std::string ClassifyLiteral(const std::vector<SubsetMask>& petals) const {
    const int m = static_cast<int>(petals.size());
    bool all = true, consecutive_only = true;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
      SubsetMask u = 0;
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1) u |= petals[i];
      }
      const bool sep = Sep(u);
      const bool cons = IsCyclicInterval(mask, m);
      if (!sep) all = false;
      if (sep != cons) consecutive_only = false;
    }
    if (all) return "anemone";
    if (consecutive_only) return "daisy";
    return "neither";
  }

  static bool IsCyclicInterval(std::uint32_t mask, int m) {
    const std::uint32_t full = (1u << m) - 1;
    if (mask == 0 || mask == full) return mask == full;
    // An interval's complement is an interval; count 0->1 boundaries.
    int starts = 0;
    for (int i = 0; i < m; ++i) {
      const bool here = (mask >> i) & 1, prev = (mask >> ((i + m - 1) % m)) & 1;
      if (here && !prev) ++starts;
    }
    return starts == 1;
  }

  bool IsFlowerLiteral(const std::vector<SubsetMask>& petals) const {
    SubsetMask seen = 0;
    for (SubsetMask p : petals) {
      if ((p & seen) != 0) return false;
      seen |= p;
    }
    if (seen != e_) return false;
    const std::size_t m = petals.size();
    for (std::size_t i = 0; i < m; ++i) {
      if (Weak(petals[i]) || !Sep(petals[i])) return false;
      if (!Sep(petals[i] | petals[(i + 1) % m])) return false;
    }
    return true;
  }

  // All flowers with at most max_petals petals, anemones identified up to
  // any relabelling and daisies up to rotation and reflection.
  std::vector<OracleFlower> Flowers(int max_petals) const {
    std::vector<SubsetMask> candidates;
    for (SubsetMask x = 1; x <= e_; ++x) {
      if (Strong(x) && Sep(x)) candidates.push_back(x);
    }
    std::vector<char> is_candidate(std::size_t{1} << n_, 0);
    for (SubsetMask x : candidates) is_candidate[x] = 1;

    long long nodes = 0;
    const long long cap = SearchNodeCap(1LL << 26);
    std::set<std::vector<SubsetMask>> seen_anemones, seen_daisies;
    std::vector<OracleFlower> out;
    std::vector<SubsetMask> blocks;

    auto emit_orders = [&]() {
      const int m = static_cast<int>(blocks.size());
      std::vector<int> perm(m);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        if (m >= 3 && perm[1] > perm[m - 1]) continue;
        std::vector<SubsetMask> petals;
        for (int i : perm) petals.push_back(blocks[i]);
        if (!IsFlowerLiteral(petals)) continue;
        const std::string klass = ClassifyLiteral(petals);
        if (klass == "anemone") {
          std::vector<SubsetMask> key = petals;
          std::sort(key.begin(), key.end());
          if (!seen_anemones.insert(key).second) continue;
        } else {
          if (!seen_daisies.insert(DihedralKey(petals)).second) continue;
        }
        out.push_back({petals, klass});
      } while (std::next_permutation(perm.begin() + 1, perm.end()));
    };

    auto partitions = [&](auto&& self, SubsetMask rest) -> void {
      if (++nodes > cap) {
        throw SearchSpaceTooLarge("oracle flower enumeration exceeded cap");
      }
      if (rest == 0) {
        emit_orders();
        return;
      }
      if (static_cast<int>(blocks.size()) == max_petals) return;
      const SubsetMask low = Singleton(LowestElement(rest));
      const SubsetMask others = rest & ~low;
      SubsetMask z = others;
      while (true) {
        const SubsetMask block = z | low;
        if (is_candidate[block]) {
          blocks.push_back(block);
          self(self, rest & ~block);
          blocks.pop_back();
        }
        if (z == 0) break;
        z = (z - 1) & others;
      }
    };
    partitions(partitions, e_);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
      return a.petals.size() != b.petals.size()
                 ? a.petals.size() < b.petals.size()
                 : a.petals < b.petals;
    });
    return out;
  }

  static std::vector<SubsetMask> DihedralKey(const std::vector<SubsetMask>& p) {
    const std::size_t m = p.size();
    std::vector<SubsetMask> best = p;
    for (std::size_t s = 0; s < m; ++s) {
      std::vector<SubsetMask> fwd, back;
      for (std::size_t i = 0; i < m; ++i) {
        fwd.push_back(p[(s + i) % m]);
        back.push_back(p[(s + m - i) % m]);
      }
      best = std::min({best, fwd, back});
    }
    return best;
  }

  // Unions of petals that are k-separating, as canonical sides of strong
  // separations.
  std::set<SubsetMask> DisplayedByPartition(
      const std::vector<SubsetMask>& parts) const {
    std::set<SubsetMask> out;
    const int m = static_cast<int>(parts.size());
    for (std::uint32_t mask = 1; mask + 1 < (1u << m); ++mask) {
      SubsetMask u = 0;
      for (int i = 0; i < m; ++i) {
        if ((mask >> i) & 1) u |= parts[i];
      }
      if (Sep(u)) out.insert(Contains(u, 0) ? u : (e_ & ~u));
    }
    return out;
  }

  // Class keys of the (k,S)-separations among `displayed`.
  std::set<std::pair<SubsetMask, SubsetMask>> DisplayedKSKeys(
      const std::set<SubsetMask>& displayed) const {
    std::set<std::pair<SubsetMask, SubsetMask>> out;
    for (SubsetMask x : displayed) {
      if (StrongSeparation(x) && KS(x)) out.insert(Key(x));
    }
    return out;
  }

  // Equivalent to a displayed separation, or to one with a side inside a
  // part.
  bool Conforms(SubsetMask sep, const std::set<SubsetMask>& displayed,
                const std::vector<SubsetMask>& parts) const {
    const auto key = Key(sep);
    for (SubsetMask y = 0; y <= e_; ++y) {
      if (!Contains(y, 0) || !StrongSeparation(y) || Key(y) != key) continue;
      if (displayed.count(y)) return true;
      for (SubsetMask p : parts) {
        if (IsSubset(y, p) || IsSubset(e_ & ~y, p)) return true;
      }
    }
    return false;
  }

  std::vector<SubsetMask> LoosePetalsLiteral(
      const std::vector<SubsetMask>& petals, bool anemone) const {
    std::vector<SubsetMask> out;
    const int m = static_cast<int>(petals.size());
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        if (i == j) continue;
        const bool adjacent = (j == (i + 1) % m) || (i == (j + 1) % m);
        if (!anemone && !adjacent) continue;
        if (IsSubset(petals[i], FullClosure(petals[j]))) {
          out.push_back(petals[i]);
          break;
        }
      }
    }
    return out;
  }

  // Literal P1-P5 plus "every (k,S)-class has a displayed member".
  Certificate CertifyTree(const PiTree& t, bool require_maximal = true) const {
    try {
      t.CheckStructure();
    } catch (const Error& err) {
      return {false, std::string("structure: ") + err.what(), {}};
    }
    std::set<SubsetMask> displayed;
    std::vector<SubsetMask> bags;
    for (int v = 0; v < t.size(); ++v) {
      if (t.IsBag(v)) bags.push_back(t.vertices[v].bag);
    }
    for (auto [u, v] : t.Edges()) {
      const SubsetMask side = t.BagsBeyond(u, v);
      if (!StrongSeparation(side)) return {false, "P1", {side}};
      if (t.IsBag(u) && t.IsBag(v) && !KS(side)) return {false, "P1", {side}};
      displayed.insert(Contains(side, 0) ? side : (e_ & ~side));
    }
    for (int v = 0; v < t.size(); ++v) {
      if (t.IsBag(v)) continue;
      std::vector<SubsetMask> parts;
      for (int w : t.vertices[v].nbrs) parts.push_back(t.BagsBeyond(w, v));
      if (!IsFlowerLiteral(parts)) return {false, "P3/P4 flower", parts};
      const std::string klass = ClassifyLiteral(parts);
      const bool anemone = t.vertices[v].kind == PiTree::Kind::kAnemone;
      // With three petals every union is consecutive, so both labels fit.
      if (anemone && klass != "anemone") return {false, "P3 class", parts};
      if (!anemone && klass != "daisy" && !(parts.size() == 3 && klass == "anemone")) {
        return {false, "P4 class", parts};
      }
      const auto shown = DisplayedByPartition(parts);
      if (DisplayedKSKeys(shown).size() < 2) return {false, "P3/P4 order", parts};
      if (!LoosePetalsLiteral(parts, anemone).empty()) {
        return {false, "P3/P4 loose", LoosePetalsLiteral(parts, anemone)};
      }
      displayed.insert(shown.begin(), shown.end());
    }
    for (SubsetMask x : KSSeparations()) {
      if (!Conforms(x, displayed, bags)) return {false, "P5", {x}};
    }
    if (require_maximal) {
      const auto shown = DisplayedKSKeys(displayed);
      for (SubsetMask x : KSSeparations()) {
        if (!shown.count(Key(x))) return {false, "not maximal", {x}};
      }
    }
    return {};
  }

 private:
  ConnectivitySystem sys_;
  int k_;
  int n_;
  SubsetMask e_;
  std::vector<SubsetMask> members_;
  std::vector<SubsetMask> explicit_s_;
  bool use_explicit_s_;
  std::vector<char> weak_;
  std::vector<char> fully_closed_;
  mutable std::map<SubsetMask, SubsetMask> fcl_;
};

}  // namespace tangleforge::oracle
