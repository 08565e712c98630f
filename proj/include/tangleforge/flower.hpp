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
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tangleforge/closure.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/subset.hpp"
#include "tangleforge/workspace.hpp"

namespace tangleforge {

enum class FlowerClass { kAnemone, kDaisy, kUnclassified };

inline std::string FlowerClassName(FlowerClass c) {
  switch (c) {
    case FlowerClass::kAnemone: return "anemone";
    case FlowerClass::kDaisy: return "daisy";
    case FlowerClass::kUnclassified: return "unclassified";
  }
  return "unclassified";
}

// Union enumeration over petal index sets is exponential in the petal count.
inline constexpr int kMaxPetals = 24;

struct Flower {
  std::vector<SubsetMask> petals;
  int k = 0;
  FlowerClass klass = FlowerClass::kUnclassified;
  // Canonical sides of the k-separating proper unions of petals, sorted.
  std::vector<SubsetMask> displayed;

  int size() const { return static_cast<int>(petals.size()); }
  SubsetMask Union(std::uint32_t index_set) const {
    SubsetMask u = 0;
    for (int i = 0; i < size(); ++i) {
      if ((index_set >> i) & 1) u |= petals[i];
    }
    return u;
  }
  bool Displays(SubsetMask canonical_side) const {
    return std::binary_search(displayed.begin(), displayed.end(),
                              canonical_side);
  }
};

class FlowerViolation : public Error {
 public:
  enum class Kind { kWeakPetal, kNotKSeparating };
  FlowerViolation(Kind kind, int petal, SubsetMask witness, std::string what)
      : Error(std::move(what)), kind(kind), petal(petal), witness(witness) {}
  Kind kind;
  int petal;           // for kWeakPetal
  SubsetMask witness;  // the weak petal or the offending union
};

class DichotomyViolation : public InvariantViolation {
 public:
  DichotomyViolation(std::uint32_t index_set, std::string what)
      : InvariantViolation(std::move(what)), index_set(index_set) {}
  std::uint32_t index_set;
};

class InvalidBreakpoints : public Error {
 public:
  using Error::Error;
};

// Every petal is weakly crossed by a non-conforming (k,S)-separation, so the
// flower cannot be refined to display it.
class NonRobustObstruction : public Error {
 public:
  NonRobustObstruction(Separation witness, std::string what)
      : Error(std::move(what)), witness(witness) {}
  Separation witness;
};

inline bool IsCyclicInterval(std::uint32_t index_set, int m) {
  const std::uint32_t all = m >= 32 ? ~0u : ((1u << m) - 1);
  if (index_set == 0 || index_set == all) return index_set == all;
  int starts = 0;
  for (int i = 0; i < m; ++i) {
    const bool here = (index_set >> i) & 1;
    const bool prev = (index_set >> ((i + m - 1) % m)) & 1;
    if (here && !prev) ++starts;
  }
  return starts == 1;
}

// Anemone when every non-empty union is k-separating, daisy when exactly the
// cyclic intervals are. Up to three petals every index set is an interval.
inline FlowerClass Classify(const Workspace& ws,
                            const std::vector<SubsetMask>& petals) {
  const int m = static_cast<int>(petals.size());
  if (m <= 3) return FlowerClass::kAnemone;
  if (m > kMaxPetals) throw SearchSpaceTooLarge("too many petals to classify");
  bool all = true, intervals_only = true;
  std::uint32_t bad_all = 0, bad_interval = 0;
  for (std::uint32_t set = 1; set < (1u << m); ++set) {
    SubsetMask u = 0;
    for (int i = 0; i < m; ++i) {
      if ((set >> i) & 1) u |= petals[i];
    }
    const bool sep = ws.IsKSep(u);
    if (!sep && all) {
      all = false;
      bad_all = set;
    }
    if (sep != IsCyclicInterval(set, m) && intervals_only) {
      intervals_only = false;
      bad_interval = set;
    }
    if (!all && !intervals_only) {
      throw DichotomyViolation(
          bad_interval, "flower is neither an anemone nor a daisy (index sets " +
                            FormatMask(bad_all) + ", " +
                            FormatMask(bad_interval) + ")");
    }
  }
  return all ? FlowerClass::kAnemone : FlowerClass::kDaisy;
}

inline std::vector<SubsetMask> DisplayedUnions(const Workspace& ws,
                                               const std::vector<SubsetMask>& petals,
                                               FlowerClass klass) {
  const int m = static_cast<int>(petals.size());
  std::vector<SubsetMask> out;
  if (m < 2) return out;
  auto add = [&](SubsetMask u) {
    if (ws.IsKSep(u)) out.push_back(CanonicalSide(u, ws.n()));
  };
  if (klass == FlowerClass::kDaisy) {
    for (int start = 0; start < m; ++start) {
      SubsetMask u = 0;
      for (int len = 1; len < m; ++len) {
        u |= petals[(start + len - 1) % m];
        add(u);
      }
    }
  } else {
    if (m > kMaxPetals) throw SearchSpaceTooLarge("too many petals");
    // Index sets avoiding the last petal cover every unordered split once.
    for (std::uint32_t set = 1; set < (1u << (m - 1)); ++set) {
      SubsetMask u = 0;
      for (int i = 0; i < m - 1; ++i) {
        if ((set >> i) & 1) u |= petals[i];
      }
      add(u);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Checks the definition directly: a strong partition whose petals and
// cyclically consecutive pairs are k-separating.
inline Flower VerifyFlower(const Workspace& ws, std::vector<SubsetMask> petals) {
  CheckPartition(ws.n(), petals);
  const int m = static_cast<int>(petals.size());
  if (m == 0) throw NotAPartition("a flower needs at least one petal");
  for (int i = 0; i < m; ++i) {
    if (ws.IsWeak(petals[i])) {
      throw FlowerViolation(FlowerViolation::Kind::kWeakPetal, i, petals[i],
                            "petal " + std::to_string(i) + " " +
                                FormatMask(petals[i]) + " is weak");
    }
  }
  for (int i = 0; i < m; ++i) {
    if (!ws.IsKSep(petals[i])) {
      throw FlowerViolation(FlowerViolation::Kind::kNotKSeparating, i,
                            petals[i],
                            FormatMask(petals[i]) + " is not k-separating");
    }
    const SubsetMask pair = petals[i] | petals[(i + 1) % m];
    if (!ws.IsKSep(pair)) {
      throw FlowerViolation(FlowerViolation::Kind::kNotKSeparating, i, pair,
                            FormatMask(pair) + " is not k-separating");
    }
  }
  Flower f;
  f.k = ws.k();
  f.klass = Classify(ws, petals);
  f.displayed = DisplayedUnions(ws, petals, f.klass);
  f.petals = std::move(petals);
  return f;
}

// For four or more petals: a strong partition whose non-cyclic consecutive
// pairs are k-separating. Used to cross-check VerifyFlower.
inline bool SatisfiesConsecutiveShortcut(const Workspace& ws,
                                         const std::vector<SubsetMask>& petals) {
  for (SubsetMask p : petals) {
    if (ws.IsWeak(p)) return false;
  }
  for (std::size_t i = 0; i + 1 < petals.size(); ++i) {
    if (!ws.IsKSep(petals[i] | petals[i + 1])) return false;
  }
  return true;
}

// `starts` are the sorted first indices of the runs; the run beginning at
// starts.back() wraps around to starts.front() - 1.
inline Flower Concatenate(const Workspace& ws, const Flower& f,
                          const std::vector<int>& starts) {
  const int m = f.size();
  if (starts.empty()) throw InvalidBreakpoints("no breakpoints");
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (starts[i] < 0 || starts[i] >= m ||
        (i > 0 && starts[i] <= starts[i - 1])) {
      throw InvalidBreakpoints("breakpoints must be increasing indices in [0, " +
                               std::to_string(m) + ")");
    }
  }
  std::vector<SubsetMask> petals;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const int from = starts[i];
    const int to = i + 1 < starts.size() ? starts[i + 1] : starts[0] + m;
    SubsetMask u = 0;
    for (int j = from; j < to; ++j) u |= f.petals[j % m];
    petals.push_back(u);
  }
  return VerifyFlower(ws, std::move(petals));
}

// Petals contained in the full closure of a petal that is consecutive to
// them up to relabelling: neighbours for daisies, any petal for anemones.
// The second element of each pair is the absorbing petal, left neighbour
// first.
inline std::vector<std::pair<int, int>> LooseAbsorbers(const Workspace& ws,
                                                       const Flower& f) {
  const int m = f.size();
  std::vector<std::pair<int, int>> out;
  if (m < 2) return out;
  for (int i = 0; i < m; ++i) {
    std::vector<int> order = {(i + m - 1) % m, (i + 1) % m};
    if (f.klass == FlowerClass::kAnemone) {
      for (int j = 0; j < m; ++j) order.push_back(j);
    }
    for (int j : order) {
      if (j == i) continue;
      if (IsSubset(f.petals[i], ws.Fcl(f.petals[j]))) {
        out.emplace_back(i, j);
        break;
      }
    }
  }
  return out;
}

inline std::vector<int> LoosePetals(const Workspace& ws, const Flower& f) {
  std::vector<int> out;
  for (auto [i, j] : LooseAbsorbers(ws, f)) out.push_back(i);
  return out;
}

// Repeatedly merges the lowest loose petal into its absorbing petal.
inline Flower Tighten(const Workspace& ws, Flower f) {
  while (true) {
    const auto loose = LooseAbsorbers(ws, f);
    if (loose.empty()) return f;
    const auto [i, j] = loose.front();
    std::vector<SubsetMask> petals = f.petals;
    petals[j] |= petals[i];
    petals.erase(petals.begin() + i);
    f = VerifyFlower(ws, std::move(petals));
  }
}

inline std::vector<Separation> DisplayedKS(const Workspace& ws,
                                           const Flower& f) {
  std::vector<Separation> out;
  for (SubsetMask x : f.displayed) {
    if (ws.IsKS(x)) out.push_back(ws.Sep(x));
  }
  std::sort(out.begin(), out.end(), [](const Separation& a, const Separation& b) {
    return LexLess(a.side, b.side);
  });
  return out;
}

inline std::set<ClassKey> DisplayedKSClasses(const Workspace& ws,
                                             const Flower& f) {
  std::set<ClassKey> out;
  for (SubsetMask x : f.displayed) {
    if (ws.IsKS(x)) out.insert(ws.Key(x));
  }
  return out;
}

// f1 is below f2: every displayed (k,S)-class of f1 is displayed by f2.
inline bool FlowerPrecedes(const Workspace& ws, const Flower& f1,
                           const Flower& f2) {
  const auto a = DisplayedKSClasses(ws, f1), b = DisplayedKSClasses(ws, f2);
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

// All flowers with exactly m petals, first petal holding element 0.
inline std::vector<std::vector<SubsetMask>> EnumerateFlowers(const Workspace& ws,
                                                             int m) {
  std::vector<std::vector<SubsetMask>> out;
  std::vector<SubsetMask> seq;
  long long nodes = 0;
  const long long cap = SearchNodeCap(1LL << 24);
  auto ok_petal = [&](SubsetMask p) { return ws.IsStrong(p) && ws.IsKSep(p); };
  auto walk = [&](auto&& self, SubsetMask rest) -> void {
    if (++nodes > cap) throw SearchSpaceTooLarge("flower enumeration exceeded cap");
    const int placed = static_cast<int>(seq.size());
    if (placed == m - 1) {
      if (rest == 0 || !ok_petal(rest)) return;
      if (m >= 2 && !ws.IsKSep(seq.back() | rest)) return;
      if (!ws.IsKSep(rest | seq.front())) return;
      seq.push_back(rest);
      out.push_back(seq);
      seq.pop_back();
      return;
    }
    const SubsetMask must = placed == 0 ? Singleton(0) : 0;
    const SubsetMask free = rest & ~must;
    SubsetMask z = free;
    while (true) {
      const SubsetMask p = z | must;
      if (p != 0 && p != rest && ok_petal(p) &&
          (placed == 0 || ws.IsKSep(seq.back() | p))) {
        seq.push_back(p);
        self(self, rest & ~p);
        seq.pop_back();
      }
      if (z == 0) break;
      z = (z - 1) & free;
    }
  };
  if (m == 1) {
    if (ok_petal(ws.full())) out.push_back({ws.full()});
    return out;
  }
  walk(walk, ws.full());
  return out;
}

struct SOrderResult {
  int value = 0;
  bool exact = true;
};

inline constexpr int kExactSOrderLimit = 12;

// Fewest petals of a flower displaying the same (k,S)-classes.
inline SOrderResult SOrder(const Workspace& ws, const Flower& f) {
  const auto classes = DisplayedKSClasses(ws, f);
  if (classes.empty()) return {1, true};
  if (classes.size() == 1) return {2, true};
  if (ws.n() > kExactSOrderLimit) return {f.size(), false};
  for (int m = 3; m < f.size(); ++m) {
    for (auto& petals : EnumerateFlowers(ws, m)) {
      Flower g = VerifyFlower(ws, petals);
      if (DisplayedKSClasses(ws, g) == classes) return {m, true};
    }
  }
  return {f.size(), true};
}

inline int CrossedPetals(const Flower& f, SubsetMask side) {
  int count = 0;
  for (SubsetMask p : f.petals) {
    if ((p & side) != 0 && (p & ~side) != 0) ++count;
  }
  return count;
}

// Equivalent to a displayed separation, or to one with a side inside a
// petal.
inline bool ConformsWithFlower(const Workspace& ws, const Separation& sep,
                               const Flower& f) {
  if (!ws.IsStrongKSeparation(sep.side)) {
    throw PreconditionFailed("conformity needs a strong k-separation");
  }
  for (SubsetMask y : ws.ClassOf(sep.side)) {
    if (f.Displays(y)) return true;
    const SubsetMask other = ws.Complement(y);
    for (SubsetMask p : f.petals) {
      if (IsSubset(y, p) || IsSubset(other, p)) return true;
    }
  }
  return false;
}

inline Separation PhiMinimumRepresentative(const Workspace& ws,
                                           const Separation& sep,
                                           const Flower& f) {
  if (!ws.IsStrongKSeparation(sep.side) || !ws.IsKS(sep.side)) {
    throw PreconditionFailed("Phi-minimum representative needs a (k,S)-separation");
  }
  SubsetMask best = sep.side;
  int best_count = CrossedPetals(f, best);
  for (SubsetMask y : ws.ClassOf(sep.side)) {  // lexicographic order
    const int c = CrossedPetals(f, y);
    if (c < best_count || (c == best_count && LexLess(y, best))) {
      best = y;
      best_count = c;
    }
  }
  return ws.Sep(best);
}

enum class Crossing { kUncrossed, kStrong, kWeak, kMixed };

inline std::string CrossingName(Crossing c) {
  switch (c) {
    case Crossing::kUncrossed: return "uncrossed";
    case Crossing::kStrong: return "strong";
    case Crossing::kWeak: return "weak";
    case Crossing::kMixed: return "mixed";
  }
  return "mixed";
}

inline Crossing CrossingOf(const Workspace& ws, SubsetMask part, SubsetMask r) {
  const SubsetMask a = part & r, b = part & ~r;
  if (a == 0 || b == 0) return Crossing::kUncrossed;
  const bool sa = ws.IsStrong(a), sb = ws.IsStrong(b);
  if (sa && sb) return Crossing::kStrong;
  if (!sa && !sb) return Crossing::kWeak;
  return Crossing::kMixed;
}

inline Crossing CrossingProfile(const Workspace& ws, const Separation& sep,
                                const Flower& f, std::uint32_t index_set) {
  const std::uint32_t all = (1u << f.size()) - 1;
  if (index_set == 0 || (index_set & ~all) != 0 || index_set == all) {
    throw PreconditionFailed("index set must be a proper non-empty subset");
  }
  const SubsetMask u = f.Union(index_set);
  if (!ws.IsKSep(u)) throw PreconditionFailed("petal union is not k-separating");
  return CrossingOf(ws, u, sep.side);
}

// A petal is (R,G)-strong when it is uncrossed or strongly crossed.
inline bool RGStrong(Crossing c) {
  return c == Crossing::kUncrossed || c == Crossing::kStrong;
}

// Splits the crossed petals of a loose-free flower so that it displays an
// equivalent of `sep`. Returns nullopt when every petal is weakly crossed.
inline std::optional<Flower> RefineWith(const Workspace& ws, const Flower& f,
                                        const Separation& sep) {
  if (!LoosePetals(ws, f).empty()) {
    throw PreconditionFailed("refinement needs a flower without loose petals");
  }
  if (DisplayedKSClasses(ws, f).empty()) {
    throw PreconditionFailed("refinement needs S-order at least two");
  }
  if (!ws.IsStrongKSeparation(sep.side) || !ws.IsKS(sep.side)) {
    throw PreconditionFailed("refinement needs a (k,S)-separation");
  }
  if (ConformsWithFlower(ws, sep, f)) {
    throw PreconditionFailed("separation already conforms with the flower");
  }
  const Separation rep = PhiMinimumRepresentative(ws, sep, f);
  const SubsetMask r = rep.side, g = ws.Complement(rep.side);
  const int m = f.size();
  std::vector<Crossing> petal(m);
  int weak = 0;
  for (int i = 0; i < m; ++i) {
    petal[i] = CrossingOf(ws, f.petals[i], r);
    if (petal[i] == Crossing::kMixed) {
      throw InvariantViolation("Phi-minimum separation mixes petal " +
                               std::to_string(i));
    }
    if (petal[i] == Crossing::kWeak) ++weak;
  }
  if (weak == m) return std::nullopt;
  if (weak > 0) {
    throw PreconditionFailed(
        "some but not all petals are weakly crossed; the flower is not S-tight");
  }

  auto verify = [&](std::vector<SubsetMask> petals) {
    try {
      return VerifyFlower(ws, std::move(petals));
    } catch (const FlowerViolation& err) {
      throw InvariantViolation(std::string("refinement is not a flower: ") +
                               err.what());
    }
  };

  Flower cur = f;
  if (m == 2) {
    cur = verify({f.petals[0] & g, f.petals[0] & r, f.petals[1] & r,
                  f.petals[1] & g});
  } else {
    while (true) {
      const int n = cur.size();
      int c = -1;
      for (int i = 0; i < n && c < 0; ++i) {
        if (CrossingOf(ws, cur.petals[i], r) != Crossing::kUncrossed) c = i;
      }
      if (c < 0) break;
      std::vector<SubsetMask> rot;
      for (int i = 0; i < n; ++i) rot.push_back(cur.petals[(c + i) % n]);
      SubsetMask rest = 0;
      for (int i = 2; i < n; ++i) rest |= rot[i];
      SubsetMask rr = r, gg = g;
      if (!(ws.IsStrong(rot[1] & r) && ws.IsStrong(rest & g))) {
        if (!(ws.IsStrong(rot[1] & g) && ws.IsStrong(rest & r))) {
          throw InvariantViolation("no orientation makes the split a flower");
        }
        std::swap(rr, gg);
      }
      std::vector<SubsetMask> next = {rot[0] & gg, rot[0] & rr};
      next.insert(next.end(), rot.begin() + 1, rot.end());
      cur = verify(std::move(next));
    }
  }
  if (!cur.Displays(r)) {
    throw InvariantViolation("refined flower does not display " + FormatMask(r));
  }
  return cur;
}

// Tighten, collapse to two petals when only one class is displayed, then
// refine with the lexicographically first non-conforming (k,S)-separation
// until everything conforms.
inline Flower MaximizeFlower(const Workspace& ws, Flower f) {
  const std::size_t budget = 2 * ws.KSClasses().size() + 4;
  for (std::size_t round = 0; round <= budget; ++round) {
    f = Tighten(ws, std::move(f));
    const auto shown = DisplayedKS(ws, f);
    if (shown.size() >= 1 && f.size() > 2 &&
        DisplayedKSClasses(ws, f).size() == 1) {
      f = VerifyFlower(ws, {shown[0].side, ws.Complement(shown[0].side)});
    }
    std::optional<Separation> bad;
    for (SubsetMask x : ws.KSSeparations()) {
      if (!ConformsWithFlower(ws, ws.Sep(x), f)) {
        bad = ws.Sep(x);
        break;
      }
    }
    if (!bad) return f;
    auto refined = RefineWith(ws, f, *bad);
    if (!refined) {
      throw NonRobustObstruction(
          *bad, "every petal is weakly crossed by " + FormatMask(bad->side));
    }
    f = std::move(*refined);
  }
  throw InvariantViolation("flower refinement did not terminate");
}

inline Flower MaximalFlower(const Workspace& ws, const Separation& seed) {
  if (!ws.IsStrongKSeparation(seed.side) || !ws.IsKS(seed.side)) {
    throw PreconditionFailed("seed " + FormatMask(seed.side) +
                             " is not a (k,S)-separation");
  }
  return MaximizeFlower(ws, VerifyFlower(ws, {seed.side, ws.Complement(seed.side)}));
}

}  // namespace tangleforge
