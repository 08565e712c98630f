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
#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tangleforge/closure.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/flower.hpp"
#include "tangleforge/pitree.hpp"
#include "tangleforge/subset.hpp"
#include "tangleforge/workspace.hpp"

namespace tangleforge {

class NotAFlowerVertex : public Error {
 public:
  using Error::Error;
};

inline Separation DisplayedByEdge(const PiTree& t, int u, int v) {
  const auto& nu = t.vertices.at(u).nbrs;
  if (std::find(nu.begin(), nu.end(), v) == nu.end()) {
    throw InvalidInput("no edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  return Separation::Of(t.BagsBeyond(u, v), t.n, t.k);
}

// Partition displayed by a non-bag vertex, in the order of its edges.
inline std::vector<SubsetMask> VertexPartition(const PiTree& t, int v) {
  if (t.IsBag(v)) {
    throw NotAFlowerVertex("vertex " + std::to_string(v) + " is a bag vertex");
  }
  std::vector<SubsetMask> parts;
  for (int w : t.vertices[v].nbrs) parts.push_back(t.BagsBeyond(w, v));
  return parts;
}

inline FlowerClass LabelClass(PiTree::Kind kind) {
  return kind == PiTree::Kind::kDaisy ? FlowerClass::kDaisy
                                      : FlowerClass::kAnemone;
}

// Unions read off the vertex label: all of them for A, cyclic intervals for
// D. Only the k-separating ones are returned.
inline std::vector<Separation> DisplayedByFlowerVertex(const Workspace& ws,
                                                       const PiTree& t, int v) {
  const auto parts = VertexPartition(t, v);
  std::vector<Separation> out;
  for (SubsetMask x : DisplayedUnions(ws, parts, LabelClass(t.vertices[v].kind))) {
    out.push_back(ws.Sep(x));
  }
  return out;
}

// The flower at v, or nullopt when the displayed partition is not one.
inline std::optional<Flower> FlowerAt(const Workspace& ws, const PiTree& t,
                                      int v) {
  try {
    return VerifyFlower(ws, VertexPartition(t, v));
  } catch (const NotAPartition&) {
  } catch (const FlowerViolation&) {
  } catch (const DichotomyViolation&) {
  }
  return std::nullopt;
}

// Canonical sides displayed by edges and by flower vertices, sorted.
inline std::vector<SubsetMask> TreeDisplayed(const Workspace& ws,
                                             const PiTree& t) {
  std::vector<SubsetMask> out;
  for (auto [u, v] : t.Edges()) {
    const SubsetMask x = t.BagsBeyond(u, v);
    if (ws.IsKSep(x)) out.push_back(CanonicalSide(x, t.n));
  }
  for (int v = 0; v < t.size(); ++v) {
    if (t.IsBag(v)) continue;
    if (auto f = FlowerAt(ws, t, v)) {
      out.insert(out.end(), f->displayed.begin(), f->displayed.end());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::set<ClassKey> TreeDisplayedClasses(const Workspace& ws,
                                               const PiTree& t) {
  std::set<ClassKey> out;
  for (SubsetMask x : TreeDisplayed(ws, t)) {
    if (ws.IsKS(x)) out.insert(ws.Key(x));
  }
  return out;
}

inline bool ConformsWithTree(const Workspace& ws, const Separation& sep,
                             const PiTree& t,
                             const std::vector<SubsetMask>& displayed) {
  if (!ws.IsStrongKSeparation(sep.side)) {
    throw PreconditionFailed("conformity needs a strong k-separation");
  }
  for (SubsetMask y : ws.ClassOf(sep.side)) {
    if (std::binary_search(displayed.begin(), displayed.end(), y)) return true;
    const SubsetMask other = ws.Complement(y);
    for (const auto& vx : t.vertices) {
      if (vx.kind != PiTree::Kind::kBag) continue;
      if (IsSubset(y, vx.bag) || IsSubset(other, vx.bag)) return true;
    }
  }
  return false;
}

inline bool ConformsWithTree(const Workspace& ws, const Separation& sep,
                             const PiTree& t) {
  return ConformsWithTree(ws, sep, t, TreeDisplayed(ws, t));
}

struct AxiomStatus {
  bool pass = true;
  std::string detail;
  int vertex = -1;               // offending vertex, or first edge endpoint
  std::optional<Separation> witness;
};

struct TreeVerdict {
  std::array<AxiomStatus, 5> axiom;  // P1..P5
  std::vector<SubsetMask> displayed;

  bool ok() const {
    for (const auto& a : axiom) {
      if (!a.pass) return false;
    }
    return true;
  }
};

inline TreeVerdict VerifyPartialKSTree(const Workspace& ws, const PiTree& t) {
  t.CheckStructure();
  if (t.n != ws.n() || t.k != ws.k()) {
    throw InvalidInput("tree ground set or order does not match the system");
  }
  TreeVerdict out;
  auto fail = [&](int index, std::string detail, int vertex,
                  std::optional<Separation> witness) {
    auto& a = out.axiom[index];
    if (!a.pass) return;
    a.pass = false;
    a.detail = std::move(detail);
    a.vertex = vertex;
    a.witness = witness;
  };

  for (auto [u, v] : t.Edges()) {
    const SubsetMask x = t.BagsBeyond(u, v);
    const Separation sep = ws.Sep(x);
    if (!ws.IsStrongKSeparation(x)) {
      fail(0, "edge " + std::to_string(u) + "-" + std::to_string(v) +
                  " does not display a strong k-separation",
           u, sep);
    } else if (t.IsBag(u) && t.IsBag(v) && !ws.IsKS(x)) {
      fail(0, "edge " + std::to_string(u) + "-" + std::to_string(v) +
                  " between bags does not display a (k,S)-separation",
           u, sep);
    }
  }

  // The vertex kinds are A or D by construction and a D vertex orders
  // exactly its own edges, so P2 cannot fail once the structure checks out.

  for (int v = 0; v < t.size(); ++v) {
    if (t.IsBag(v)) continue;
    const bool daisy = t.vertices[v].kind == PiTree::Kind::kDaisy;
    const int index = daisy ? 3 : 2;
    auto f = FlowerAt(ws, t, v);
    if (!f) {
      fail(index, "vertex " + std::to_string(v) + " does not display a flower",
           v, std::nullopt);
      continue;
    }
    // Three petals form both an anemone and a daisy.
    const bool kind_ok = f->size() <= 3 ||
                         f->klass == (daisy ? FlowerClass::kDaisy
                                            : FlowerClass::kAnemone);
    if (!kind_ok) {
      fail(index, "vertex " + std::to_string(v) + " displays a " +
                      FlowerClassName(f->klass),
           v, std::nullopt);
    } else if (DisplayedKSClasses(ws, *f).size() < 2) {
      fail(index, "vertex " + std::to_string(v) + " has S-order below three", v,
           std::nullopt);
    } else if (const auto loose = LoosePetals(ws, *f); !loose.empty()) {
      fail(index, "vertex " + std::to_string(v) + " has a loose petal", v,
           ws.Sep(f->petals[loose[0]]));
    }
  }

  out.displayed = TreeDisplayed(ws, t);
  for (SubsetMask x : ws.KSSeparations()) {
    if (!ConformsWithTree(ws, ws.Sep(x), t, out.displayed)) {
      fail(4, FormatMask(x) + " does not conform", -1, ws.Sep(x));
      break;
    }
  }
  return out;
}

inline bool Crosses(SubsetMask a, SubsetMask b, SubsetMask full) {
  const SubsetMask ac = full & ~a, bc = full & ~b;
  return (a & b) && (a & bc) && (ac & b) && (ac & bc);
}

inline bool LaminarityCheck(const std::vector<SubsetMask>& sides, int n) {
  const SubsetMask full = FullMask(n);
  for (std::size_t i = 0; i < sides.size(); ++i) {
    for (std::size_t j = i + 1; j < sides.size(); ++j) {
      if (Crosses(sides[i], sides[j], full)) return false;
    }
  }
  return true;
}

inline bool LaminarityCheck(const PiTree& t) {
  std::vector<SubsetMask> sides;
  for (auto [u, v] : t.Edges()) sides.push_back(t.BagsBeyond(u, v));
  return LaminarityCheck(sides, t.n);
}

inline PiTree FlowerToTree(const Flower& f, int n) {
  PiTree t;
  t.k = f.k;
  t.n = n;
  if (f.size() == 1) {
    t.AddBag(f.petals[0]);
  } else if (f.size() == 2) {
    t.AddEdge(t.AddBag(f.petals[0]), t.AddBag(f.petals[1]));
  } else {
    const int c = t.AddFlowerVertex(f.klass == FlowerClass::kDaisy
                                        ? PiTree::Kind::kDaisy
                                        : PiTree::Kind::kAnemone);
    for (SubsetMask p : f.petals) t.AddEdge(c, t.AddBag(p));
  }
  return t;
}

inline PiTree SingleBagTree(const Workspace& ws) {
  PiTree t;
  t.k = ws.k();
  t.n = ws.n();
  t.AddBag(ws.full());
  return t;
}

namespace detail {

inline void RequireSTerminal(const Workspace& ws, const PiTree& t, int leaf) {
  if (leaf < 0 || leaf >= t.size() || !t.IsBag(leaf) || !t.IsLeaf(leaf)) {
    throw PreconditionFailed("vertex " + std::to_string(leaf) +
                             " is not a terminal bag");
  }
  const SubsetMask b = t.vertices[leaf].bag;
  if (!ws.IsStrongKSeparation(b) || !ws.IsKS(b)) {
    throw PreconditionFailed("terminal bag " + FormatMask(b) +
                             " is not an S-terminal-bag");
  }
}

// Surgery outputs must again be partial (k,S)-trees equivalent to the input.
inline void CheckSurgery(const Workspace& ws, const PiTree& before,
                         const PiTree& after, const char* op) {
  if (!VerifyPartialKSTree(ws, after).ok()) {
    if (!VerifyPartialKSTree(ws, before).ok()) {
      throw PreconditionFailed(std::string(op) +
                               ": input is not a partial (k,S)-tree");
    }
    throw InvariantViolation(std::string(op) +
                             ": output is not a partial (k,S)-tree");
  }
  if (TreeDisplayedClasses(ws, before) != TreeDisplayedClasses(ws, after)) {
    throw InvariantViolation(std::string(op) + " changed the displayed classes");
  }
}

}  // namespace detail

// Moves a weak set X from the rest of the tree into the terminal bag.
inline PiTree GrowTerminalBag(const Workspace& ws, const PiTree& t, int leaf,
                              SubsetMask x) {
  detail::RequireSTerminal(ws, t, leaf);
  const SubsetMask b = t.vertices[leaf].bag;
  if (x == 0 || (x & b) != 0 || (x & ~ws.full()) != 0) {
    throw PreconditionFailed("X must be a non-empty subset of E-B");
  }
  if (!ws.IsWeak(x)) throw PreconditionFailed("X is not weak");
  if (!ws.IsKSep(b | x)) throw PreconditionFailed("B u X is not k-separating");
  PiTree out = t;
  for (int v = 0; v < out.size(); ++v) {
    if (out.IsBag(v)) out.vertices[v].bag &= ~x;
  }
  out.vertices[leaf].bag = b | x;
  detail::CheckSurgery(ws, t, out, "grow_terminal_bag");
  return out;
}

// Hangs B-X on a new leaf below the old terminal vertex, which keeps X. The
// new leaf is the last vertex of the result.
inline PiTree SplitTerminalBag(const Workspace& ws, const PiTree& t, int leaf,
                               SubsetMask x) {
  detail::RequireSTerminal(ws, t, leaf);
  const SubsetMask b = t.vertices[leaf].bag;
  if (x == 0 || !IsSubset(x, b)) {
    throw PreconditionFailed("X must be a non-empty subset of B");
  }
  if (!ws.IsWeak(x)) throw PreconditionFailed("X is not weak");
  if (!ws.IsKSep(b & ~x) || ws.IsWeak(b & ~x)) {
    throw PreconditionFailed("B-X is not a strong k-separating set");
  }
  PiTree out = t;
  out.vertices[leaf].bag = x;
  out.AddEdge(leaf, out.AddBag(b & ~x));
  detail::CheckSurgery(ws, t, out, "split_terminal_bag");
  return out;
}

struct Retargeted {
  PiTree tree;
  int leaf;
};

// Grows the terminal bag to fcl(B) and then peels a maximal partial
// k-sequence for C off in reverse, leaving C as the terminal bag.
inline Retargeted RetargetTerminalBagAt(const Workspace& ws, const PiTree& t,
                                        int leaf, SubsetMask c) {
  detail::RequireSTerminal(ws, t, leaf);
  const SubsetMask b = t.vertices[leaf].bag;
  if (!ws.IsStrongKSeparation(c) || !ws.IsKS(c)) {
    throw PreconditionFailed(FormatMask(c) + " is not a (k,S)-separation");
  }
  if (ws.Fcl(b) != ws.Fcl(c)) throw PreconditionFailed("closures differ");
  Retargeted out{t, leaf};
  for (SubsetMask x : GreedyPartialSequence(ws.sys(), ws.tangle(), b)) {
    out.tree = GrowTerminalBag(ws, out.tree, out.leaf, x);
  }
  auto seq = GreedyPartialSequence(ws.sys(), ws.tangle(), c);
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    out.tree = SplitTerminalBag(ws, out.tree, out.leaf, *it);
    out.leaf = out.tree.size() - 1;
  }
  if (out.tree.vertices[out.leaf].bag != c) {
    throw InvariantViolation("retargeting did not reach " + FormatMask(c));
  }
  return out;
}

inline PiTree RetargetTerminalBag(const Workspace& ws, const PiTree& t,
                                  int leaf, SubsetMask c) {
  return RetargetTerminalBagAt(ws, t, leaf, c).tree;
}

namespace detail {

inline int VertexWithBag(const PiTree& t, SubsetMask bag) {
  for (int v = 0; v < t.size(); ++v) {
    if (t.IsBag(v) && t.vertices[v].bag == bag) return v;
  }
  return -1;
}

// A member of the class of `x` with one side inside bag vertex u's bag,
// found in lexicographic order, smaller side first.
inline std::optional<SubsetMask> SideInBag(const Workspace& ws, const PiTree& t,
                                           SubsetMask x, int u) {
  const SubsetMask bag = t.vertices[u].bag;
  for (SubsetMask y : ws.ClassOf(x)) {
    if (IsSubset(y, bag)) return y;
    if (IsSubset(ws.Complement(y), bag)) return ws.Complement(y);
  }
  return std::nullopt;
}

// The k-separating Z with r <= Z <= bag (proper when `proper`) that is
// inclusion-maximal, lexicographically first among those.
inline SubsetMask MaximalSeparatingBetween(const Workspace& ws, SubsetMask r,
                                           SubsetMask bag, bool proper) {
  std::vector<SubsetMask> found;
  const SubsetMask free = bag & ~r;
  for (SubsetMask s = free;; s = (s - 1) & free) {
    const SubsetMask z = r | s;
    if (!(proper && z == bag) && ws.IsKSep(z)) found.push_back(z);
    if (s == 0) break;
  }
  std::optional<SubsetMask> best;
  for (SubsetMask z : found) {
    const bool maximal = std::none_of(found.begin(), found.end(), [&](SubsetMask w) {
      return w != z && IsSubset(z, w);
    });
    if (maximal && (!best || LexLess(z, *best))) best = z;
  }
  if (!best) throw InvariantViolation("no k-separating set between R and B");
  return *best;
}

inline PiTree AttachLeaf(const PiTree& t, int u, SubsetMask z) {
  PiTree out = t;
  out.vertices[u].bag &= ~z;
  out.AddEdge(u, out.AddBag(z));
  return out;
}

}  // namespace detail

// One step of the construction: a partial (k,S)-tree displaying a class
// that t does not, or nullopt when every (k,S)-separation is already
// equivalent to a displayed one.
inline std::optional<PiTree> ExtendTree(const Workspace& ws, const PiTree& t) {
  if (!IsRobust(ws.tangle())) throw PreconditionFailed("tangle is not robust");
  const auto shown = TreeDisplayedClasses(ws, t);
  if (shown.empty()) {
    throw PreconditionFailed("extension needs a non-trivial tree");
  }

  std::optional<SubsetMask> target;
  for (SubsetMask x : ws.KSSeparations()) {
    if (!shown.count(ws.Key(x))) {
      target = x;
      break;
    }
  }
  if (!target) return std::nullopt;
  const ClassKey target_key = ws.Key(*target);

  int u = -1;
  SubsetMask r = 0;
  for (int v = 0; v < t.size() && u < 0; ++v) {
    if (!t.IsBag(v)) continue;
    if (auto side = detail::SideInBag(ws, t, *target, v)) {
      u = v;
      r = *side;
    }
  }
  if (u < 0) {
    throw PreconditionFailed(FormatMask(*target) + " does not conform with the tree");
  }

  PiTree cur = t;
  auto gained = [&](const PiTree& tree) {
    return TreeDisplayedClasses(ws, tree).size() > shown.size();
  };

  if (!cur.IsLeaf(u)) {
    // Move the maximal k-separating Z around R onto a new leaf.
    const SubsetMask z =
        detail::MaximalSeparatingBetween(ws, r, cur.vertices[u].bag, false);
    cur = detail::AttachLeaf(cur, u, z);
    if (gained(cur)) return cur;
    u = cur.size() - 1;
  }

  // Make E-B fully closed by peeling a partial k-sequence for E-B off B.
  SubsetMask b = cur.vertices[u].bag;
  for (SubsetMask x :
       GreedyPartialSequence(ws.sys(), ws.tangle(), ws.Complement(b))) {
    cur = SplitTerminalBag(ws, cur, u, x);
    u = cur.size() - 1;
  }
  b = cur.vertices[u].bag;
  auto side = detail::SideInBag(ws, cur, *target, u);
  if (!side || *side == b) {
    throw InvariantViolation("lost the target separation inside its bag");
  }
  r = *side;

  const SubsetMask z = detail::MaximalSeparatingBetween(ws, r, b, true);
  const SubsetMask rest = b & ~z;
  PiTree next;
  if (!ws.IsKSep(rest)) {
    next = detail::AttachLeaf(cur, u, z);
  } else {
    const Flower grown = MaximizeFlower(ws, VerifyFlower(ws, {z, rest, ws.Complement(b)}));
    // A displayed side with the closure of B, laid out as P1..Pj.
    std::optional<std::vector<SubsetMask>> layout;
    const int m = grown.size();
    for (int start = 0; start < m && !layout; ++start) {
      for (int len = 1; len < m && !layout; ++len) {
        SubsetMask c = 0;
        std::vector<SubsetMask> head;
        for (int i = 0; i < len; ++i) {
          head.push_back(grown.petals[(start + i) % m]);
          c |= head.back();
        }
        if (len < 2 || ws.Fcl(c) != ws.Fcl(b) || !ws.IsKS(c)) continue;
        layout = head;
      }
    }
    if (grown.klass == FlowerClass::kAnemone && !layout) {
      // Anemone petals may be taken in any order.
      for (std::uint32_t set = 1; set + 1 < (1u << m) && !layout; ++set) {
        const SubsetMask c = grown.Union(set);
        if (Size(set) < 2 || ws.Fcl(c) != ws.Fcl(b) || !ws.IsKS(c)) continue;
        std::vector<SubsetMask> head;
        for (int i = 0; i < m; ++i) {
          if ((set >> i) & 1) head.push_back(grown.petals[i]);
        }
        layout = head;
      }
    }
    if (!layout) {
      throw InvariantViolation("maximal flower displays no side equivalent to the bag");
    }
    SubsetMask c = 0;
    for (SubsetMask p : *layout) c |= p;
    auto moved = RetargetTerminalBagAt(ws, cur, u, c);
    next = moved.tree;
    std::vector<SubsetMask> petals = *layout;
    petals.push_back(ws.Complement(c));
    const Flower outer = VerifyFlower(ws, petals);
    const int v = next.AddFlowerVertex(outer.klass == FlowerClass::kDaisy
                                           ? PiTree::Kind::kDaisy
                                           : PiTree::Kind::kAnemone);
    for (SubsetMask p : *layout) next.AddEdge(v, next.AddBag(p));
    next.AddEdge(v, moved.leaf);
    next.vertices[moved.leaf].bag = 0;
  }
  if (!gained(next)) {
    throw InvariantViolation("extension did not display a new class");
  }
  (void)target_key;
  return next;
}

// Seeds with the tree of a maximal flower and extends until every class is
// displayed.
inline PiTree BuildMaximalTree(const Workspace& ws) {
  if (!IsRobust(ws.tangle())) throw PreconditionFailed("tangle is not robust");
  const auto& ks = ws.KSSeparations();
  if (ks.empty()) return SingleBagTree(ws);
  PiTree t = FlowerToTree(MaximalFlower(ws, ws.Sep(ks.front())), ws.n());
  std::size_t classes = TreeDisplayedClasses(ws, t).size();
  while (auto next = ExtendTree(ws, t)) {
    const std::size_t now = TreeDisplayedClasses(ws, *next).size();
    if (now <= classes) throw InvariantViolation("extension did not add a class");
    classes = now;
    t = std::move(*next);
  }
  const auto verdict = VerifyPartialKSTree(ws, t);
  if (!verdict.ok()) throw InvariantViolation("constructed tree does not verify");
  if (classes != ws.KSClasses().size()) {
    throw InvariantViolation("constructed tree misses a class");
  }
  return t;
}

}  // namespace tangleforge
