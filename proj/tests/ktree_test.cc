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


#include <set>

#include "corpus.hpp"
#include "gtest/gtest.h"
#include "tangleforge/flower.hpp"
#include "tangleforge/ktree.hpp"
#include "tangleforge/oracle.hpp"
#include "tangleforge/workspace.hpp"

namespace tangleforge {
namespace {

using testing::L;

Workspace R8() {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  return Workspace(sys, testing::UniqueTangle(sys, 4));
}

// lambda is 2 on {0,1,2} and its complement, 3 on every other proper set.
Workspace OneClass() {
  std::vector<int> lambda(64, 3);
  lambda[0] = lambda[63] = 0;
  lambda[0b000111] = lambda[0b111000] = 2;
  auto sys = ConnectivitySystem::FromTable(lambda);
  return Workspace(sys, testing::UniqueTangle(sys, 2));
}

std::set<std::pair<SubsetMask, SubsetMask>> OracleTreeKeys(const oracle::Oracle& o,
                                                           const Workspace& ws,
                                                           const PiTree& t) {
  std::set<std::pair<SubsetMask, SubsetMask>> out;
  for (SubsetMask x : TreeDisplayed(ws, t)) {
    if (o.StrongSeparation(x) && o.KS(x)) out.insert(o.Key(x));
  }
  return out;
}

PiTree Path(int n, int k, std::vector<SubsetMask> bags) {
  PiTree t;
  t.n = n;
  t.k = k;
  for (std::size_t i = 0; i < bags.size(); ++i) {
    t.AddBag(bags[i]);
    if (i > 0) t.AddEdge(static_cast<int>(i) - 1, static_cast<int>(i));
  }
  return t;
}

TEST(DisplayedTest, EdgesAndFlowerVertices) {
  Workspace ws = R8();
  PiTree two = Path(8, 4, {L({1, 2, 3, 4}), L({5, 6, 7, 8})});
  EXPECT_EQ(DisplayedByEdge(two, 0, 1).side, L({1, 2, 3, 4}));
  EXPECT_THROW(DisplayedByEdge(two, 0, 0), InvalidInput);

  PiTree path = Path(8, 4, {L({1, 2}), L({3, 4}), L({5, 6, 7, 8})});
  EXPECT_EQ(DisplayedByEdge(path, 0, 1).side, L({1, 2}));
  EXPECT_EQ(DisplayedByEdge(path, 1, 2).side, L({1, 2, 3, 4}));

  Flower f = VerifyFlower(ws, {L({1, 2}), L({3, 4}), L({5, 6}), L({7, 8})});
  PiTree star = FlowerToTree(f, 8);
  ASSERT_EQ(star.size(), 5);
  EXPECT_EQ(star.vertices[0].kind, PiTree::Kind::kAnemone);
  std::vector<SubsetMask> sides;
  for (const auto& s : DisplayedByFlowerVertex(ws, star, 0)) sides.push_back(s.side);
  std::sort(sides.begin(), sides.end());
  EXPECT_EQ(sides, f.displayed);
  EXPECT_THROW(DisplayedByFlowerVertex(ws, star, 1), NotAFlowerVertex);
}

TEST(FlowerToTreeTest, Shapes) {
  Workspace ws = R8();
  EXPECT_EQ(FlowerToTree(VerifyFlower(ws, {ws.full()}), 8).size(), 1);
  PiTree two = FlowerToTree(VerifyFlower(ws, {L({1, 2, 3, 4}), L({5, 6, 7, 8})}), 8);
  EXPECT_EQ(two.size(), 2);
  EXPECT_EQ(two.Edges().size(), 1u);

  auto sys = ConnectivitySystem::FromGraph(testing::TriangleRingEdges());
  Workspace ring(sys, testing::UniqueTangle(sys, 2));
  std::vector<SubsetMask> petals;
  for (int i = 0; i < 4; ++i) petals.push_back(SubsetMask{7} << (3 * i));
  PiTree daisy = FlowerToTree(VerifyFlower(ring, petals), 12);
  EXPECT_EQ(daisy.vertices[0].kind, PiTree::Kind::kDaisy);
  EXPECT_EQ(daisy.vertices[0].nbrs, (std::vector<int>{1, 2, 3, 4}));
}

TEST(VerifyTreeTest, R8StarFailsOnlyConformity) {
  Workspace ws = R8();
  PiTree t = FlowerToTree(
      VerifyFlower(ws, {L({1, 2}), L({3, 4}), L({5, 6}), L({7, 8})}), 8);
  const auto v = VerifyPartialKSTree(ws, t);
  EXPECT_TRUE(v.axiom[0].pass);
  EXPECT_TRUE(v.axiom[2].pass);
  EXPECT_TRUE(v.axiom[3].pass);
  ASSERT_FALSE(v.axiom[4].pass);
  ASSERT_TRUE(v.axiom[4].witness.has_value());
  EXPECT_EQ(v.axiom[4].witness->side, L({1, 3, 5, 7}));
  EXPECT_FALSE(ConformsWithTree(ws, ws.Sep(L({1, 3, 5, 7})), t));
  EXPECT_TRUE(ConformsWithTree(ws, ws.Sep(L({1, 2, 5, 6})), t));
}

TEST(VerifyTreeTest, SequentialEdgeBetweenBags) {
  Workspace ws = R8();
  const auto v = VerifyPartialKSTree(ws, Path(8, 4, {L({1, 2}), L({3, 4, 5, 6, 7, 8})}));
  ASSERT_FALSE(v.axiom[0].pass);
  EXPECT_EQ(v.axiom[0].witness->side, L({1, 2}));
}

TEST(VerifyTreeTest, WeakEdgeAndWrongLabel) {
  Workspace ws = R8();
  EXPECT_FALSE(VerifyPartialKSTree(ws, Path(8, 4, {L({1}), L({2, 3, 4, 5, 6, 7, 8})}))
                   .axiom[0]
                   .pass);
  PiTree t = FlowerToTree(
      VerifyFlower(ws, {L({1, 2}), L({3, 4}), L({5, 6}), L({7, 8})}), 8);
  t.vertices[0].kind = PiTree::Kind::kDaisy;
  const auto v = VerifyPartialKSTree(ws, t);
  EXPECT_FALSE(v.axiom[3].pass);
  EXPECT_TRUE(v.axiom[2].pass);
}

TEST(VerifyTreeTest, StructureErrors) {
  Workspace ws = R8();
  PiTree t = Path(8, 4, {L({1, 2, 3, 4}), L({4, 5, 6, 7, 8})});
  EXPECT_THROW(VerifyPartialKSTree(ws, t), InvalidInput);
  PiTree cyc = Path(8, 4, {L({1, 2}), L({3, 4}), L({5, 6, 7, 8})});
  cyc.AddEdge(0, 2);
  EXPECT_THROW(VerifyPartialKSTree(ws, cyc), InvalidInput);
  PiTree short_tree = Path(7, 4, {FullMask(7)});
  EXPECT_THROW(VerifyPartialKSTree(ws, short_tree), InvalidInput);
}

TEST(LaminarityTest, Examples) {
  EXPECT_TRUE(LaminarityCheck(Path(4, 2, {0b0011, 0b1100})));
  EXPECT_TRUE(LaminarityCheck({0b0011, 0b0001, 0b0111}, 4));
  EXPECT_FALSE(LaminarityCheck({0b0011, 0b0101}, 4));
}

TEST(SurgeryTest, Preconditions) {
  auto inst = testing::RobustCorpus()[8];  // k4_two_loops: loops are 6 and 7
  Workspace ws(inst.sys, inst.tangle);
  PiTree t = BuildMaximalTree(ws);
  int leaf = -1;
  for (int v = 0; v < t.size(); ++v) {
    if (t.IsBag(v) && t.IsLeaf(v) && ws.IsKS(t.vertices[v].bag)) leaf = v;
  }
  ASSERT_GE(leaf, 0);
  const SubsetMask b = t.vertices[leaf].bag;
  EXPECT_THROW(GrowTerminalBag(ws, t, leaf, 0), PreconditionFailed);
  EXPECT_THROW(SplitTerminalBag(ws, t, leaf, b), PreconditionFailed);
  EXPECT_THROW(SplitTerminalBag(ws, t, leaf, 0), PreconditionFailed);
  // A strong set is never a valid flap.
  EXPECT_THROW(GrowTerminalBag(ws, t, leaf, ws.Complement(b)), PreconditionFailed);
  SubsetMask other = 0;
  for (SubsetMask x : ws.KSSeparations()) {
    if (ws.Fcl(x) != ws.Fcl(b) && ws.Fcl(ws.Complement(x)) != ws.Fcl(b)) other = x;
  }
  ASSERT_NE(other, 0u);
  EXPECT_THROW(RetargetTerminalBag(ws, t, leaf, other), PreconditionFailed);
  // Retargeting to B itself only relabels.
  EXPECT_EQ(TreeDisplayedClasses(ws, RetargetTerminalBag(ws, t, leaf, b)),
            TreeDisplayedClasses(ws, t));
  int inner = -1;
  for (int v = 0; v < t.size(); ++v) {
    if (!t.IsLeaf(v)) inner = v;
  }
  ASSERT_GE(inner, 0);
  EXPECT_THROW(GrowTerminalBag(ws, t, inner, 0b01000000), PreconditionFailed);
}

TEST(SurgeryTest, IteratedGrowReachesClosureAndSplitsPeelBack) {
  int checked = 0;
  for (const auto& inst : testing::RobustCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    if (ws.KSSeparations().empty()) continue;
    PiTree t = BuildMaximalTree(ws);
    for (int v = 0; v < t.size(); ++v) {
      if (!t.IsBag(v) || !t.IsLeaf(v) || !ws.IsKS(t.vertices[v].bag)) continue;
      const SubsetMask b = t.vertices[v].bag;
      PiTree g = t;
      for (SubsetMask x : GreedyPartialSequence(ws.sys(), ws.tangle(), b)) {
        g = GrowTerminalBag(ws, g, v, x);
      }
      EXPECT_EQ(g.vertices[v].bag, ws.Fcl(b));
      const auto seq =
          GreedyPartialSequence(ws.sys(), ws.tangle(), ws.Complement(b));
      PiTree s = t;
      int leaf = v;
      SubsetMask peeled = 0;
      for (SubsetMask x : seq) {
        if (!IsSubset(x, b)) break;
        s = SplitTerminalBag(ws, s, leaf, x);
        leaf = s.size() - 1;
        peeled |= x;
      }
      EXPECT_EQ(s.vertices[leaf].bag, b & ~peeled);
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}

// Every grow, split and retarget on oracle-generated inputs yields a tree the
// oracle certifies and that displays the same classes.
TEST(SurgeryTest, PreservesDisplayedClasses) {
  auto corpus = testing::RobustCorpus();
  for (auto& inst : testing::SurgeryExtras()) corpus.push_back(inst);
  int grown = 0, split = 0, retargeted = 0;
  for (const auto& inst : corpus) {
    Workspace ws(inst.sys, inst.tangle);
    if (ws.KSSeparations().empty()) continue;
    oracle::Oracle o(inst.sys, inst.tangle);
    std::vector<PiTree> trees = {BuildMaximalTree(ws)};
    for (const auto& of : o.Flowers(3)) {
      PiTree t = FlowerToTree(VerifyFlower(ws, of.petals), ws.n());
      if (o.CertifyTree(t, false).ok) trees.push_back(t);
    }
    for (const PiTree& t : trees) {
      const auto before = OracleTreeKeys(o, ws, t);
      auto check = [&](const PiTree& out) {
        SCOPED_TRACE(inst.name);
        const auto cert = o.CertifyTree(out, false);
        EXPECT_TRUE(cert.ok) << cert.failure;
        EXPECT_EQ(OracleTreeKeys(o, ws, out), before);
      };
      for (int v = 0; v < t.size(); ++v) {
        if (!t.IsBag(v) || !t.IsLeaf(v)) continue;
        const SubsetMask b = t.vertices[v].bag;
        if (!ws.IsStrongKSeparation(b) || !ws.IsKS(b)) continue;
        for (SubsetMask m : inst.tangle.maximal_members()) {
          for (SubsetMask x = m; x != 0; x = (x - 1) & m) {
            if ((x & b) == 0 && ws.IsKSep(b | x)) {
              check(GrowTerminalBag(ws, t, v, x));
              ++grown;
            }
            if (IsSubset(x, b) && ws.IsKSep(b & ~x) && ws.IsStrong(b & ~x)) {
              check(SplitTerminalBag(ws, t, v, x));
              ++split;
            }
          }
        }
        for (SubsetMask y : ws.ClassOf(b)) {
          for (SubsetMask c : {y, ws.Complement(y)}) {
            if (c == b || ws.Fcl(c) != ws.Fcl(b)) continue;
            check(RetargetTerminalBag(ws, t, v, c));
            ++retargeted;
          }
        }
      }
    }
  }
  EXPECT_GE(grown, 20);
  EXPECT_GE(split, 20);
  EXPECT_GE(retargeted, 20);
}

TEST(BuildTreeTest, NoSeparationsGivesOneBag) {
  auto sys = testing::Uniform(9, 12);
  Workspace ws(sys, CanonicalVerticalTangle(*sys.rank(), 3));
  ASSERT_TRUE(ws.KSSeparations().empty());
  PiTree t = BuildMaximalTree(ws);
  EXPECT_EQ(t.size(), 1);
  EXPECT_TRUE(VerifyPartialKSTree(ws, t).ok());
}

TEST(BuildTreeTest, OneClassGivesTwoBags) {
  Workspace ws = OneClass();
  ASSERT_EQ(ws.KSClasses().size(), 1u);
  PiTree t = BuildMaximalTree(ws);
  ASSERT_EQ(t.size(), 2);
  EXPECT_EQ(DisplayedByEdge(t, 0, 1).side, SubsetMask{0b000111});
}

TEST(BuildTreeTest, R8IsNotRobust) {
  Workspace ws = R8();
  EXPECT_THROW(BuildMaximalTree(ws), PreconditionFailed);
  PiTree t = Path(8, 4, {L({1, 2, 3, 4}), L({5, 6, 7, 8})});
  EXPECT_THROW(ExtendTree(ws, t), PreconditionFailed);
}

TEST(BuildTreeTest, RobustCorpusTreesAreMaximal) {
  for (const auto& inst : testing::RobustCorpus()) {
    SCOPED_TRACE(inst.name);
    Workspace ws(inst.sys, inst.tangle);
    PiTree t = BuildMaximalTree(ws);
    EXPECT_TRUE(VerifyPartialKSTree(ws, t).ok());
    EXPECT_TRUE(LaminarityCheck(t));
    const auto shown = TreeDisplayedClasses(ws, t);
    for (SubsetMask x : ws.KSSeparations()) EXPECT_TRUE(shown.count(ws.Key(x)));
    oracle::Oracle o(inst.sys, inst.tangle);
    const auto cert = o.CertifyTree(t);
    EXPECT_TRUE(cert.ok) << cert.failure;
    if (!ws.KSSeparations().empty()) {
      EXPECT_FALSE(ExtendTree(ws, t).has_value());
    }
  }
}

// Each extension step displays strictly more classes, starting from the
// tree of one maximal flower.
TEST(BuildTreeTest, ExtensionStepsGrow) {
  for (const auto& inst : testing::RobustCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    if (ws.KSSeparations().empty()) continue;
    PiTree t = FlowerToTree(MaximalFlower(ws, ws.Sep(ws.KSSeparations().back())), ws.n());
    std::size_t classes = TreeDisplayedClasses(ws, t).size();
    while (auto next = ExtendTree(ws, t)) {
      EXPECT_TRUE(VerifyPartialKSTree(ws, *next).ok()) << inst.name;
      const std::size_t now = TreeDisplayedClasses(ws, *next).size();
      EXPECT_GT(now, classes);
      classes = now;
      t = *next;
    }
    EXPECT_EQ(classes, ws.KSClasses().size()) << inst.name;
  }
}

TEST(BuildTreeTest, TrivialTreeCannotBeExtended) {
  auto inst = testing::RobustCorpus()[0];
  Workspace ws(inst.sys, inst.tangle);
  EXPECT_THROW(ExtendTree(ws, SingleBagTree(ws)), PreconditionFailed);
}

}  // namespace
}  // namespace tangleforge
