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

#include <random>

#include "corpus.hpp"
#include "gtest/gtest.h"
#include "tangleforge/closure.hpp"
#include "tangleforge/oracle.hpp"
#include "tangleforge/workspace.hpp"

namespace tangleforge {
namespace {

using testing::ClosureCorpus;
using testing::Instance;
using testing::L;

Tangle R8Tangle() {
  std::vector<SubsetMask> m = {0};
  for (int e = 0; e < 8; ++e) m.push_back(Singleton(e));
  return Tangle(4, 8, m);
}

// Every set that is T-strong and k-separating.
std::vector<SubsetMask> StrongKSeparating(const Instance& inst) {
  std::vector<SubsetMask> out;
  for (SubsetMask x = 0; x <= inst.sys.full(); ++x) {
    if (inst.sys(x) <= inst.tangle.k() && inst.tangle.IsStrong(x)) out.push_back(x);
  }
  return out;
}

TEST(FullyClosedTest, Examples) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  EXPECT_TRUE(IsFullyClosed(sys, t, L({1, 2})));
  EXPECT_TRUE(IsFullyClosed(sys, t, L({2, 4, 6, 8})));
  EXPECT_TRUE(IsFullyClosed(sys, t, sys.full()));
  EXPECT_FALSE(IsFullyClosed(sys, t, L({3, 4, 5, 6, 7, 8})));
  EXPECT_THROW(IsFullyClosed(sys, t, L({1})), PreconditionFailed);
  EXPECT_THROW(IsFullyClosed(sys, t, L({1, 2, 3})), PreconditionFailed);
}

TEST(FullClosureTest, Examples) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  EXPECT_EQ(FullClosure(sys, t, L({1, 2})), L({1, 2}));
  EXPECT_EQ(FullClosure(sys, t, L({1, 2, 3, 4})), L({1, 2, 3, 4}));
  // The 6-set absorbs a singleton (its complement pair has lambda 3 once
  // split) and then everything.
  EXPECT_EQ(FullClosure(sys, t, L({3, 4, 5, 6, 7, 8})), sys.full());
  // In U_{2,4} with the order-2 tangle {empty}, {0,1} has lambda 3 > 2.
  auto u24 = testing::Uniform(2, 4);
  EXPECT_THROW(FullClosure(u24, Tangle(2, 4, {0}), MaskOf({0, 1})),
               PreconditionFailed);
}

TEST(PartialSequenceTest, Examples) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  EXPECT_TRUE(ValidatePartialKSequence(sys, t, L({2, 4, 6, 8}), {}));
  EXPECT_FALSE(ValidatePartialKSequence(sys, t, L({3, 4, 5, 6}), {L({1}), L({1})}));
  EXPECT_FALSE(ValidatePartialKSequence(sys, t, L({2, 4, 6, 8}), {L({1})}));
  EXPECT_TRUE(ValidatePartialKSequence(sys, t, L({3, 4, 5, 6, 7, 8}), {L({1}), L({2})}));
  EXPECT_FALSE(ValidatePartialKSequence(sys, t, L({3, 4, 5, 6, 7, 8}), {L({1, 2})}));
  EXPECT_FALSE(ValidatePartialKSequence(sys, t, L({3, 4, 5, 6, 7, 8}), {0}));
}

TEST(SequentialTest, Examples) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  oracle::Oracle o(sys, t);
  EXPECT_FALSE(IsSequential(sys, t, L({1, 3, 5, 7})));
  EXPECT_TRUE(IsSequential(sys, t, 0));
  // {3,...,8} grows to E, so ({1,2}, rest) is sequential.
  EXPECT_TRUE(IsSequential(sys, t, L({1, 2})));
  EXPECT_EQ(IsSequential(sys, t, L({1, 2})), o.Sequential(L({1, 2})));
  // E - {1} is weak-complemented: {1} is weak, so not sequential.
  EXPECT_FALSE(IsSequential(sys, t, L({2, 3, 4, 5, 6, 7, 8})));
}

TEST(EquivalenceTest, Examples) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  Separation faces = Separation::Of(L({1, 2, 3, 4}), 8, 4);
  Separation diag = Separation::Of(L({1, 3, 5, 7}), 8, 4);
  EXPECT_TRUE(EquivalentSeparations(sys, t, faces, faces));
  EXPECT_FALSE(EquivalentSeparations(sys, t, faces, diag));
  EXPECT_EQ(Separation::Of(L({5, 6, 7, 8}), 8, 4), faces);
}

// Moving a weak flap A from G to R keeps the class when G-A stays strong.
TEST(EquivalenceTest, WeakFlapMoves) {
  int checked = 0;
  for (const auto& inst : ClosureCorpus()) {
    const auto& sys = inst.sys;
    const Tangle& t = inst.tangle;
    Workspace ws(sys, t);
    for (SubsetMask r : ws.StrongSeparations()) {
      const SubsetMask g = sys.Complement(r);
      for (SubsetMask a : WeakCandidates(t, g, ClosureOrder::kForward)) {
        if (sys(r | a) > t.k() || t.IsWeak(g & ~a)) continue;
        ASSERT_TRUE(EquivalentSeparations(sys, t, ws.Sep(r), ws.Sep(r | a)))
            << inst.name << " " << FormatMask(r) << " + " << FormatMask(a);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(TreeCompatibleTest, DefaultPassesEverywhere) {
  for (const auto& inst : ClosureCorpus()) {
    EXPECT_TRUE(VerifyTreeCompatible(inst.sys, inst.tangle,
                                     BuildDefaultS(inst.sys, inst.tangle))
                    .empty())
        << inst.name;
  }
}

TEST(TreeCompatibleTest, AllSubsetsViolatesDefinition) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  std::vector<SubsetMask> all;
  for (SubsetMask x = 0; x < 256; ++x) all.push_back(x);
  auto report = VerifyTreeCompatible(sys, t, TreeCompatibleSet::Explicit(all));
  ASSERT_FALSE(report.empty());
  bool sequential_witness = false;
  for (const auto& v : report) {
    if (v.axiom == "definition" && v.witness[0] == L({1, 2})) sequential_witness = true;
  }
  EXPECT_TRUE(sequential_witness);
}

TEST(TreeCompatibleTest, ExplicitNonClosedFamilyFailsS1OrS2) {
  // Only one side of the R_8 diagonal separation: S2 demands its strong
  // supersets that are k-separating, and the complement is missing too.
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  auto report = VerifyTreeCompatible(
      sys, t, TreeCompatibleSet::Explicit({L({1, 2}), L({1, 2, 3, 4})}));
  bool definition = false;
  for (const auto& v : report) definition |= v.axiom == "definition";
  EXPECT_TRUE(definition);
  // The default family minus one class member: S1 catches it on a system
  // with a non-singleton class.
  for (const auto& inst : ClosureCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    for (const auto& cls : ws.KSClasses()) {
      if (cls.size() < 2) continue;
      std::vector<SubsetMask> family;
      for (SubsetMask x = 0; x <= inst.sys.full(); ++x) {
        if (ws.InS(x) && x != cls[1]) family.push_back(x);
      }
      auto r = VerifyTreeCompatible(inst.sys, inst.tangle,
                                    TreeCompatibleSet::Explicit(family));
      bool s1 = false;
      for (const auto& v : r) s1 |= v.axiom == "S1";
      EXPECT_TRUE(s1) << inst.name;
      return;
    }
  }
}

TEST(KSSeparationTest, R8) {
  auto sys = ConnectivitySystem::R8Polymatroid(1);
  Tangle t = R8Tangle();
  auto seps = EnumerateKSSeparations(sys, t, TreeCompatibleSet::Default());
  std::vector<SubsetMask> sides;
  for (const auto& s : seps) sides.push_back(s.side);
  // The six plane pairs, lexicographically.
  EXPECT_EQ(sides, (std::vector<SubsetMask>{L({1, 2, 3, 4}), L({1, 2, 5, 6}),
                                            L({1, 2, 7, 8}), L({1, 3, 5, 7}),
                                            L({1, 4, 5, 8}), L({1, 4, 6, 7})}));
  Workspace ws(sys, t);
  EXPECT_TRUE(ws.InS(L({1, 3, 5, 7})));
  EXPECT_EQ(ws.KSClasses().size(), 6u);
}

TEST(KSSeparationTest, NothingSmallEnough) {
  auto high = ConnectivitySystem::FromFunction(
      5, [](SubsetMask x) { return (x == 0 || x == 31) ? 0 : 6; });
  Tangle t(3, 5, {0});
  EXPECT_TRUE(EnumerateKSSeparations(high, t, TreeCompatibleSet::Default()).empty());
}

TEST(KSSeparationTest, MatchesOracle) {
  for (const auto& inst : ClosureCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    oracle::Oracle o(inst.sys, inst.tangle);
    std::vector<SubsetMask> engine = ws.KSSeparations();
    std::sort(engine.begin(), engine.end());
    EXPECT_EQ(engine, o.KSSeparations()) << inst.name;
    std::vector<std::vector<SubsetMask>> classes = ws.KSClasses();
    for (auto& c : classes) std::sort(c.begin(), c.end());
    std::sort(classes.begin(), classes.end());
    EXPECT_EQ(classes, o.Classes()) << inst.name;
  }
}

// Extensive, monotone, idempotent, order independent, and equal to the
// intersection of all fully closed supersets.
TEST(ClosureLawsTest, OperatorLaws) {
  for (const auto& inst : ClosureCorpus()) {
    const auto& sys = inst.sys;
    const Tangle& t = inst.tangle;
    oracle::Oracle o(sys, t);
    auto sets = StrongKSeparating(inst);
    ASSERT_FALSE(sets.empty()) << inst.name;
    for (SubsetMask x : sets) {
      const SubsetMask c = FullClosure(sys, t, x);
      ASSERT_TRUE(IsSubset(x, c));
      ASSERT_EQ(FullClosure(sys, t, c), c);
      ASSERT_TRUE(IsFullyClosed(sys, t, c));
      ASSERT_EQ(FullClosure(sys, t, x, ClosureOrder::kReverse), c) << inst.name;
      ASSERT_EQ(o.FullClosure(x), c) << inst.name << " " << FormatMask(x);
      ASSERT_EQ(IsFullyClosed(sys, t, x), o.FullyClosed(x));
    }
    for (SubsetMask x : sets) {
      for (SubsetMask y : sets) {
        if (IsSubset(x, y)) {
          ASSERT_TRUE(IsSubset(FullClosure(sys, t, x), FullClosure(sys, t, y)));
        }
      }
    }
  }
}

TEST(ClosureLawsTest, PartialSequencesStayInsideClosure) {
  std::mt19937_64 rng(5);
  int walks = 0;
  for (const auto& inst : ClosureCorpus()) {
    const auto& sys = inst.sys;
    const Tangle& t = inst.tangle;
    for (SubsetMask x : StrongKSeparating(inst)) {
      std::vector<SubsetMask> seq;
      SubsetMask cur = x;
      while (rng() % 4 != 0) {
        auto cands = WeakCandidates(t, sys.Complement(cur), ClosureOrder::kForward);
        std::shuffle(cands.begin(), cands.end(), rng);
        bool grew = false;
        for (SubsetMask y : cands) {
          if (sys(cur | y) <= t.k()) {
            seq.push_back(y);
            cur |= y;
            grew = true;
            break;
          }
        }
        if (!grew) break;
      }
      ASSERT_TRUE(ValidatePartialKSequence(sys, t, x, seq));
      ASSERT_TRUE(IsSubset(cur, FullClosure(sys, t, x)));
      ++walks;
    }
  }
  EXPECT_GT(walks, 100);
}

TEST(ClosureLawsTest, GreedySequenceIsMaximalAndValid) {
  for (const auto& inst : ClosureCorpus()) {
    for (SubsetMask x : StrongKSeparating(inst)) {
      auto seq = GreedyPartialSequence(inst.sys, inst.tangle, x);
      ASSERT_TRUE(ValidatePartialKSequence(inst.sys, inst.tangle, x, seq));
    }
  }
}

TEST(EquivalenceLawsTest, OneSidedTestAgreesOnNonSequentialPairs) {
  long long pairs = 0;
  for (const auto& inst : ClosureCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    std::vector<SubsetMask> nonseq;
    for (SubsetMask x : ws.StrongSeparations()) {
      if (!ws.IsSequentialSet(x) && !ws.IsSequentialSet(ws.Complement(x))) {
        nonseq.push_back(x);
      }
    }
    for (SubsetMask a : nonseq) {
      for (SubsetMask b : nonseq) {
        ASSERT_EQ(EquivalentOneSided(inst.sys, inst.tangle, ws.Sep(a), ws.Sep(b)),
                  EquivalentSeparations(inst.sys, inst.tangle, ws.Sep(a), ws.Sep(b)))
            << inst.name;
        ++pairs;
      }
    }
  }
  EXPECT_GT(pairs, 10);
}

TEST(EquivalenceLawsTest, EquivalenceRelationOnKSSeparations) {
  for (const auto& inst : ClosureCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    const auto& seps = ws.KSSeparations();
    for (SubsetMask a : seps) {
      ASSERT_TRUE(ws.Equivalent(a, a));
      for (SubsetMask b : seps) {
        ASSERT_EQ(ws.Equivalent(a, b), ws.Equivalent(b, a));
        if (!ws.Equivalent(a, b)) continue;
        for (SubsetMask c : seps) {
          if (ws.Equivalent(b, c)) {
            ASSERT_TRUE(ws.Equivalent(a, c));
          }
        }
      }
    }
  }
}

TEST(EquivalenceLawsTest, ClosureSideIsEquivalent) {
  int checked = 0;
  for (const auto& inst : ClosureCorpus()) {
    Workspace ws(inst.sys, inst.tangle);
    for (SubsetMask r : ws.StrongSeparations()) {
      if (ws.IsSequentialSet(r) || ws.IsSequentialSet(ws.Complement(r))) continue;
      for (SubsetMask side : {r, ws.Complement(r)}) {
        const SubsetMask c = ws.Fcl(side);
        ASSERT_TRUE(ws.IsStrongKSeparation(c));
        ASSERT_TRUE(ws.Equivalent(side, c)) << inst.name;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 10);
}

}  // namespace
}  // namespace tangleforge
