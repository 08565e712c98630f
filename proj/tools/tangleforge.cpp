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

// Command-line front end. JSON on stdout unless --dot is given.
//
// Exit codes: 0 success, 1 usage or IO error, 2 verification failure (a JSON
// report is still printed), 3 search space too large.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tangleforge/closure.hpp"
#include "tangleforge/connectivity.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/flower.hpp"
#include "tangleforge/io.hpp"
#include "tangleforge/ktree.hpp"
#include "tangleforge/oracle.hpp"
#include "tangleforge/tangle.hpp"
#include "tangleforge/workspace.hpp"

namespace tf = tangleforge;
using nlohmann::json;

namespace {

struct Options {
  std::string input;
  int k = 0;
  std::string tangle;
  std::string s = "default";
  bool dot = false;
  int max_n = 14;
  std::uint64_t seed = 1;
  bool verify = false;
  std::string set;
  std::string petals;
  std::string seed_side;
  int max_petals = 4;
};

// Exit status 2 with a report on stdout.
struct Failed {
  json report;
};

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tf::InvalidInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw tf::InvalidInput(path + ": " + e.what());
  }
}

json ParseInline(const std::string& text, const char* flag) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    throw tf::InvalidInput(std::string(flag) + " expects JSON, e.g. [0,1]");
  }
}

void Emit(const json& j) { std::cout << j.dump(2) << "\n"; }

class Session {
 public:
  explicit Session(const Options& o) : o_(o), sys_(Load(o)) {}

  const tf::ConnectivitySystem& sys() const { return sys_; }

  void RequireK() const {
    if (o_.k < 1) throw tf::InvalidInput("--k >= 1 is required");
  }
  void RequireSmall() const {
    if (sys_.n() > o_.max_n) {
      throw tf::SearchSpaceTooLarge("n = " + std::to_string(sys_.n()) +
                                    " exceeds --max-n " + std::to_string(o_.max_n));
    }
  }

  tf::Tangle ChooseTangle() const {
    RequireK();
    if (o_.tangle == "canonical") {
      if (!sys_.rank()) throw tf::InvalidInput("canonical tangle needs a matroid");
      return tf::CanonicalVerticalTangle(*sys_.rank(), o_.k);
    }
    if (!o_.tangle.empty()) {
      tf::Tangle t = tf::io::LoadTangle(ReadJsonFile(o_.tangle), sys_.n());
      if (t.k() != o_.k) throw tf::InvalidInput("tangle order differs from --k");
      const auto report = tf::VerifyTangle(sys_, t);
      if (!report.empty()) {
        throw Failed{{{"error", "not a tangle"},
                      {"violations", tf::io::TangleReportJson(report)}}};
      }
      return t;
    }
    auto all = tf::EnumerateTangles(sys_, o_.k);
    if (all.size() != 1) {
      throw tf::InvalidInput("found " + std::to_string(all.size()) +
                             " tangles of order " + std::to_string(o_.k) +
                             "; pick one with --tangle");
    }
    return all[0];
  }

  tf::TreeCompatibleSet ChooseS() const {
    if (o_.s == "default") return tf::TreeCompatibleSet::Default();
    return tf::io::LoadS(ReadJsonFile(o_.s), sys_.n());
  }

  tf::Workspace MakeWorkspace() const {
    RequireSmall();
    tf::Workspace ws(sys_, ChooseTangle(), ChooseS());
    if (!ws.S().is_default()) {
      const auto bad = tf::VerifyTreeCompatible(ws.sys(), ws.tangle(), ws.S());
      if (!bad.empty()) {
        json v = json::array();
        for (const auto& b : bad) {
          json w = json::array();
          for (tf::SubsetMask x : b.witness) w.push_back(tf::io::SubsetJson(x));
          v.push_back({{"axiom", b.axiom}, {"witness", w}});
        }
        throw Failed{{{"error", "not a tree compatible set"}, {"violations", v}}};
      }
    }
    return ws;
  }

  tf::oracle::Oracle MakeOracle(const tf::Workspace& ws) const {
    return tf::oracle::Oracle(ws.sys(), ws.tangle(), ws.S().sets(),
                              !ws.S().is_default());
  }

 private:
  static tf::ConnectivitySystem Load(const Options& o) {
    if (o.input.empty()) throw tf::InvalidInput("--input is required");
    return tf::io::LoadSystem(ReadJsonFile(o.input));
  }

  const Options& o_;
  tf::ConnectivitySystem sys_;
};

json ClassesJson(const tf::Workspace& ws) {
  json classes = json::array();
  for (const auto& c : ws.KSClasses()) {
    json members = json::array();
    for (tf::SubsetMask x : c) members.push_back(tf::io::SeparationJson(ws.Sep(x)));
    classes.push_back(std::move(members));
  }
  return classes;
}

int RunCheck(const Options& o) {
  Session s(o);
  const auto v = tf::VerifyConnectivityAxioms(s.sys(), o.seed);
  json out = {{"kind", tf::KindName(s.sys().kind())},
              {"n", s.sys().n()},
              {"violations", tf::io::AxiomReportJson(v)}};
  bool ok = v.empty();
  if (o.k > 0 && (!o.tangle.empty())) {
    const tf::Tangle t = s.ChooseTangle();
    out["tangle"] = tf::io::TangleJson(t);
    out["robust"] = tf::IsRobust(t);
  }
  if (!ok) throw Failed{out};
  Emit(out);
  return 0;
}

int RunTangles(const Options& o) {
  Session s(o);
  s.RequireK();
  s.RequireSmall();
  json out = json::array();
  for (const auto& t : tf::EnumerateTangles(s.sys(), o.k)) {
    json j = tf::io::TangleJson(t);
    j["robust"] = tf::IsRobust(t);
    out.push_back(std::move(j));
  }
  Emit(out);
  return 0;
}

int RunFcl(const Options& o) {
  Session s(o);
  const tf::Workspace ws = s.MakeWorkspace();
  if (o.set.empty()) throw tf::InvalidInput("--set is required");
  const tf::SubsetMask x = tf::io::ParseSubset(ParseInline(o.set, "--set"), ws.n());
  json seq = json::array();
  for (tf::SubsetMask y : tf::GreedyPartialSequence(ws.sys(), ws.tangle(), x)) {
    seq.push_back(tf::io::SubsetJson(y));
  }
  Emit({{"set", tf::io::SubsetJson(x)},
        {"closure", tf::io::SubsetJson(ws.Fcl(x))},
        {"sequence", seq},
        {"fully_closed", ws.Fcl(x) == x}});
  return 0;
}

int RunSeparations(const Options& o) {
  Session s(o);
  const tf::Workspace ws = s.MakeWorkspace();
  Emit({{"separations", tf::io::SeparationsJson(tf::EnumerateKSSeparations(ws))},
        {"classes", ClassesJson(ws)}});
  return 0;
}

int RunFlower(const Options& o) {
  Session s(o);
  const tf::Workspace ws = s.MakeWorkspace();
  tf::Flower f;
  if (!o.petals.empty()) {
    const auto petals = tf::io::LoadPetals(ParseInline(o.petals, "--petals"), ws.n());
    try {
      f = tf::VerifyFlower(ws, petals);
    } catch (const tf::FlowerViolation& e) {
      throw Failed{{{"error", e.what()},
                    {"petal", e.petal},
                    {"witness", tf::io::SubsetJson(e.witness)}}};
    } catch (const tf::DichotomyViolation& e) {
      throw Failed{{{"error", e.what()}}};
    }
  } else if (!o.seed_side.empty()) {
    const tf::SubsetMask side =
        tf::io::ParseSubset(ParseInline(o.seed_side, "--seed-side"), ws.n());
    try {
      f = tf::MaximalFlower(ws, ws.Sep(side));
    } catch (const tf::NonRobustObstruction& e) {
      throw Failed{{{"error", "non-robust obstruction"},
                    {"witness", tf::io::SeparationJson(e.witness)}}};
    }
  } else {
    throw tf::InvalidInput("pass --petals or --seed-side");
  }
  if (o.dot) {
    std::cout << tf::io::FlowerDot(f, ws.sys().ground());
    return 0;
  }
  json out = tf::io::FlowerJson(f);
  out["loose"] = tf::LoosePetals(ws, f);
  out["displayed"] = tf::io::SeparationsJson(tf::DisplayedKS(ws, f));
  const auto order = tf::SOrder(ws, f);
  out["s_order"] = order.value;
  out["s_order_exact"] = order.exact;
  Emit(out);
  return 0;
}

int RunTree(const Options& o) {
  Session s(o);
  const tf::Workspace ws = s.MakeWorkspace();
  const tf::PiTree t = tf::BuildMaximalTree(ws);
  const auto verdict = tf::VerifyPartialKSTree(ws, t);
  json out = {{"tree", tf::io::TreeJson(t)}, {"verdict", tf::io::VerdictJson(verdict)}};
  bool ok = verdict.ok();
  if (o.verify) {
    const auto cert = s.MakeOracle(ws).CertifyTree(t);
    json w = json::array();
    for (tf::SubsetMask x : cert.witness) w.push_back(tf::io::SubsetJson(x));
    out["oracle"] = {{"ok", cert.ok}, {"failure", cert.failure}, {"witness", w}};
    ok = ok && cert.ok;
  }
  if (!ok) throw Failed{out};
  if (o.dot) {
    std::cout << tf::io::TreeDot(t, ws.sys().ground());
  } else {
    Emit(out);
  }
  return 0;
}

// Recomputes separations, classes and closures by exhaustion and records
// every disagreement with the engines.
int RunOracle(const Options& o) {
  Session s(o);
  const tf::Workspace ws = s.MakeWorkspace();
  const auto oracle = s.MakeOracle(ws);
  json disagreements = json::array();

  auto ks = oracle.KSSeparations();
  std::vector<tf::SubsetMask> engine_ks = ws.KSSeparations();
  std::sort(engine_ks.begin(), engine_ks.end());
  if (ks != engine_ks) {
    for (tf::SubsetMask x : ks) {
      if (!std::binary_search(engine_ks.begin(), engine_ks.end(), x)) {
        disagreements.push_back({{"what", "separation missing from engine"},
                                 {"witness", tf::io::SubsetJson(x)}});
      }
    }
    for (tf::SubsetMask x : engine_ks) {
      if (!std::binary_search(ks.begin(), ks.end(), x)) {
        disagreements.push_back({{"what", "separation unknown to oracle"},
                                 {"witness", tf::io::SubsetJson(x)}});
      }
    }
  }
  json closures = json::array();
  for (tf::SubsetMask x : ws.StrongSeparations()) {
    for (tf::SubsetMask side : {x, ws.Complement(x)}) {
      const tf::SubsetMask a = oracle.FullClosure(side), b = ws.Fcl(side);
      closures.push_back({{"set", tf::io::SubsetJson(side)}, {"closure", tf::io::SubsetJson(a)}});
      if (a != b) {
        disagreements.push_back({{"what", "full closure"},
                                 {"witness", tf::io::SubsetJson(side)}});
      }
    }
  }
  json classes = json::array();
  for (const auto& c : oracle.Classes()) {
    json members = json::array();
    for (tf::SubsetMask x : c) members.push_back(tf::io::SeparationJson(ws.Sep(x)));
    classes.push_back(std::move(members));
  }
  if (oracle.Classes().size() != ws.KSClasses().size()) {
    disagreements.push_back({{"what", "class count"},
                             {"witness", json::array()}});
  }
  json flowers = json::array();
  for (const auto& f : oracle.Flowers(o.max_petals)) {
    json petals = json::array();
    for (tf::SubsetMask p : f.petals) petals.push_back(tf::io::SubsetJson(p));
    flowers.push_back({{"petals", petals}, {"class", f.klass}});
  }
  json out = {{"separations", tf::io::SeparationsJson([&] {
                 std::vector<tf::Separation> v;
                 for (tf::SubsetMask x : ks) v.push_back(ws.Sep(x));
                 return v;
               }())},
              {"classes", classes},
              {"closures", closures},
              {"flowers", flowers},
              {"disagreements", disagreements}};
  if (!disagreements.empty()) throw Failed{out};
  Emit(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tangleforge: tangles, closures, flowers and partial k-trees"};
  app.require_subcommand(1, 1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_k) {
    sub->add_option("--input", o.input, "system JSON file")->required();
    auto* k = sub->add_option("--k", o.k, "tangle order");
    if (needs_k) k->required();
    k->check(CLI::PositiveNumber);
    sub->add_option("--tangle", o.tangle, "tangle JSON file, or 'canonical'");
    sub->add_option("--max-n", o.max_n, "refuse exhaustive work above this n");
  };
  auto engine = [&](CLI::App* sub) {
    common(sub, true);
    sub->add_option("--S", o.s, "'default' or a JSON file of sets");
  };

  auto* check = app.add_subcommand("check", "verify the connectivity axioms");
  common(check, false);
  check->add_option("--seed", o.seed, "seed for sampled checks");

  auto* tangles = app.add_subcommand("tangles", "enumerate tangles of order k");
  common(tangles, true);

  auto* fcl = app.add_subcommand("fcl", "full closure of a set");
  engine(fcl);
  fcl->add_option("--set", o.set, "JSON element array")->required();

  auto* seps = app.add_subcommand("separations", "(k,S)-separations and classes");
  engine(seps);

  auto* flower = app.add_subcommand("flower", "verify or grow a flower");
  engine(flower);
  flower->add_option("--petals", o.petals, "JSON array of petals");
  flower->add_option("--seed-side", o.seed_side, "side of the seed separation");
  flower->add_flag("--dot", o.dot, "emit DOT");

  auto* tree = app.add_subcommand("tree", "build a maximal partial (k,S)-tree");
  engine(tree);
  tree->add_flag("--dot", o.dot, "emit DOT");
  tree->add_flag("--verify", o.verify, "certify with the exhaustive oracle");

  auto* oracle = app.add_subcommand("oracle", "exhaustive recomputation report");
  engine(oracle);
  oracle->add_option("--max-petals", o.max_petals, "petal cap for flowers")
      ->check(CLI::Range(1, 8));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) return RunCheck(o);
    if (tangles->parsed()) return RunTangles(o);
    if (fcl->parsed()) return RunFcl(o);
    if (seps->parsed()) return RunSeparations(o);
    if (flower->parsed()) return RunFlower(o);
    if (tree->parsed()) return RunTree(o);
    if (oracle->parsed()) return RunOracle(o);
  } catch (const Failed& f) {
    Emit(f.report);
    return 2;
  } catch (const tf::SearchSpaceTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const tf::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tf::NotAPartition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const tf::Error& e) {
    // Failed preconditions and broken invariants are verification failures.
    Emit({{"error", e.what()}});
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
