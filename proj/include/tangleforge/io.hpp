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

// JSON and DOT conversions. This is the only header that needs nlohmann_json.

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tangleforge/closure.hpp"
#include "tangleforge/connectivity.hpp"
#include "tangleforge/error.hpp"
#include "tangleforge/flower.hpp"
#include "tangleforge/ktree.hpp"
#include "tangleforge/pitree.hpp"
#include "tangleforge/rank.hpp"
#include "tangleforge/subset.hpp"
#include "tangleforge/tangle.hpp"

namespace tangleforge::io {

using nlohmann::json;

inline json SubsetJson(SubsetMask x) { return Elements(x); }

inline SubsetMask ParseSubset(const json& j, int n) {
  if (!j.is_array()) throw InvalidInput("a subset must be an array of elements");
  SubsetMask out = 0;
  for (const auto& e : j) {
    if (!e.is_number_integer()) throw InvalidInput("subset elements must be integers");
    const int v = e.get<int>();
    if (v < 0 || v >= n) {
      throw InvalidInput("element " + std::to_string(v) + " outside 0.." +
                         std::to_string(n - 1));
    }
    if (Contains(out, v)) throw InvalidInput("element " + std::to_string(v) + " repeated");
    out |= Singleton(v);
  }
  return out;
}

namespace detail {

inline const json& Field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw InvalidInput(std::string("missing field \"") + name + "\"");
  }
  return j.at(name);
}

inline int IntField(const json& j, const char* name) {
  const json& v = Field(j, name);
  if (!v.is_number_integer()) {
    throw InvalidInput(std::string("field \"") + name + "\" must be an integer");
  }
  return v.get<int>();
}

inline std::vector<std::pair<int, int>> Edges(const json& j) {
  if (!j.is_array()) throw InvalidInput("edges must be an array of pairs");
  std::vector<std::pair<int, int>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer()) {
      throw InvalidInput("each edge must be a pair of vertex ids");
    }
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

inline std::vector<int> Ints(const json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array");
  std::vector<int> out;
  for (const auto& v : j) {
    if (!v.is_number_integer()) {
      throw InvalidInput(std::string(what) + " must contain integers");
    }
    out.push_back(v.get<int>());
  }
  return out;
}

inline int TableSize(std::size_t entries, const char* what) {
  int n = 0;
  while (n < 31 && (std::size_t{1} << n) < entries) ++n;
  if ((std::size_t{1} << n) != entries || n == 0) {
    throw InvalidInput(std::string(what) + " needs 2^n entries");
  }
  return n;
}

}  // namespace detail

inline ConnectivitySystem LoadSystem(const json& j) {
  const std::string kind = detail::Field(j, "kind").get<std::string>();
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();

  if (kind == "matroid") {
    const json& src = detail::Field(j, "source");
    std::optional<RankFunction> r;
    if (src.contains("uniform")) {
      const json& u = src.at("uniform");
      r = RankFunction::Uniform(detail::IntField(u, "r"), detail::IntField(u, "n"));
    } else if (src.contains("bases")) {
      const int n = src.contains("n") ? detail::IntField(src, "n") : -1;
      int max_element = -1;
      for (const auto& b : src.at("bases")) {
        for (int e : detail::Ints(b, "basis")) max_element = std::max(max_element, e);
      }
      const int size = n >= 0 ? n : max_element + 1;
      if (size < 1) throw InvalidInput("cannot infer the ground set size");
      std::vector<SubsetMask> bases;
      for (const auto& b : src.at("bases")) bases.push_back(ParseSubset(b, size));
      r = RankFunction::FromBases(size, std::move(bases));
    } else if (src.contains("rank_table")) {
      auto table = detail::Ints(src.at("rank_table"), "rank_table");
      detail::TableSize(table.size(), "rank_table");
      r = RankFunction::FromTable(std::move(table));
    } else if (src.contains("graphic")) {
      r = RankFunction::Graphic(detail::Edges(src.at("graphic")));
    } else {
      throw InvalidInput("matroid source must be bases, uniform, rank_table or graphic");
    }
    return ConnectivitySystem::FromMatroid(CheckedRank(*r), std::move(labels));
  }
  if (kind == "graph") {
    return ConnectivitySystem::FromGraph(detail::Edges(detail::Field(j, "edges")),
                                         std::move(labels));
  }
  if (kind == "r8_polymatroid") {
    return ConnectivitySystem::R8Polymatroid(detail::IntField(j, "ell"));
  }
  if (kind == "table") {
    auto lambda = detail::Ints(detail::Field(j, "lambda"), "lambda");
    const int n = detail::TableSize(lambda.size(), "lambda");
    if (j.contains("n") && detail::IntField(j, "n") != n) {
      throw InvalidInput("n does not match the lambda table length");
    }
    return ConnectivitySystem::FromTable(std::move(lambda), std::move(labels));
  }
  throw InvalidInput("unknown system kind \"" + kind + "\"");
}

inline json TangleJson(const Tangle& t) {
  json members = json::array();
  for (SubsetMask m : t.members()) members.push_back(SubsetJson(m));
  return {{"k", t.k()}, {"members", members}};
}

inline Tangle LoadTangle(const json& j, int n) {
  std::vector<SubsetMask> members;
  for (const auto& m : detail::Field(j, "members")) members.push_back(ParseSubset(m, n));
  return Tangle(detail::IntField(j, "k"), n, std::move(members));
}

inline TreeCompatibleSet LoadS(const json& j, int n) {
  const json& sets = j.is_object() ? detail::Field(j, "sets") : j;
  std::vector<SubsetMask> out;
  for (const auto& s : sets) out.push_back(ParseSubset(s, n));
  return TreeCompatibleSet::Explicit(std::move(out));
}

inline json SeparationJson(const Separation& s) {
  return {{"side", SubsetJson(s.side)}, {"k", s.k}};
}

inline json SeparationsJson(const std::vector<Separation>& seps) {
  json out = json::array();
  for (const auto& s : seps) out.push_back(SeparationJson(s));
  return out;
}

inline json FlowerJson(const Flower& f) {
  json petals = json::array();
  for (SubsetMask p : f.petals) petals.push_back(SubsetJson(p));
  return {{"petals", petals}, {"class", FlowerClassName(f.klass)}, {"k", f.k}};
}

inline std::vector<SubsetMask> LoadPetals(const json& j, int n) {
  const json& petals = j.is_object() ? detail::Field(j, "petals") : j;
  std::vector<SubsetMask> out;
  for (const auto& p : petals) out.push_back(ParseSubset(p, n));
  return out;
}

inline const char* KindTag(PiTree::Kind kind) {
  switch (kind) {
    case PiTree::Kind::kBag: return "bag";
    case PiTree::Kind::kAnemone: return "A";
    case PiTree::Kind::kDaisy: return "D";
  }
  return "bag";
}

// Neighbour lists are stored in order; for D vertices that order is the
// cyclic order and is repeated under "cyclic" for readers.
inline json TreeJson(const PiTree& t) {
  json vertices = json::array();
  for (int v = 0; v < t.size(); ++v) {
    const auto& vx = t.vertices[v];
    json o = {{"id", v}, {"kind", KindTag(vx.kind)}, {"nbrs", vx.nbrs}};
    if (vx.kind == PiTree::Kind::kBag) o["bag"] = SubsetJson(vx.bag);
    if (vx.kind == PiTree::Kind::kDaisy) o["cyclic"] = vx.nbrs;
    vertices.push_back(std::move(o));
  }
  return {{"k", t.k}, {"n", t.n}, {"vertices", vertices}};
}

inline PiTree LoadTree(const json& j) {
  PiTree t;
  t.k = detail::IntField(j, "k");
  t.n = detail::IntField(j, "n");
  if (t.n < 1 || t.n > 64) throw InvalidInput("tree n must be in 1..64");
  const json& vs = detail::Field(j, "vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const json& o = vs[i];
    if (o.contains("id") && detail::IntField(o, "id") != static_cast<int>(i)) {
      throw InvalidInput("vertex ids must be 0..|V|-1 in order");
    }
    const std::string kind = detail::Field(o, "kind").get<std::string>();
    PiTree::Vertex vx;
    if (kind == "bag") {
      vx.kind = PiTree::Kind::kBag;
      vx.bag = ParseSubset(detail::Field(o, "bag"), t.n);
    } else if (kind == "A") {
      vx.kind = PiTree::Kind::kAnemone;
    } else if (kind == "D") {
      vx.kind = PiTree::Kind::kDaisy;
    } else {
      throw InvalidInput("vertex kind must be bag, A or D");
    }
    const char* order = kind == "D" && o.contains("cyclic") ? "cyclic" : "nbrs";
    vx.nbrs = detail::Ints(detail::Field(o, order), order);
    t.vertices.push_back(std::move(vx));
  }
  t.CheckStructure();
  return t;
}

inline json AxiomReportJson(const std::vector<AxiomViolation>& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    json w = json::array();
    w.push_back(SubsetJson(v.x));
    if (v.property == "submodularity" || v.property == "difference") {
      w.push_back(SubsetJson(v.y));
    }
    out.push_back({{"axiom", v.property}, {"witness", w}});
  }
  return out;
}

inline json TangleReportJson(const std::vector<TangleViolation>& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    json w = json::array();
    for (SubsetMask x : v.witness) w.push_back(SubsetJson(x));
    out.push_back({{"axiom", v.axiom}, {"witness", w}});
  }
  return out;
}

inline json VerdictJson(const TreeVerdict& v) {
  json axioms = json::array();
  for (int i = 0; i < 5; ++i) {
    const auto& a = v.axiom[i];
    json o = {{"axiom", "P" + std::to_string(i + 1)}, {"pass", a.pass}};
    if (!a.pass) {
      o["detail"] = a.detail;
      if (a.vertex >= 0) o["vertex"] = a.vertex;
      if (a.witness) o["witness"] = SeparationJson(*a.witness);
    }
    axioms.push_back(std::move(o));
  }
  json displayed = json::array();
  for (SubsetMask x : v.displayed) displayed.push_back(SubsetJson(x));
  return {{"ok", v.ok()}, {"axioms", axioms}, {"displayed", displayed}};
}

namespace detail {

inline std::string Elements(SubsetMask x, const GroundSet& g) {
  std::string out;
  for (int e : tangleforge::Elements(x)) {
    if (!out.empty()) out += ",";
    out += g.Label(e);
  }
  return out;
}

inline std::string Quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

// Anemones are drawn as stars, daisies as a cycle around the centre.
inline std::string FlowerDot(const Flower& f, const GroundSet& g) {
  std::ostringstream os;
  os << "graph flower {\n";
  os << "  c [shape=circle,label=" << (f.klass == FlowerClass::kDaisy ? "D" : "A")
     << "];\n";
  for (int i = 0; i < f.size(); ++i) {
    os << "  p" << i << " [shape=box,label="
       << detail::Quote("{" + detail::Elements(f.petals[i], g) + "}") << "];\n";
  }
  for (int i = 0; i < f.size(); ++i) os << "  c -- p" << i << ";\n";
  if (f.klass == FlowerClass::kDaisy) {
    for (int i = 0; i < f.size(); ++i) {
      os << "  p" << i << " -- p" << (i + 1) % f.size() << " [style=dashed];\n";
    }
  }
  os << "}\n";
  return os.str();
}

inline std::string TreeDot(const PiTree& t, const GroundSet& g) {
  std::ostringstream os;
  os << "graph tree {\n";
  for (int v = 0; v < t.size(); ++v) {
    const auto& vx = t.vertices[v];
    if (vx.kind == PiTree::Kind::kBag) {
      os << "  v" << v << " [shape=box,label="
         << detail::Quote("{" + detail::Elements(vx.bag, g) + "}") << "];\n";
    } else {
      os << "  v" << v << " [shape=circle,label=" << KindTag(vx.kind) << "];\n";
    }
  }
  for (auto [u, v] : t.Edges()) {
    os << "  v" << u << " -- v" << v;
    // Number the edges of a daisy vertex by cyclic position.
    for (int end : {u, v}) {
      if (t.vertices[end].kind != PiTree::Kind::kDaisy) continue;
      const auto& nb = t.vertices[end].nbrs;
      const int other = end == u ? v : u;
      const auto pos = std::find(nb.begin(), nb.end(), other) - nb.begin();
      os << " [label=" << pos + 1 << "]";
      break;
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tangleforge::io
