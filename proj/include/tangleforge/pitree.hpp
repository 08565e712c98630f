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

#include "tangleforge/error.hpp"
#include "tangleforge/subset.hpp"

namespace tangleforge {

// A tree whose vertices are bags (possibly empty) or flower vertices labelled
// A or D. For a D vertex the neighbour list is its cyclic edge order; for
// every vertex it is the order in which displayed partitions are listed.
struct PiTree {
  enum class Kind { kBag, kAnemone, kDaisy };
  struct Vertex {
    Kind kind = Kind::kBag;
    SubsetMask bag = 0;
    std::vector<int> nbrs;
  };

  int k = 0;
  int n = 0;
  std::vector<Vertex> vertices;

  int AddBag(SubsetMask bag) {
    vertices.push_back({Kind::kBag, bag, {}});
    return static_cast<int>(vertices.size()) - 1;
  }
  int AddFlowerVertex(Kind kind) {
    vertices.push_back({kind, 0, {}});
    return static_cast<int>(vertices.size()) - 1;
  }
  void AddEdge(int u, int v) {
    vertices[u].nbrs.push_back(v);
    vertices[v].nbrs.push_back(u);
  }
  // Replaces the edge u-v by u-w keeping u's cyclic position.
  void RetargetEdge(int u, int v, int w) {
    auto& nu = vertices[u].nbrs;
    *std::find(nu.begin(), nu.end(), v) = w;
    auto& nv = vertices[v].nbrs;
    nv.erase(std::find(nv.begin(), nv.end(), u));
    vertices[w].nbrs.push_back(u);
  }

  int size() const { return static_cast<int>(vertices.size()); }
  bool IsBag(int v) const { return vertices[v].kind == Kind::kBag; }
  bool IsLeaf(int v) const { return vertices[v].nbrs.size() == 1; }

  std::vector<std::pair<int, int>> Edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < size(); ++u) {
      for (int v : vertices[u].nbrs) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Union of the bags reachable from `start` without passing through `block`.
  SubsetMask BagsBeyond(int start, int block) const {
    SubsetMask out = 0;
    std::vector<int> stack = {start};
    std::vector<char> seen(vertices.size(), 0);
    seen[block] = 1;
    seen[start] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      if (IsBag(v)) out |= vertices[v].bag;
      for (int w : vertices[v].nbrs) {
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    return out;
  }

  // Throws InvalidInput unless this is a tree whose bags partition E.
  void CheckStructure() const {
    if (vertices.empty()) throw InvalidInput("tree has no vertices");
    std::size_t degree_sum = 0;
    SubsetMask seen = 0;
    for (int v = 0; v < size(); ++v) {
      const auto& vx = vertices[v];
      degree_sum += vx.nbrs.size();
      for (int w : vx.nbrs) {
        if (w < 0 || w >= size() || w == v) {
          throw InvalidInput("bad neighbour of vertex " + std::to_string(v));
        }
        const auto& back = vertices[w].nbrs;
        if (std::count(back.begin(), back.end(), v) != 1 ||
            std::count(vx.nbrs.begin(), vx.nbrs.end(), w) != 1) {
          throw InvalidInput("adjacency is not symmetric at vertex " +
                             std::to_string(v));
        }
      }
      if (vx.kind == Kind::kBag) {
        if ((vx.bag & seen) != 0) throw InvalidInput("bags overlap");
        seen |= vx.bag;
      } else if (vx.bag != 0) {
        throw InvalidInput("flower vertex carries a bag");
      }
    }
    if (seen != FullMask(n)) throw InvalidInput("bags do not cover E");
    if (degree_sum / 2 != vertices.size() - 1) {
      throw InvalidInput("edge count is not |V|-1");
    }
    std::vector<char> reach(vertices.size(), 0);
    std::vector<int> stack = {0};
    reach[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : vertices[v].nbrs) {
        if (!reach[w]) {
          reach[w] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    if (count != size()) throw InvalidInput("tree is not connected");
  }
};

}  // namespace tangleforge
