// Copyright 2026 The cqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// LONGCYCLE(k): does a k-partite digraph in which every edge lies on a
// k-cycle contain an elementary cycle of length >= 2k?

#pragma once

#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "cqa/error.hpp"
#include "cqa/graph.hpp"

namespace cqa {

struct KPartiteGraph {
  std::size_t k = 0;
  std::vector<std::size_t> part;  // vertex -> 0..k-1
  Digraph graph;

  std::size_t size() const { return part.size(); }
};

// All k-cycles, each as (v_0, ..., v_{k-1}) with v_i in part i.
inline std::vector<std::vector<std::size_t>> kcycles(const KPartiteGraph& g) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    for (auto w : g.graph.out(v)) {
      if (path.size() == g.k) {
        if (w == path.front()) out.push_back(path);
        continue;
      }
      path.push_back(w);
      dfs(w);
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (g.part[s] != 0) continue;
    path.assign(1, s);
    dfs(s);
  }
  return out;
}

inline void check_instance(const KPartiteGraph& g) {
  if (g.k < 2) throw Error("LONGCYCLE: k must be at least 2");
  for (auto [u, v] : g.graph.edges())
    if (g.part[v] != (g.part[u] + 1) % g.k)
      throw Error("LONGCYCLE: edge does not go from part i to part i+1");
  std::set<std::pair<std::size_t, std::size_t>> covered;
  for (const auto& c : kcycles(g))
    for (std::size_t i = 0; i < c.size(); ++i)
      covered.insert({c[i], c[(i + 1) % c.size()]});
  for (auto e : g.graph.edges())
    if (!covered.count(e)) throw Error("LONGCYCLE: edge on no k-cycle");
}

struct IntersectionGraph {
  std::vector<std::vector<std::size_t>> cycles;  // vertices of Ĝ
  std::vector<std::vector<bool>> adj;             // share a vertex, distinct
};

inline IntersectionGraph kcycle_intersection_graph(const KPartiteGraph& g) {
  IntersectionGraph h;
  h.cycles = kcycles(g);
  const std::size_t n = h.cycles.size();
  h.adj.assign(n, std::vector<bool>(n, false));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t i = 0; i < g.k && !h.adj[a][b]; ++i)
        if (h.cycles[a][i] == h.cycles[b][i]) h.adj[a][b] = h.adj[b][a] = true;
  return h;
}

// Ĝ-vertices P1 that start a path (P1, ..., P2k) whose two subpaths of
// 2k-1 vertices are chordless, closed into a cycle either by the edge
// {P1, P2k} or by a path whose interior avoids P2..P(2k-1) and all their
// neighbours.
inline std::set<std::size_t> long_chordless_starts(const IntersectionGraph& h,
                                                   std::size_t k) {
  const std::size_t n = h.cycles.size();
  const std::size_t len = 2 * k;
  std::set<std::size_t> out;
  std::vector<std::size_t> path;
  auto closes = [&]() {
    std::size_t first = path.front(), last = path.back();
    if (h.adj[first][last]) return true;
    std::vector<bool> blocked(n, false);
    for (std::size_t i = 1; i + 1 < len; ++i) {
      blocked[path[i]] = true;
      for (std::size_t v = 0; v < n; ++v)
        if (h.adj[path[i]][v]) blocked[v] = true;
    }
    DisjointSets ds(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (h.adj[a][b] && !blocked[a] && !blocked[b]) ds.unite(a, b);
    for (std::size_t d = 0; d < n; ++d) {
      if (blocked[d] || !h.adj[first][d]) continue;
      for (std::size_t e = 0; e < n; ++e)
        if (!blocked[e] && h.adj[last][e] && ds.find(d) == ds.find(e))
          return true;
    }
    return false;
  };
  std::function<bool()> extend = [&]() {
    if (path.size() == len) return closes();
    std::size_t tail = path.back();
    for (std::size_t v = 0; v < n; ++v) {
      if (!h.adj[tail][v]) continue;
      bool ok = true;
      for (std::size_t i = 0; i + 1 < path.size() && ok; ++i) {
        if (path[i] == v) ok = false;
        // Only the pair (P1, P2k) may be adjacent among non-consecutive.
        bool endpoints = i == 0 && path.size() + 1 == len;
        if (h.adj[path[i]][v] && !endpoints) ok = false;
      }
      if (!ok || v == tail) continue;
      path.push_back(v);
      bool found = extend();
      path.pop_back();
      if (found) return true;
    }
    return false;
  };
  for (std::size_t s = 0; s < n; ++s) {
    path.assign(1, s);
    if (extend()) out.insert(s);
  }
  return out;
}

// True iff some elementary cycle has length n*k with 2 <= n <= 2k-3.
inline bool has_bounded_long_cycle(const KPartiteGraph& g) {
  if (2 * g.k < 3 + 2) return false;  // 2k-3 < 2
  bool found = false;
  for_each_elementary_cycle(g.graph, (2 * g.k - 3) * g.k,
                            [&](const std::vector<std::size_t>& c) {
                              if (c.size() >= 2 * g.k) found = true;
                              return !found;
                            });
  return found;
}

inline bool longcycle(const KPartiteGraph& g) {
  check_instance(g);
  if (has_bounded_long_cycle(g)) return true;
  return !long_chordless_starts(kcycle_intersection_graph(g), g.k).empty();
}

inline constexpr std::size_t kBruteLongcycleCap = 14;

inline bool brute_longcycle(const KPartiteGraph& g,
                            std::size_t cap = kBruteLongcycleCap) {
  if (g.size() > cap)
    throw CapExceeded("brute_longcycle: more than " + std::to_string(cap) +
                      " vertices");
  bool found = false;
  for_each_elementary_cycle(g.graph, g.size(),
                            [&](const std::vector<std::size_t>& c) {
                              if (c.size() >= 2 * g.k) found = true;
                              return !found;
                            });
  return found;
}

}  // namespace cqa
