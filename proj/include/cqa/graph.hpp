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

#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace cqa {

// Directed graph over vertices 0..n-1 with sorted, duplicate-free adjacency.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : out_(n), in_(n) {}

  std::size_t size() const { return out_.size(); }
  std::size_t add_vertex() {
    out_.emplace_back();
    in_.emplace_back();
    return out_.size() - 1;
  }
  bool add_edge(std::size_t u, std::size_t v) {
    auto& o = out_[u];
    auto it = std::lower_bound(o.begin(), o.end(), v);
    if (it != o.end() && *it == v) return false;
    o.insert(it, v);
    auto& i = in_[v];
    i.insert(std::lower_bound(i.begin(), i.end(), u), u);
    return true;
  }
  bool has_edge(std::size_t u, std::size_t v) const {
    return std::binary_search(out_[u].begin(), out_[u].end(), v);
  }
  const std::vector<std::size_t>& out(std::size_t u) const { return out_[u]; }
  const std::vector<std::size_t>& in(std::size_t u) const { return in_[u]; }
  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& o : out_) n += o.size();
    return n;
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t u = 0; u < out_.size(); ++u)
      for (auto v : out_[u]) out.emplace_back(u, v);
    return out;
  }

 private:
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

struct Components {
  std::vector<std::size_t> of;  // vertex -> component id
  std::vector<std::vector<std::size_t>> members;
};

// Tarjan's algorithm (iterative). Component ids are in reverse topological
// order of the condensation; members are sorted.
inline Components strong_components(const Digraph& g) {
  const std::size_t n = g.size();
  const std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, none), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  Components c;
  c.of.assign(n, none);
  std::size_t next = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < g.out(v).size()) {
        std::size_t w = g.out(v)[pos++];
        if (index[w] == none) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.of[w] = c.members.size();
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        c.members.push_back(std::move(comp));
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) {
        std::size_t parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
    }
  }
  return c;
}

// Components with no incoming edge from another component.
inline std::vector<std::size_t> initial_components(const Digraph& g,
                                                   const Components& c) {
  std::vector<bool> has_pred(c.members.size(), false);
  for (auto [u, v] : g.edges())
    if (c.of[u] != c.of[v]) has_pred[c.of[v]] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.members.size(); ++i)
    if (!has_pred[i]) out.push_back(i);
  return out;
}

inline bool is_acyclic(const Digraph& g) {
  auto c = strong_components(g);
  for (const auto& m : c.members)
    if (m.size() > 1) return false;
  for (std::size_t u = 0; u < g.size(); ++u)
    if (g.has_edge(u, u)) return false;
  return true;
}

// Union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Calls fn for every elementary directed cycle whose length is at most
// max_len, each exactly once, as a vertex sequence starting at its least
// vertex. Stops early when fn returns false.
inline void for_each_elementary_cycle(
    const Digraph& g, std::size_t max_len,
    const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> path;
  std::vector<bool> on_path(g.size(), false);
  bool stop = false;
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t start,
                                                         std::size_t v) {
    for (auto w : g.out(v)) {
      if (stop) return;
      if (w == start) {
        if (!fn(path)) stop = true;
        continue;
      }
      if (w < start || on_path[w] || path.size() >= max_len) continue;
      path.push_back(w);
      on_path[w] = true;
      dfs(start, w);
      on_path[w] = false;
      path.pop_back();
    }
  };
  for (std::size_t s = 0; s < g.size() && !stop; ++s) {
    path.assign(1, s);
    on_path[s] = true;
    dfs(s, s);
    on_path[s] = false;
  }
}

}  // namespace cqa
