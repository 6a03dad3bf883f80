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

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "cqa/fd.hpp"
#include "cqa/graph.hpp"
#include "cqa/model.hpp"

namespace cqa {

enum class Strength { weak, strong };
enum class ComplexityClass { FO, LSPACE_NOT_FO, CONP_COMPLETE };

inline const char* to_string(ComplexityClass c) {
  switch (c) {
    case ComplexityClass::FO:
      return "FO";
    case ComplexityClass::LSPACE_NOT_FO:
      return "LSPACE_NOT_FO";
    case ComplexityClass::CONP_COMPLETE:
      return "CONP_COMPLETE";
  }
  return "";
}

// F0 -x1-> F1 ... -xl-> Fl, atoms given by index into the query.
struct Witness {
  std::vector<std::size_t> atoms;
  std::vector<std::string> labels;
};

struct AttackEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Witness witness;
  Strength strength = Strength::weak;
};

struct AttackGraph {
  Query query;
  std::vector<AttackEdge> edges;
  Digraph graph;

  const AttackEdge* edge(std::size_t f, std::size_t g) const {
    for (const auto& e : edges)
      if (e.from == f && e.to == g) return &e;
    return nullptr;
  }
  bool attacks(std::size_t f, std::size_t g) const {
    return graph.has_edge(f, g);
  }
  bool attacked(std::size_t g) const { return !graph.in(g).empty(); }
};

// K+(F, q): closure of key(F) under FD(q \ {F}) ∪ FD(catoms(q)).
inline VarSet keycl(std::size_t f, const Query& q) {
  FdSet sigma;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (i != f || q[i].consistent())
      sigma.push_back({q[i].key_vars(), q[i].vars()});
  return fd_closure(q[f].key_vars(), sigma);
}

inline VarSet keycl(const Atom& f, const Query& q) {
  auto i = q.index_of(f.name());
  if (!i) throw Error("atom " + f.name() + " is not in the query");
  return keycl(*i, q);
}

namespace attack_detail {

// BFS over atoms from f, stepping along shared variables outside k.
// parent[j] = predecessor atom, label[j] = variable used.
struct Bfs {
  std::vector<std::size_t> parent;
  std::vector<std::string> label;
  std::vector<bool> seen;
};

inline Bfs bfs(std::size_t f, const Query& q, const VarSet& k) {
  const std::size_t none = static_cast<std::size_t>(-1);
  Bfs b{std::vector<std::size_t>(q.size(), none),
        std::vector<std::string>(q.size()), std::vector<bool>(q.size(), false)};
  std::vector<VarSet> vars;
  for (const auto& a : q.atoms()) vars.push_back(a.vars());
  std::deque<std::size_t> queue{f};
  b.seen[f] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < q.size(); ++v) {
      if (b.seen[v]) continue;
      for (const auto& x : vars[u]) {
        if (k.count(x) || !vars[v].count(x)) continue;
        b.seen[v] = true;
        b.parent[v] = u;
        b.label[v] = x;
        queue.push_back(v);
        break;
      }
    }
  }
  return b;
}

}  // namespace attack_detail

inline AttackGraph attack_graph(const Query& q) {
  AttackGraph g{q, {}, Digraph(q.size())};
  FdSet all = fds_of(q);
  for (std::size_t f = 0; f < q.size(); ++f) {
    VarSet k = keycl(f, q);
    auto b = attack_detail::bfs(f, q, k);
    for (std::size_t t = 0; t < q.size(); ++t) {
      if (t == f || !b.seen[t]) continue;
      AttackEdge e;
      e.from = f;
      e.to = t;
      for (std::size_t v = t; v != f; v = b.parent[v]) {
        e.witness.atoms.insert(e.witness.atoms.begin(), v);
        e.witness.labels.insert(e.witness.labels.begin(), b.label[v]);
      }
      e.witness.atoms.insert(e.witness.atoms.begin(), f);
      e.strength = entails(all, {q[f].key_vars(), q[t].key_vars()})
                       ? Strength::weak
                       : Strength::strong;
      g.graph.add_edge(f, t);
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

// Variables of q attacked by atom f.
inline VarSet attacked_variables(std::size_t f, const Query& q) {
  VarSet k = keycl(f, q);
  auto b = attack_detail::bfs(f, q, k);
  VarSet out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!b.seen[i]) continue;
    for (const auto& x : q[i].vars())
      if (!k.count(x)) out.insert(x);
  }
  return out;
}

inline bool attacks_variable(std::size_t f, const std::string& x,
                             const Query& q) {
  return attacked_variables(f, q).count(x) > 0;
}

inline bool attacks_variable(const Atom& f, const std::string& x,
                             const Query& q) {
  auto i = q.index_of(f.name());
  if (!i) throw Error("atom " + f.name() + " is not in the query");
  return attacks_variable(*i, x, q);
}

inline bool has_strong_cycle(const AttackGraph& g) {
  for (const auto& e : g.edges) {
    if (!g.attacks(e.to, e.from)) continue;
    if (e.strength == Strength::strong) return true;
  }
  return false;
}

inline ComplexityClass classify_complexity(const AttackGraph& g) {
  if (is_acyclic(g.graph)) return ComplexityClass::FO;
  if (has_strong_cycle(g)) return ComplexityClass::CONP_COMPLETE;
  return ComplexityClass::LSPACE_NOT_FO;
}

inline ComplexityClass classify_complexity(const Query& q) {
  return classify_complexity(attack_graph(q));
}

inline bool has_key_join_property(const Query& q) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      VarSet shared = intersection(q[i].vars(), q[j].vars());
      VarSet ki = q[i].key_vars(), kj = q[j].key_vars();
      if (shared.empty() || shared == ki || shared == kj) continue;
      if (is_subset(set_union(ki, kj), shared)) continue;
      return false;
    }
  }
  return true;
}

// Atom-index sets of the initial strong components, in atom order.
inline std::vector<std::vector<std::size_t>> initial_strong_components(
    const AttackGraph& g) {
  auto comps = strong_components(g.graph);
  std::vector<std::vector<std::size_t>> out;
  for (auto c : initial_components(g.graph, comps))
    out.push_back(comps.members[c]);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cqa
