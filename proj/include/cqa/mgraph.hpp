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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cqa/attack.hpp"
#include "cqa/eval.hpp"
#include "cqa/fd.hpp"
#include "cqa/graph.hpp"
#include "cqa/model.hpp"
#include "cqa/saturation.hpp"

namespace cqa {

struct MGraph {
  Query query;
  Digraph graph;
};

// F -> G iff FD(catoms(q)) |= vars(F) -> key(G).
inline MGraph m_graph(const Query& q) {
  MGraph m{q, Digraph(q.size())};
  FdSet c = fds_of(catoms(q));
  for (std::size_t f = 0; f < q.size(); ++f) {
    VarSet cl = fd_closure(q[f].vars(), c);
    for (std::size_t g = 0; g < q.size(); ++g)
      if (f != g && is_subset(q[g].key_vars(), cl)) m.graph.add_edge(f, g);
  }
  return m;
}

// Elementary M-cycle F0 -> F1 -> ... -> F(k-1) -> F0 as atom indices.
struct MCycle {
  std::vector<std::size_t> atoms;

  std::size_t size() const { return atoms.size(); }
  std::size_t next(std::size_t i) const { return (i + 1) % atoms.size(); }
  friend bool operator==(const MCycle&, const MCycle&) = default;
};

inline std::vector<std::string> cycle_names(const Query& q, const MCycle& c) {
  std::vector<std::string> out;
  for (auto i : c.atoms) out.push_back(q[i].name());
  return out;
}

inline std::string to_string(const Query& q, const MCycle& c) {
  std::string out;
  for (auto i : c.atoms) out += q[i].name() + " -> ";
  return out + q[c.atoms.front()].name();
}

inline MCycle canonical_rotation(const Query& q, MCycle c) {
  auto best = std::min_element(
      c.atoms.begin(), c.atoms.end(),
      [&](std::size_t a, std::size_t b) { return q[a].name() < q[b].name(); });
  std::rotate(c.atoms.begin(), best, c.atoms.end());
  return c;
}

inline bool is_mcycle(const MGraph& m, const MCycle& c) {
  if (c.size() < 2) return false;
  std::set<std::size_t> seen(c.atoms.begin(), c.atoms.end());
  if (seen.size() != c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!m.graph.has_edge(c.atoms[i], c.atoms[c.next(i)])) return false;
  return true;
}

// Shortest elementary M-cycle using only atoms in allowed (all atoms if
// empty); ties broken by the name sequence of the canonical rotation.
inline std::optional<MCycle> shortest_mcycle(
    const MGraph& m, const std::vector<std::size_t>& allowed = {}) {
  const Query& q = m.query;
  std::vector<std::size_t> verts = allowed;
  if (verts.empty())
    for (std::size_t i = 0; i < q.size(); ++i) verts.push_back(i);
  Digraph sub(verts.size());
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = 0; b < verts.size(); ++b)
      if (m.graph.has_edge(verts[a], verts[b])) sub.add_edge(a, b);
  std::optional<MCycle> best;
  std::vector<std::string> best_names;
  for_each_elementary_cycle(sub, verts.size(),
                            [&](const std::vector<std::size_t>& cyc) {
                              if (cyc.size() < 2) return true;
                              MCycle c;
                              for (auto v : cyc) c.atoms.push_back(verts[v]);
                              c = canonical_rotation(q, c);
                              auto names = cycle_names(q, c);
                              if (!best || c.size() < best->size() ||
                                  (c.size() == best->size() &&
                                   names < best_names)) {
                                best = c;
                                best_names = names;
                              }
                              return true;
                            });
  return best;
}

// The M-cycle eliminated by the all-attacked case: shortest elementary
// M-cycle inside an initial strong component of the attack graph with at
// least two atoms.
inline MCycle find_mcycle(const Query& q) {
  if (!is_saturated(q)) throw Error("find_mcycle: query is not saturated");
  AttackGraph ag = attack_graph(q);
  if (has_strong_cycle(ag))
    throw Error("find_mcycle: attack graph has a strong cycle");
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!q[i].consistent() && !ag.attacked(i))
      throw Error("find_mcycle: mode-i atom " + q[i].name() + " is unattacked");
  MGraph m = m_graph(q);
  std::optional<MCycle> best;
  for (const auto& comp : initial_strong_components(ag)) {
    if (comp.size() < 2) continue;
    auto c = shortest_mcycle(m, comp);
    if (!c) continue;
    if (!best || c->size() < best->size() ||
        (c->size() == best->size() &&
         cycle_names(q, *c) < cycle_names(q, *best)))
      best = c;
  }
  if (!best)
    throw Error("find_mcycle: no M-cycle inside an initial strong component");
  return *best;
}

struct HookGraph {
  std::vector<Fact> facts;
  std::map<Fact, std::size_t> index;
  Digraph graph;
};

// A ↪ B iff some θ(q) ⊆ db and M-edge F -> G give A = θ(F), B ~ θ(G).
inline HookGraph hook_graph(const Query& q, const Database& db) {
  HookGraph h;
  for (const auto& a : q.atoms())
    for (const auto& f : db.facts_of(a.name())) {
      h.index.emplace(f, h.facts.size());
      h.facts.push_back(f);
    }
  h.graph = Digraph(h.facts.size());
  auto bidx = block_index(db);
  MGraph m = m_graph(q);
  for (const auto& theta : eval_bcq(q, db).valuations) {
    for (auto [f, g] : m.graph.edges()) {
      std::size_t a = h.index.at(ground(theta, q[f]));
      for (const auto& b : bidx.at(block_of(ground(theta, q[g]))))
        h.graph.add_edge(a, h.index.at(b));
    }
  }
  return h;
}

struct CHookGraph {
  Query query;
  MCycle cycle;
  std::vector<Fact> facts;             // sorted
  std::vector<std::size_t> position;   // fact -> index i of F_i in C
  std::map<Fact, std::size_t> index;
  Digraph graph;
  std::vector<Valuation> embeddings;   // all θ with θ(q) ⊆ db
};

inline CHookGraph chook_graph(const Query& q, const MCycle& c,
                              const Database& db) {
  CHookGraph h{q, c, {}, {}, {}, {}, {}};
  std::vector<std::pair<Fact, std::size_t>> tmp;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (const auto& f : db.facts_of(q[c.atoms[i]].name())) tmp.push_back({f, i});
  std::sort(tmp.begin(), tmp.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [f, i] : tmp) {
    h.index.emplace(f, h.facts.size());
    h.facts.push_back(f);
    h.position.push_back(i);
  }
  h.graph = Digraph(h.facts.size());
  auto bidx = block_index(db);
  h.embeddings = eval_bcq(q, db).valuations;
  for (const auto& theta : h.embeddings) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Atom& f = q[c.atoms[i]];
      const Atom& g = q[c.atoms[c.next(i)]];
      std::size_t a = h.index.at(ground(theta, f));
      for (const auto& b : bidx.at(block_of(ground(theta, g))))
        h.graph.add_edge(a, h.index.at(b));
    }
  }
  return h;
}

struct BlockQuotientGraph {
  std::vector<BlockKey> blocks;          // sorted
  std::vector<std::size_t> position;     // block -> index i of F_i in C
  std::vector<std::size_t> block_of;     // chook fact -> block
  Digraph graph;
};

inline BlockQuotientGraph block_quotient(const CHookGraph& h) {
  BlockQuotientGraph b;
  std::map<BlockKey, std::size_t> idx;
  for (std::size_t i = 0; i < h.facts.size(); ++i) {
    BlockKey k = cqa::block_of(h.facts[i]);
    auto [it, inserted] = idx.emplace(k, b.blocks.size());
    if (inserted) {
      b.blocks.push_back(k);
      b.position.push_back(h.position[i]);
    }
    b.block_of.push_back(it->second);
  }
  b.graph = Digraph(b.blocks.size());
  for (auto [u, v] : h.graph.edges())
    b.graph.add_edge(b.block_of[u], b.block_of[v]);
  return b;
}

struct Embedding {
  std::vector<Fact> facts;  // cycle order, starting at a fact of F_0
  std::size_t n = 1;
  bool relevant = false;

  friend bool operator<(const Embedding& a, const Embedding& b) {
    return a.facts < b.facts;
  }
  friend bool operator==(const Embedding& a, const Embedding& b) {
    return a.facts == b.facts;
  }
};

// Facts of every θ(C) with θ(q) ⊆ db, as fact tuples in cycle order.
inline std::set<std::vector<Fact>> relevant_cycles(const CHookGraph& h) {
  std::set<std::vector<Fact>> out;
  for (const auto& theta : h.embeddings) {
    std::vector<Fact> t;
    for (auto a : h.cycle.atoms) t.push_back(ground(theta, h.query[a]));
    out.insert(std::move(t));
  }
  return out;
}

// Elementary C-hook cycles of length n*k without two distinct key-equal
// facts, each reported once starting from its least F_0-fact.
inline std::vector<std::vector<std::size_t>> embedding_cycles(
    const CHookGraph& h, std::size_t n) {
  const std::size_t len = n * h.cycle.size();
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> path;
  std::set<BlockKey> used;
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    for (auto w : h.graph.out(v)) {
      if (path.size() == len) {
        if (w == path.front()) out.push_back(path);
        continue;
      }
      if (h.position[w] == 0 && w <= path.front()) continue;
      BlockKey bk = block_of(h.facts[w]);
      if (used.count(bk)) continue;
      used.insert(bk);
      path.push_back(w);
      dfs(w);
      path.pop_back();
      used.erase(bk);
    }
  };
  for (std::size_t s = 0; s < h.facts.size(); ++s) {
    if (h.position[s] != 0) continue;
    path.assign(1, s);
    used = {block_of(h.facts[s])};
    dfs(s);
  }
  return out;
}

struct OneEmbeddings {
  std::vector<Embedding> relevant;
  std::vector<Embedding> irrelevant;
};

inline OneEmbeddings one_embeddings(const CHookGraph& h) {
  auto rel = relevant_cycles(h);
  OneEmbeddings out;
  for (const auto& cyc : embedding_cycles(h, 1)) {
    Embedding e;
    for (auto v : cyc) e.facts.push_back(h.facts[v]);
    e.relevant = rel.count(e.facts) > 0;
    (e.relevant ? out.relevant : out.irrelevant).push_back(std::move(e));
  }
  return out;
}

inline OneEmbeddings one_embeddings(const Query& q, const MCycle& c,
                                    const Database& db) {
  return one_embeddings(chook_graph(q, c, db));
}

inline std::vector<Embedding> n_embeddings(const CHookGraph& h, std::size_t n) {
  std::vector<Embedding> out;
  for (const auto& cyc : embedding_cycles(h, n)) {
    Embedding e;
    e.n = n;
    for (auto v : cyc) e.facts.push_back(h.facts[v]);
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Embedding> n_embeddings(const Query& q, const MCycle& c,
                                           const Database& db, std::size_t n) {
  return n_embeddings(chook_graph(q, c, db), n);
}

}  // namespace cqa
