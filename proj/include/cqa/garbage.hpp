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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqa/eval.hpp"
#include "cqa/graph.hpp"
#include "cqa/longcycle.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/model.hpp"

namespace cqa {

struct SurvivingComponent {
  std::size_t id = 0;
  std::vector<Fact> facts;
  std::vector<std::vector<Fact>> relevant;  // θ(C) tuples inside the component
};

struct GarbageReport {
  std::set<BlockKey> garbage_blocks;
  std::vector<SurvivingComponent> surviving_components;

  // Seed counts per condition, for traces.
  std::size_t zero_outdegree = 0;
  std::size_t irrelevant = 0;
  std::size_t long_components = 0;

  bool contains(const Fact& f) const {
    return garbage_blocks.count(block_of(f)) > 0;
  }
};

namespace garbage_detail {

// Block-quotient restricted to the given relevant cycles, as a LONGCYCLE
// instance with parts given by the cycle position.
inline KPartiteGraph quotient_instance(
    const CHookGraph& h, const std::vector<const std::vector<Fact>*>& cycles) {
  KPartiteGraph g;
  g.k = h.cycle.size();
  std::map<BlockKey, std::size_t> idx;
  auto vertex = [&](const Fact& f, std::size_t pos) {
    auto [it, inserted] = idx.emplace(block_of(f), g.part.size());
    if (inserted) g.part.push_back(pos);
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto* c : cycles)
    for (std::size_t i = 0; i < c->size(); ++i)
      edges.push_back({vertex((*c)[i], i),
                       vertex((*c)[(i + 1) % c->size()], (i + 1) % c->size())});
  g.graph = Digraph(g.part.size());
  for (auto [u, v] : edges) g.graph.add_edge(u, v);
  return g;
}

}  // namespace garbage_detail

inline std::vector<SurvivingComponent> surviving_components(
    const CHookGraph& h) {
  auto comps = strong_components(h.graph);
  auto rel = relevant_cycles(h);
  std::vector<SurvivingComponent> out;
  for (const auto& m : comps.members) {
    SurvivingComponent s;
    for (auto v : m) s.facts.push_back(h.facts[v]);
    std::sort(s.facts.begin(), s.facts.end());
    for (const auto& c : rel)
      if (std::binary_search(s.facts.begin(), s.facts.end(), c.front()))
        s.relevant.push_back(c);
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.facts < b.facts; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = i;
  return out;
}

// Least fixpoint of: (1) zero C-hook outdegree, (2) irrelevant 1-embeddings,
// (3) n-embeddings with n >= 2, (4) relevant 1-embeddings touching garbage,
// (5) key-equality. Condition 3 marks whole strong components of the C-hook
// graph whose restricted block-quotient answers LONGCYCLE(k) = yes.
inline GarbageReport maximal_garbage_set(const Query& q, const MCycle& c,
                                         const Database& db) {
  CHookGraph h = chook_graph(q, c, db);
  GarbageReport r;
  std::deque<BlockKey> work;
  auto mark = [&](const Fact& f) {
    BlockKey b = block_of(f);
    if (r.garbage_blocks.insert(b).second) work.push_back(b);
  };

  for (std::size_t v = 0; v < h.facts.size(); ++v)
    if (h.graph.out(v).empty()) {
      ++r.zero_outdegree;
      mark(h.facts[v]);
    }

  for (const auto& e : one_embeddings(h).irrelevant) {
    ++r.irrelevant;
    for (const auto& f : e.facts) mark(f);
  }

  const std::size_t k = c.size();
  for (std::size_t n = 2; n + 3 <= 2 * k; ++n)
    for (const auto& e : n_embeddings(h, n))
      for (const auto& f : e.facts) mark(f);

  auto rel = relevant_cycles(h);
  auto comps = strong_components(h.graph);
  for (const auto& members : comps.members) {
    std::set<Fact> in;
    for (auto v : members) in.insert(h.facts[v]);
    std::vector<const std::vector<Fact>*> inside;
    for (const auto& cyc : rel)
      if (in.count(cyc.front())) inside.push_back(&cyc);
    if (inside.empty()) continue;
    if (!longcycle(garbage_detail::quotient_instance(h, inside))) continue;
    ++r.long_components;
    for (const auto& f : in) mark(f);
  }

  std::map<BlockKey, std::vector<const std::vector<Fact>*>> touching;
  for (const auto& cyc : rel)
    for (const auto& f : cyc) touching[block_of(f)].push_back(&cyc);
  while (!work.empty()) {
    BlockKey b = work.front();
    work.pop_front();
    auto it = touching.find(b);
    if (it == touching.end()) continue;
    for (const auto* cyc : it->second)
      for (const auto& f : *cyc) mark(f);
  }

  Database rest = db.filter([&](const Fact& f) { return !r.contains(f); });
  r.surviving_components = surviving_components(chook_graph(q, c, rest));
  return r;
}

inline Database remove_garbage(const Database& db, const GarbageReport& r) {
  return db.filter([&](const Fact& f) { return !r.contains(f); });
}

inline constexpr std::size_t kGarbageOracleBlockCap = 12;

// Maximal garbage set for q0 (relation names) in db, straight from the
// definition: o is block-closed over q0's relations and some repair r of o
// makes every θ with θ(q) ⊆ (db \ o) ∪ r satisfy θ(q0) ∩ r = ∅.
inline std::set<BlockKey> garbage_oracle(
    const Query& q, const std::vector<std::string>& q0, const Database& db,
    std::size_t block_cap = kGarbageOracleBlockCap) {
  std::set<std::string> rels(q0.begin(), q0.end());
  std::vector<Block> bs;
  for (auto& b : blocks(db))
    if (rels.count(b.key.relation)) bs.push_back(std::move(b));
  if (bs.size() > block_cap)
    throw CapExceeded("garbage_oracle: more than " + std::to_string(block_cap) +
                      " blocks");
  std::map<BlockKey, std::size_t> bidx;
  for (std::size_t i = 0; i < bs.size(); ++i) bidx[bs[i].key] = i;

  // Per embedding, its facts inside candidate blocks as (block, fact) pairs.
  struct Emb {
    std::vector<std::pair<std::size_t, std::size_t>> in_blocks;
    std::uint64_t mask = 0;
  };
  std::vector<Emb> embs;
  for (const auto& theta : eval_bcq(q, db).valuations) {
    Emb e;
    for (const auto& a : q.atoms()) {
      if (!rels.count(a.name())) continue;
      Fact f = ground(theta, a);
      std::size_t b = bidx.at(block_of(f));
      auto& facts = bs[b].facts;
      std::size_t pos = std::find(facts.begin(), facts.end(), f) - facts.begin();
      e.in_blocks.push_back({b, pos});
      e.mask |= std::uint64_t{1} << b;
    }
    embs.push_back(std::move(e));
  }

  // Does some repair r of o kill every embedding that touches o?
  auto is_garbage = [&](std::uint64_t o) {
    std::vector<const Emb*> relevant;
    for (const auto& e : embs)
      if (e.mask & o) relevant.push_back(&e);
    std::vector<std::size_t> order;
    for (std::size_t b = 0; b < bs.size(); ++b)
      if (o >> b & 1) order.push_back(b);
    std::vector<long> pick(bs.size(), -1);
    std::function<bool(std::size_t)> search = [&](std::size_t depth) {
      for (const auto* e : relevant) {
        // Survives iff all its facts in o are picked.
        bool alive = true, decided = true;
        for (auto [b, pos] : e->in_blocks) {
          if (!(o >> b & 1)) continue;
          if (pick[b] < 0) {
            decided = false;
          } else if (static_cast<std::size_t>(pick[b]) != pos) {
            alive = false;
          }
        }
        if (alive && decided) return false;
      }
      if (depth == order.size()) return true;
      std::size_t b = order[depth];
      for (std::size_t f = 0; f < bs[b].facts.size(); ++f) {
        pick[b] = static_cast<long>(f);
        if (search(depth + 1)) return true;
      }
      pick[b] = -1;
      return false;
    };
    return search(0);
  };

  std::vector<std::uint64_t> masks;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << bs.size()); ++m)
    masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](auto a, auto b) {
    return std::popcount(a) > std::popcount(b);
  });
  for (auto m : masks) {
    if (!is_garbage(m)) continue;
    std::set<BlockKey> out;
    for (std::size_t b = 0; b < bs.size(); ++b)
      if (m >> b & 1) out.insert(bs[b].key);
    return out;
  }
  return {};
}

}  // namespace cqa
