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

// Seeded random (query, database) instances.

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cqa/attack.hpp"
#include "cqa/eval.hpp"
#include "cqa/longcycle.hpp"
#include "cqa/model.hpp"

namespace cqa {

enum class QueryShape { key_join, planted_cycle, unrestricted };

inline const char* to_string(QueryShape s) {
  switch (s) {
    case QueryShape::key_join: return "key-join";
    case QueryShape::planted_cycle: return "planted-cycle";
    case QueryShape::unrestricted: return "unrestricted";
  }
  return "";
}

struct GenOptions {
  std::size_t min_atoms = 2;
  std::size_t max_atoms = 6;
  std::size_t max_arity = 4;
  std::size_t max_key = 2;
  std::size_t max_block = 3;
  double key_join_bias = 0.4;
  double cycle_bias = 0.4;       // the rest is unrestricted
  double mode_c_prob = 0.2;      // for atoms outside a planted cycle
  double constant_prob = 0.05;   // a query term is a constant
  std::size_t max_domain = 4;
  std::size_t max_planted = 3;   // planted query embeddings
  std::size_t max_noise = 3;     // extra facts per relation
  std::uint64_t repair_cap = 4096;
  bool logspace_only = true;     // reject coNP-complete queries
};

struct Instance {
  std::uint64_t seed = 0;
  QueryShape shape = QueryShape::unrestricted;
  Query query;
  Database db;
};

namespace generator_detail {

using Rng = std::mt19937_64;

inline std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
inline bool coin(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

struct Builder {
  Rng& rng;
  const GenOptions& o;
  std::size_t domain;
  std::size_t next_var = 0;
  Query q;

  std::string fresh_var() { return "x" + std::to_string(next_var++); }
  std::string any_var() {
    if (next_var == 0 || coin(rng, 0.3)) return fresh_var();
    return "x" + std::to_string(pick(rng, 0, next_var - 1));
  }
  Term maybe_constant(Term t) {
    if (coin(rng, o.constant_prob))
      return Term::constant(Constant::number(static_cast<std::int64_t>(pick(rng, 1, domain))));
    return t;
  }
  void add(std::vector<Term> key, std::vector<Term> values, Mode mode) {
    std::size_t kl = key.size();
    key.insert(key.end(), values.begin(), values.end());
    std::string name = "R" + std::to_string(q.size() + 1);
    RelationSchema s{name, key.size(), kl, mode};
    q.add(Atom(std::move(s), std::move(key)));
  }
  Mode random_mode() { return coin(rng, o.mode_c_prob) ? Mode::c : Mode::i; }

  // Random atom over a growing variable pool.
  void random_atom(Mode mode) {
    std::size_t arity = pick(rng, 1, o.max_arity);
    std::size_t kl = pick(rng, 1, std::min(arity, o.max_key));
    std::vector<Term> key, vals;
    for (std::size_t i = 0; i < kl; ++i) key.push_back(maybe_constant(Term::var(any_var())));
    for (std::size_t i = kl; i < arity; ++i) vals.push_back(maybe_constant(Term::var(any_var())));
    add(std::move(key), std::move(vals), mode);
  }

  // Atom with fresh key variables whose values may reference the full key of
  // earlier atoms (foreign-key style).
  void key_join_atom() {
    std::vector<Term> key, vals;
    if (!q.empty() && coin(rng, 0.2)) {
      const Atom& ref = q[pick(rng, 0, q.size() - 1)];
      for (const auto& t : ref.key_terms()) key.push_back(t);
    } else {
      std::size_t kl = pick(rng, 1, o.max_key);
      for (std::size_t i = 0; i < kl; ++i) key.push_back(Term::var(fresh_var()));
    }
    std::size_t room = o.max_arity > key.size() ? o.max_arity - key.size() : 0;
    if (!q.empty() && room > 0 && coin(rng, 0.7)) {
      const Atom& ref = q[pick(rng, 0, q.size() - 1)];
      if (ref.key_terms().size() <= room)
        for (const auto& t : ref.key_terms()) vals.push_back(t);
    }
    while (vals.size() < room && coin(rng, 0.5)) vals.push_back(Term::var(fresh_var()));
    add(std::move(key), std::move(vals), random_mode());
  }

  // F_i(x_i | x_{i+1}, ...) for i < k: an M-cycle by construction.
  void planted_cycle(std::size_t k) {
    std::vector<std::string> xs;
    for (std::size_t i = 0; i < k; ++i) xs.push_back(fresh_var());
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Term> key{Term::var(xs[i])}, vals{Term::var(xs[(i + 1) % k])};
      std::size_t extra = pick(rng, 0, o.max_arity - 2);
      for (std::size_t j = 0; j < extra; ++j) vals.push_back(Term::var(any_var()));
      add(std::move(key), std::move(vals), Mode::i);
    }
  }
};

inline Query random_query(Rng& rng, const GenOptions& o, QueryShape shape,
                          std::size_t domain) {
  Builder b{rng, o, domain, 0, {}};
  std::size_t n = pick(rng, o.min_atoms, o.max_atoms);
  switch (shape) {
    case QueryShape::key_join:
      while (b.q.size() < n) b.key_join_atom();
      break;
    case QueryShape::planted_cycle: {
      std::size_t k = std::min<std::size_t>(pick(rng, 2, 3), o.max_atoms);
      b.planted_cycle(k);
      n = std::max(n, k);
      while (b.q.size() < n) b.random_atom(b.random_mode());
      break;
    }
    case QueryShape::unrestricted:
      while (b.q.size() < n) b.random_atom(b.random_mode());
      break;
  }
  return b.q;
}

// Planted embeddings of q plus noise facts, keeping mode-c relations
// consistent, blocks within max_block and the repair count within the cap.
inline Database random_database(Rng& rng, const GenOptions& o, const Query& q,
                                std::size_t domain) {
  Database db;
  db.declare_query(q);
  auto value = [&] {
    return Constant::number(static_cast<std::int64_t>(pick(rng, 1, domain)));
  };
  auto try_add = [&](const Fact& f) {
    if (db.contains(f)) return;
    const RelationSchema& s = *db.schema(f.relation());
    std::size_t in_block = 0;
    for (const auto& g : db.facts_of(f.relation()))
      if (g.key_equal(f)) ++in_block;
    if (in_block >= (s.mode == Mode::c ? 1 : o.max_block)) return;
    db.add(f);
    if (count_repairs(db, o.repair_cap) > o.repair_cap) db.erase(f);
  };
  std::size_t planted = pick(rng, 1, o.max_planted);
  for (std::size_t e = 0; e < planted; ++e) {
    Valuation theta;
    for (const auto& v : q.var_list()) theta[v] = value();
    for (const auto& a : q.atoms()) try_add(ground(theta, a));
  }
  for (const auto& a : q.atoms()) {
    std::size_t noise = pick(rng, 0, o.max_noise);
    for (std::size_t i = 0; i < noise; ++i) {
      auto existing = db.facts_of(a.name());
      std::vector<Constant> vals;
      if (!existing.empty() && coin(rng, 0.5)) {
        vals = existing[pick(rng, 0, existing.size() - 1)].key();
      }
      while (vals.size() < a.terms().size()) vals.push_back(value());
      try_add(Fact(a.name(), std::move(vals), a.relation().key_len));
    }
  }
  return db;
}

inline QueryShape random_shape(Rng& rng, const GenOptions& o) {
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (r < o.key_join_bias) return QueryShape::key_join;
  if (r < o.key_join_bias + o.cycle_bias) return QueryShape::planted_cycle;
  return QueryShape::unrestricted;
}

}  // namespace generator_detail

// Key-join query; retries until the property holds.
inline Query random_key_join_query(std::uint64_t seed, const GenOptions& o = {}) {
  generator_detail::Rng rng(seed);
  while (true) {
    Query q = generator_detail::random_query(rng, o, QueryShape::key_join,
                                             o.max_domain);
    if (has_key_join_property(q)) return q;
  }
}

inline Instance generate_instance(std::uint64_t seed, const GenOptions& o = {}) {
  generator_detail::Rng rng(seed);
  Instance inst;
  inst.seed = seed;
  inst.shape = generator_detail::random_shape(rng, o);
  std::size_t domain = generator_detail::pick(rng, 2, std::max<std::size_t>(2, o.max_domain));
  while (true) {
    Query q = generator_detail::random_query(rng, o, inst.shape, domain);
    if (inst.shape == QueryShape::key_join && !has_key_join_property(q)) continue;
    if (o.logspace_only &&
        classify_complexity(q) == ComplexityClass::CONP_COMPLETE)
      continue;
    inst.query = std::move(q);
    break;
  }
  inst.db = generator_detail::random_database(rng, o, inst.query, domain);
  return inst;
}

// count instances from consecutive seeds.
inline std::vector<Instance> generate_corpus(std::uint64_t seed, std::size_t count,
                                             const GenOptions& o = {}) {
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_instance(seed + i, o));
  return out;
}

// Union of random k-cycles (one vertex per part each), so every edge lies on
// a k-cycle.
inline KPartiteGraph random_kpartite(std::uint64_t seed, std::size_t k,
                                     std::size_t max_vertices,
                                     std::size_t max_cycles = 8) {
  generator_detail::Rng rng(seed);
  std::size_t per_part = std::max<std::size_t>(1, max_vertices / k);
  std::vector<std::size_t> size(k);
  for (auto& s : size) s = generator_detail::pick(rng, 1, per_part);
  KPartiteGraph g;
  g.k = k;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < size[i]; ++j) g.part.push_back(i);
  std::vector<std::vector<std::size_t>> members(k);
  for (std::size_t v = 0; v < g.part.size(); ++v) members[g.part[v]].push_back(v);
  g.graph = Digraph(g.part.size());
  std::size_t cycles = generator_detail::pick(rng, 1, max_cycles);
  for (std::size_t c = 0; c < cycles; ++c) {
    std::vector<std::size_t> pick;
    for (std::size_t i = 0; i < k; ++i)
      pick.push_back(members[i][generator_detail::pick(rng, 0, members[i].size() - 1)]);
    for (std::size_t i = 0; i < k; ++i) g.graph.add_edge(pick[i], pick[(i + 1) % k]);
  }
  return g;
}

}  // namespace cqa
