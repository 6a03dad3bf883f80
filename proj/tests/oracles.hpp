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

// Naive reference implementations used as test oracles. They follow the
// definitions literally and share no algorithmic code with the library
// beyond the data model.

#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cqa/cqa.hpp"

namespace oracle {

using cqa::Atom;
using cqa::Constant;
using cqa::Database;
using cqa::Fact;
using cqa::Query;
using cqa::Valuation;
using cqa::VarSet;

using Fd = std::pair<VarSet, VarSet>;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string fixture_path(const std::string& name) {
  return std::string(CQA_FIXTURES) + "/" + name;
}

inline Query fixture_query(const std::string& name) {
  return cqa::parse_query(read_file(fixture_path(name)));
}

inline Database fixture_db(const std::string& name, const Query& q) {
  return cqa::parse_database(read_file(fixture_path(name)), q);
}

// Attribute closure by repeated full passes, no early exit.
inline VarSet closure(VarSet x, const std::vector<Fd>& sigma) {
  while (true) {
    VarSet next = x;
    for (const auto& [l, r] : sigma)
      if (std::includes(x.begin(), x.end(), l.begin(), l.end()))
        next.insert(r.begin(), r.end());
    if (next == x) return x;
    x = std::move(next);
  }
}

inline VarSet key_vars(const Atom& a) {
  VarSet out;
  for (const auto& t : a.key_terms())
    if (t.is_var()) out.insert(t.name());
  return out;
}

inline VarSet all_vars(const Atom& a) {
  VarSet out;
  for (const auto& t : a.terms())
    if (t.is_var()) out.insert(t.name());
  return out;
}

inline std::vector<Fd> fds(const Query& q, bool consistent_only = false) {
  std::vector<Fd> out;
  for (const auto& a : q.atoms())
    if (!consistent_only || a.consistent()) out.push_back({key_vars(a), all_vars(a)});
  return out;
}

inline bool subset(const VarSet& a, const VarSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline VarSet keycl(std::size_t f, const Query& q) {
  std::vector<Fd> sigma;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (i != f) sigma.push_back({key_vars(q[i]), all_vars(q[i])});
  for (const auto& fd : fds(q, true)) sigma.push_back(fd);
  return closure(key_vars(q[f]), sigma);
}

// F attacks G iff some simple atom path F = F0, ..., Fl = G has every
// consecutive pair sharing a variable outside K+(F, q).
inline bool attacks(std::size_t f, std::size_t g, const Query& q) {
  if (f == g) return false;
  VarSet k = oracle::keycl(f, q);
  std::vector<bool> on(q.size(), false);
  std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
    if (u == g) return true;
    on[u] = true;
    for (std::size_t v = 0; v < q.size(); ++v) {
      if (on[v]) continue;
      bool link = false;
      for (const auto& x : all_vars(q[u]))
        if (!k.count(x) && all_vars(q[v]).count(x)) link = true;
      if (link && dfs(v)) return true;
    }
    on[u] = false;
    return false;
  };
  return dfs(f);
}

inline bool strong(std::size_t f, std::size_t g, const Query& q) {
  return !subset(key_vars(q[g]), closure(key_vars(q[f]), fds(q)));
}

// Checks a witness against the definition: starts at F, ends at G, and
// each label is shared by its two atoms and lies outside K+(F, q).
inline bool valid_witness(const cqa::AttackEdge& e, const Query& q) {
  const auto& w = e.witness;
  if (w.atoms.size() < 2 || w.labels.size() + 1 != w.atoms.size()) return false;
  if (w.atoms.front() != e.from || w.atoms.back() != e.to) return false;
  VarSet k = oracle::keycl(e.from, q);
  for (std::size_t i = 0; i < w.labels.size(); ++i) {
    const std::string& x = w.labels[i];
    if (k.count(x)) return false;
    if (!all_vars(q[w.atoms[i]]).count(x) || !all_vars(q[w.atoms[i + 1]]).count(x))
      return false;
  }
  return true;
}

inline std::set<std::pair<std::size_t, std::size_t>> attack_edges(const Query& q) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t f = 0; f < q.size(); ++f)
    for (std::size_t g = 0; g < q.size(); ++g)
      if (attacks(f, g, q)) out.insert({f, g});
  return out;
}

// Strong cycle of any length: some elementary attack cycle through a strong
// attack. Enumerates simple cycles exhaustively.
inline bool has_strong_cycle(const Query& q) {
  auto edges = attack_edges(q);
  const std::size_t n = q.size();
  std::vector<std::size_t> path;
  std::vector<bool> on(n, false);
  std::function<bool(std::size_t)> dfs = [&](std::size_t u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!edges.count({u, v})) continue;
      if (v == path.front()) {
        path.push_back(v);
        bool s = false;
        for (std::size_t i = 0; i + 1 < path.size(); ++i)
          s = s || strong(path[i], path[i + 1], q);
        path.pop_back();
        if (s) return true;
        continue;
      }
      if (on[v] || v < path.front()) continue;
      on[v] = true;
      path.push_back(v);
      if (dfs(v)) return true;
      path.pop_back();
      on[v] = false;
    }
    return false;
  };
  for (std::size_t s = 0; s < n; ++s) {
    path.assign(1, s);
    on.assign(n, false);
    on[s] = true;
    if (dfs(s)) return true;
  }
  return false;
}

inline bool attack_graph_acyclic(const Query& q) {
  auto edges = attack_edges(q);
  // Repeatedly strip vertices without incoming edges.
  std::set<std::size_t> alive;
  for (std::size_t i = 0; i < q.size(); ++i) alive.insert(i);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto v : std::set<std::size_t>(alive)) {
      bool in = false;
      for (auto u : alive) in = in || edges.count({u, v});
      if (!in) {
        alive.erase(v);
        changed = true;
      }
    }
  }
  return alive.empty();
}

inline bool key_join(const Query& q) {
  for (std::size_t i = 0; i < q.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (i == j) continue;
      VarSet shared;
      for (const auto& x : all_vars(q[i]))
        if (all_vars(q[j]).count(x)) shared.insert(x);
      VarSet both = key_vars(q[i]);
      for (const auto& x : key_vars(q[j])) both.insert(x);
      bool ok = shared.empty() || shared == key_vars(q[i]) ||
                shared == key_vars(q[j]) || subset(both, shared);
      if (!ok) return false;
    }
  return true;
}

inline std::set<std::pair<std::size_t, std::size_t>> m_edges(const Query& q) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  auto sigma = fds(q, true);
  for (std::size_t f = 0; f < q.size(); ++f)
    for (std::size_t g = 0; g < q.size(); ++g)
      if (f != g && subset(key_vars(q[g]), closure(all_vars(q[f]), sigma)))
        out.insert({f, g});
  return out;
}

// Brute-force sequential proof search over ordered atom sequences.
inline bool sequential_proof_exists(const Query& q, const VarSet& z,
                                    const std::string& w,
                                    const std::set<std::string>& allowed) {
  if (z.count(w)) return true;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (allowed.count(q[i].name())) pool.push_back(i);
  std::vector<bool> used(q.size(), false);
  std::function<bool(const VarSet&)> go = [&](const VarSet& have) {
    for (auto i : pool) {
      if (used[i] || !subset(key_vars(q[i]), have)) continue;
      VarSet next = have;
      for (const auto& x : all_vars(q[i])) next.insert(x);
      if (next.count(w)) return true;
      used[i] = true;
      bool ok = go(next);
      used[i] = false;
      if (ok) return true;
    }
    return false;
  };
  return go(z);
}

// Every valuation θ over vars(q) with θ(q) ⊆ db, by trying all fact
// combinations (one fact per atom).
inline std::set<Valuation> embeddings(const Query& q, const Database& db) {
  std::set<Valuation> out;
  std::vector<std::vector<Fact>> cands;
  for (const auto& a : q.atoms()) cands.push_back(db.facts_of(a.name()));
  std::vector<std::size_t> pick(q.size(), 0);
  for (const auto& c : cands)
    if (c.empty()) return out;
  while (true) {
    Valuation v;
    bool ok = true;
    for (std::size_t i = 0; i < q.size() && ok; ++i) {
      const Atom& a = q[i];
      const Fact& f = cands[i][pick[i]];
      for (std::size_t j = 0; j < a.terms().size() && ok; ++j) {
        const auto& t = a.terms()[j];
        if (!t.is_var()) {
          ok = t.value() == f.values()[j];
        } else {
          auto it = v.find(t.name());
          if (it == v.end())
            v.emplace(t.name(), f.values()[j]);
          else
            ok = it->second == f.values()[j];
        }
      }
    }
    if (ok) out.insert(v);
    std::size_t i = 0;
    while (i < q.size() && ++pick[i] == cands[i].size()) pick[i++] = 0;
    if (i == q.size()) return out;
  }
}

inline bool satisfies(const Query& q, const Database& db) {
  return !oracle::embeddings(q, db).empty();
}

// Groups facts by (relation, key) independently of the library's blocks().
inline std::vector<std::vector<Fact>> group_blocks(const Database& db) {
  std::map<std::pair<std::string, std::vector<Constant>>, std::vector<Fact>> m;
  for (const auto& f : db.facts()) {
    std::vector<Constant> key(f.values().begin(), f.values().begin() + f.key_len());
    m[{f.relation(), key}].push_back(f);
  }
  std::vector<std::vector<Fact>> out;
  for (auto& [k, v] : m) out.push_back(std::move(v));
  return out;
}

// Recursive repair enumeration; fn returns false to stop.
inline void repairs(const Database& db, const std::function<bool(const Database&)>& fn) {
  auto bs = group_blocks(db);
  Database r = db.filter([](const Fact&) { return false; });
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == bs.size()) return fn(r);
    for (const auto& f : bs[i]) {
      r.add(f);
      bool cont = go(i + 1);
      r.erase(f);
      if (!cont) return false;
    }
    return true;
  };
  go(0);
}

inline std::size_t repair_count(const Database& db) {
  std::size_t n = 0;
  repairs(db, [&](const Database&) {
    ++n;
    return true;
  });
  return n;
}

inline bool certain(const Query& q, const Database& db) {
  bool all = true;
  repairs(db, [&](const Database& r) {
    all = oracle::satisfies(q, r);
    return all;
  });
  return all;
}

inline Fact instantiate(const Valuation& v, const Atom& a) {
  std::vector<Constant> vals;
  for (const auto& t : a.terms()) vals.push_back(t.is_var() ? v.at(t.name()) : t.value());
  return Fact(a.name(), std::move(vals), a.relation().key_len);
}

inline bool key_equal(const Fact& a, const Fact& b) {
  if (a.relation() != b.relation()) return false;
  for (std::size_t i = 0; i < a.key_len(); ++i)
    if (!(a.values()[i] == b.values()[i])) return false;
  return true;
}

// A ↪C B per definition, as fact pairs.
inline std::set<std::pair<Fact, Fact>> chook_edges(const Query& q,
                                                   const cqa::MCycle& c,
                                                   const Database& db) {
  std::set<std::pair<Fact, Fact>> out;
  for (const auto& theta : embeddings(q, db))
    for (std::size_t i = 0; i < c.size(); ++i) {
      Fact a = instantiate(theta, q[c.atoms[i]]);
      Fact b = instantiate(theta, q[c.atoms[(i + 1) % c.size()]]);
      for (const auto& f : db.facts())
        if (key_equal(f, b)) out.insert({a, f});
    }
  return out;
}

// Length of every elementary directed cycle of g, by DFS from each start
// vertex over larger-numbered vertices.
inline std::set<std::size_t> cycle_lengths(const cqa::Digraph& g) {
  std::set<std::size_t> out;
  const std::size_t n = g.size();
  std::vector<bool> on(n, false);
  std::function<void(std::size_t, std::size_t, std::size_t)> dfs =
      [&](std::size_t s, std::size_t u, std::size_t len) {
        for (std::size_t v = 0; v < n; ++v) {
          if (!g.has_edge(u, v)) continue;
          if (v == s) out.insert(len);
          else if (v > s && !on[v]) {
            on[v] = true;
            dfs(s, v, len + 1);
            on[v] = false;
          }
        }
      };
  for (std::size_t s = 0; s < n; ++s) {
    on[s] = true;
    dfs(s, s, 1);
    on[s] = false;
  }
  return out;
}

inline std::size_t count_cycles_of_length(const cqa::Digraph& g, std::size_t len) {
  std::size_t count = 0;
  const std::size_t n = g.size();
  std::vector<bool> on(n, false);
  std::function<void(std::size_t, std::size_t, std::size_t)> dfs =
      [&](std::size_t s, std::size_t u, std::size_t l) {
        for (std::size_t v = 0; v < n; ++v) {
          if (!g.has_edge(u, v)) continue;
          if (v == s) count += l == len;
          else if (v > s && !on[v] && l < len) {
            on[v] = true;
            dfs(s, v, l + 1);
            on[v] = false;
          }
        }
      };
  for (std::size_t s = 0; s < n; ++s) {
    on[s] = true;
    dfs(s, s, 1);
    on[s] = false;
  }
  return count;
}

inline bool long_cycle(const cqa::KPartiteGraph& g) {
  auto ls = cycle_lengths(g.graph);
  return !ls.empty() && *ls.rbegin() >= 2 * g.k;
}

}  // namespace oracle
