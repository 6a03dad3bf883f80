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

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqa/cqa.hpp"
#include "oracles.hpp"

namespace {

using cqa::Constant;
using cqa::Database;
using cqa::Fact;
using cqa::MCycle;
using cqa::Query;

using FactEdges = std::set<std::pair<Fact, Fact>>;

Fact fact(const std::string& rel, std::vector<std::string> vals) {
  std::vector<Constant> cs;
  for (auto& v : vals) cs.push_back(Constant::text(v));
  return Fact(rel, std::move(cs), 1);
}

FactEdges edges_of(const cqa::CHookGraph& h) {
  FactEdges out;
  for (auto [u, v] : h.graph.edges()) out.insert({h.facts[u], h.facts[v]});
  return out;
}

std::set<std::pair<std::size_t, std::size_t>> edges_of(const cqa::Digraph& g) {
  auto e = g.edges();
  return {e.begin(), e.end()};
}

// Elementary cycles of exactly len facts over the given edges with no two
// distinct key-equal facts, as sorted fact lists.
std::multiset<std::vector<Fact>> oracle_cycles(const FactEdges& edges, std::size_t len) {
  std::set<Fact> facts;
  for (const auto& [a, b] : edges) facts.insert(a), facts.insert(b);
  std::vector<Fact> vs(facts.begin(), facts.end());
  std::multiset<std::vector<Fact>> out;
  std::vector<Fact> path;
  std::function<void()> dfs = [&] {
    for (const auto& w : vs) {
      if (!edges.count({path.back(), w})) continue;
      if (w == path.front()) {
        if (path.size() == len) {
          auto s = path;
          std::sort(s.begin(), s.end());
          out.insert(s);
        }
        continue;
      }
      if (path.size() == len || w < path.front()) continue;
      bool clash = false;
      for (const auto& p : path) clash = clash || oracle::key_equal(p, w);
      if (clash) continue;
      path.push_back(w);
      dfs();
      path.pop_back();
    }
  };
  for (const auto& s : vs) {
    path.assign(1, s);
    dfs();
  }
  return out;
}

std::multiset<std::vector<Fact>> sorted_sets(const std::vector<cqa::Embedding>& es) {
  std::multiset<std::vector<Fact>> out;
  for (const auto& e : es) {
    auto s = e.facts;
    std::sort(s.begin(), s.end());
    out.insert(s);
  }
  return out;
}

struct Tour {
  Query q = oracle::fixture_query("c3.cqa");
  Database db = oracle::fixture_db("dbgt.facts", q);
  MCycle c{{0, 1, 2}};
};

TEST(MGraphTest, Q1) {
  Query q = oracle::fixture_query("q1.cqa");
  auto m = cqa::m_graph(q);
  EXPECT_TRUE(m.graph.has_edge(*q.index_of("S"), *q.index_of("U")));
  EXPECT_EQ(edges_of(m.graph), oracle::m_edges(q));
}

TEST(MGraphTest, Triangle) {
  Query q = oracle::fixture_query("c3.cqa");
  auto m = cqa::m_graph(q);
  std::set<std::pair<std::size_t, std::size_t>> want{{0, 1}, {1, 2}, {2, 0}};
  EXPECT_EQ(edges_of(m.graph), want);
  EXPECT_EQ(oracle::m_edges(q), want);
}

TEST(MGraphTest, DisjointAtoms) {
  Query q = cqa::parse_query("q :- A(x|y), B(u|v).");
  EXPECT_EQ(cqa::m_graph(q).graph.edge_count(), 0u);
}

TEST(MGraphTest, RandomQueries) {
  cqa::GenOptions o;
  o.logspace_only = false;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    Query q = cqa::generate_instance(seed, o).query;
    EXPECT_EQ(edges_of(cqa::m_graph(q).graph), oracle::m_edges(q));
  }
}

TEST(FindMCycleTest, Triangle) {
  Query q = oracle::fixture_query("c3.cqa");
  auto c = cqa::find_mcycle(q);
  EXPECT_EQ(cqa::cycle_names(q, c), (std::vector<std::string>{"R", "S", "T"}));
}

TEST(FindMCycleTest, Q1InsideInitialComponent) {
  Query q = oracle::fixture_query("q1.cqa");
  auto c = cqa::find_mcycle(q);
  EXPECT_TRUE(cqa::is_mcycle(cqa::m_graph(q), c));
  for (const auto& n : cqa::cycle_names(q, c))
    EXPECT_TRUE(n == "R" || n == "S" || n == "U") << n;
}

TEST(FindMCycleTest, UnattackedAtomIsAnError) {
  Query q = cqa::parse_query("q :- A(x|y), B(y|z).");
  EXPECT_THROW(cqa::find_mcycle(q), cqa::Error);
}

TEST(FindMCycleTest, ShortestInsideInitialComponentOnCorpus) {
  int found = 0;
  for (std::uint64_t seed = 1; seed <= 600; ++seed) {
    auto inst = cqa::generate_instance(seed);
    auto plan = cqa::plan_stage(inst.query, 0);
    if (plan.kind != cqa::StageKind::reduce) continue;
    const Query& q = plan.query();
    const auto& c = plan.reduction.cycle;
    ASSERT_TRUE(cqa::is_mcycle(cqa::m_graph(q), c));
    auto init = cqa::initial_strong_components(cqa::attack_graph(q));
    bool inside = false;
    for (const auto& comp : init) {
      bool all = true;
      for (auto a : c.atoms) all = all && std::count(comp.begin(), comp.end(), a);
      inside = inside || all;
    }
    EXPECT_TRUE(inside) << cqa::to_string(q);
    // No shorter M-cycle exists among the atoms of any initial component.
    auto me = oracle::m_edges(q);
    for (const auto& comp : init) {
      cqa::Digraph sub(q.size());
      for (auto [u, v] : me)
        if (std::count(comp.begin(), comp.end(), u) && std::count(comp.begin(), comp.end(), v))
          sub.add_edge(u, v);
      for (std::size_t len = 2; len < c.size(); ++len)
        EXPECT_EQ(oracle::count_cycles_of_length(sub, len), 0u) << cqa::to_string(q);
    }
    ++found;
  }
  EXPECT_GT(found, 50);
}

TEST(CHookGraphTest, GuidedTour) {
  Tour t;
  auto h = cqa::chook_graph(t.q, t.c, t.db);
  EXPECT_EQ(h.facts.size(), 9u);
  FactEdges want = oracle::chook_edges(t.q, t.c, t.db);
  EXPECT_EQ(edges_of(h), want);
  EXPECT_EQ(want.size(), 15u);
  EXPECT_TRUE(want.count({fact("S", {"b1", "c1"}), fact("T", {"c1", "a2"})}));
  // That edge lies in no triangle.
  bool in_triangle = false;
  for (const auto& th : oracle::embeddings(t.q, t.db))
    in_triangle = in_triangle || (th.at("y") == Constant::text("b1") &&
                                  th.at("x") == Constant::text("a2"));
  EXPECT_FALSE(in_triangle);
}

TEST(CHookGraphTest, Q1Database) {
  Query q = oracle::fixture_query("q1.cqa");
  Database db = oracle::fixture_db("dbq1.facts", q);
  auto c = cqa::find_mcycle(q);
  auto h = cqa::chook_graph(q, c, db);
  EXPECT_EQ(edges_of(h), oracle::chook_edges(q, c, db));
  EXPECT_GT(h.graph.edge_count(), 0u);
}

TEST(CHookGraphTest, EmptyDatabase) {
  Tour t;
  Database db;
  db.declare_query(t.q);
  auto h = cqa::chook_graph(t.q, t.c, db);
  EXPECT_TRUE(h.facts.empty());
  EXPECT_EQ(h.graph.edge_count(), 0u);
}

TEST(CHookGraphTest, PlantedCyclesMatchDefinition) {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 150 && seed < 2000; ++seed) {
    auto inst = cqa::generate_instance(seed);
    if (inst.shape != cqa::QueryShape::planted_cycle) continue;
    const Query& q = inst.query;
    MCycle c;
    for (std::size_t i = 0; i < q.size() && q[i].relation().key_len == 1 &&
                            !q[i].consistent() && i < 3; ++i)
      c.atoms.push_back(i);
    while (c.size() >= 2 && !cqa::is_mcycle(cqa::m_graph(q), c)) c.atoms.pop_back();
    if (c.size() < 2) continue;
    auto h = cqa::chook_graph(q, c, inst.db);
    auto want = oracle::chook_edges(q, c, inst.db);
    ASSERT_EQ(edges_of(h), want) << "seed " << seed;
    // k-partite: edges advance the cycle position by one.
    for (auto [u, v] : h.graph.edges())
      EXPECT_EQ(h.position[v], (h.position[u] + 1) % c.size());
    for (auto len : oracle::cycle_lengths(h.graph)) EXPECT_EQ(len % c.size(), 0u);
    // Embeddings against an exhaustive cycle search.
    auto ones = cqa::one_embeddings(h);
    std::vector<cqa::Embedding> all = ones.relevant;
    all.insert(all.end(), ones.irrelevant.begin(), ones.irrelevant.end());
    EXPECT_EQ(sorted_sets(all), oracle_cycles(want, c.size()));
    std::set<std::vector<Fact>> thetas;
    for (const auto& th : oracle::embeddings(q, inst.db)) {
      std::vector<Fact> t;
      for (auto a : c.atoms) t.push_back(oracle::instantiate(th, q[a]));
      thetas.insert(t);
    }
    for (const auto& e : ones.relevant) EXPECT_TRUE(thetas.count(e.facts));
    for (const auto& e : ones.irrelevant) EXPECT_FALSE(thetas.count(e.facts));
    EXPECT_EQ(sorted_sets(cqa::n_embeddings(h, 2)), oracle_cycles(want, 2 * c.size()));
    ++checked;
  }
  EXPECT_EQ(checked, 150);
}

TEST(HookGraphTest, BlockInvariance) {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto inst = cqa::generate_instance(seed);
    auto h = cqa::hook_graph(inst.query, inst.db);
    for (std::size_t a = 0; a < h.facts.size(); ++a) {
      for (auto b : h.graph.out(a)) {
        for (std::size_t b2 = 0; b2 < h.facts.size(); ++b2) {
          if (!oracle::key_equal(h.facts[b], h.facts[b2])) continue;
          EXPECT_TRUE(h.graph.has_edge(a, b2)) << "seed " << seed;
        }
        for (auto c : h.graph.out(a)) {
          if (h.facts[b].relation() != h.facts[c].relation()) continue;
          EXPECT_TRUE(oracle::key_equal(h.facts[b], h.facts[c])) << "seed " << seed;
        }
      }
    }
  }
}

TEST(BlockQuotientTest, GuidedTourHasUniqueSixCycle) {
  Tour t;
  auto b = cqa::block_quotient(cqa::chook_graph(t.q, t.c, t.db));
  EXPECT_EQ(b.blocks.size(), 6u);
  EXPECT_EQ(b.graph.edge_count(), 9u);
  EXPECT_EQ(oracle::count_cycles_of_length(b.graph, 6), 1u);
  EXPECT_EQ(*oracle::cycle_lengths(b.graph).rbegin(), 6u);
  cqa::KPartiteGraph g{3, b.position, b.graph};
  EXPECT_TRUE(cqa::longcycle(g));
}

TEST(BlockQuotientTest, ConsistentDbIsIsomorphic) {
  Tour t;
  Database db = cqa::parse_database("R(a|b).\nS(b|c).\nT(c|a).\nR(d|e).\nS(e|f).\n", t.q);
  auto h = cqa::chook_graph(t.q, t.c, db);
  auto b = cqa::block_quotient(h);
  EXPECT_EQ(b.blocks.size(), h.facts.size());
  EXPECT_EQ(edges_of(b.graph), edges_of(h.graph));
}

TEST(BlockQuotientTest, RsHasTwoComponents) {
  Query q = oracle::fixture_query("rs.cqa");
  Database db = oracle::fixture_db("rs.facts", q);
  auto b = cqa::block_quotient(cqa::chook_graph(q, MCycle{{0, 1}}, db));
  cqa::DisjointSets ds(b.blocks.size());
  for (auto [u, v] : b.graph.edges()) ds.unite(u, v);
  std::set<std::size_t> roots;
  for (std::size_t v = 0; v < b.blocks.size(); ++v) roots.insert(ds.find(v));
  EXPECT_EQ(roots.size(), 2u);
  EXPECT_EQ(cqa::strong_components(b.graph).members.size(), 2u);
}

TEST(EmbeddingTest, GuidedTourOneEmbeddings) {
  Tour t;
  auto h = cqa::chook_graph(t.q, t.c, t.db);
  auto ones = cqa::one_embeddings(h);
  EXPECT_EQ(ones.relevant.size(), oracle::embeddings(t.q, t.db).size());
  auto triangles = oracle_cycles(oracle::chook_edges(t.q, t.c, t.db), 3);
  EXPECT_EQ(ones.relevant.size() + ones.irrelevant.size(), triangles.size());
}

TEST(EmbeddingTest, RsHasFourRelevant) {
  Query q = oracle::fixture_query("rs.cqa");
  Database db = oracle::fixture_db("rs.facts", q);
  auto ones = cqa::one_embeddings(q, MCycle{{0, 1}}, db);
  EXPECT_EQ(ones.relevant.size(), 4u);
  EXPECT_TRUE(ones.irrelevant.empty());
}

TEST(EmbeddingTest, NoQueryEmbedding) {
  Tour t;
  Database db = cqa::parse_database("R(a|b).\nS(b|c).\nT(c|d).\n", t.q);
  auto ones = cqa::one_embeddings(t.q, t.c, db);
  EXPECT_TRUE(ones.relevant.empty());
}

TEST(EmbeddingTest, GuidedTourTwoEmbedding) {
  Tour t;
  auto twos = cqa::n_embeddings(t.q, t.c, t.db, 2);
  ASSERT_EQ(twos.size(), 1u);
  std::vector<Fact> outer{fact("R", {"a1", "b1"}), fact("S", {"b1", "c1"}),
                          fact("T", {"c1", "a2"}), fact("R", {"a2", "b2"}),
                          fact("S", {"b2", "c2"}), fact("T", {"c2", "a1"})};
  EXPECT_EQ(twos[0].facts, outer);
  EXPECT_EQ(twos[0].n, 2u);
  // All length-6 cycles, including the ones with key-equal facts.
  auto h = cqa::chook_graph(t.q, t.c, t.db);
  EXPECT_GT(oracle::count_cycles_of_length(h.graph, 6), 1u);
}

TEST(EmbeddingTest, MultiplicityBeyondBudget) {
  Tour t;
  EXPECT_TRUE(cqa::n_embeddings(t.q, t.c, t.db, 3).empty());
}

}  // namespace
