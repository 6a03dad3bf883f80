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

#include <chrono>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqa/cqa.hpp"
#include "oracles.hpp"

namespace {

using cqa::BlockKey;
using cqa::Database;
using cqa::KPartiteGraph;
using cqa::MCycle;
using cqa::Query;

std::set<BlockKey> all_blocks(const Database& db) {
  std::set<BlockKey> out;
  for (const auto& b : cqa::blocks(db)) out.insert(b.key);
  return out;
}

KPartiteGraph kpartite(std::size_t k, std::vector<std::size_t> part,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  KPartiteGraph g;
  g.k = k;
  g.part = std::move(part);
  g.graph = cqa::Digraph(g.part.size());
  for (auto [u, v] : edges) g.graph.add_edge(u, v);
  return g;
}

// Vertices 0..n-1 with vertex i in part i mod k, edges i -> i+1 mod n.
KPartiteGraph ring(std::size_t k, std::size_t n) {
  std::vector<std::size_t> part;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    part.push_back(i % k);
    edges.push_back({i, (i + 1) % n});
  }
  return kpartite(k, part, edges);
}

TEST(GarbageTest, GuidedTourIsAllGarbage) {
  Query q = oracle::fixture_query("c3.cqa");
  Database db = oracle::fixture_db("dbgt.facts", q);
  auto start = std::chrono::steady_clock::now();
  auto g = cqa::maximal_garbage_set(q, cqa::find_mcycle(q), db);
  EXPECT_EQ(g.garbage_blocks, all_blocks(db));
  EXPECT_EQ(g.garbage_blocks.size(), 6u);
  std::size_t covered = 0;
  for (const auto& f : db.facts()) covered += g.contains(f);
  EXPECT_EQ(covered, 9u);
  EXPECT_TRUE(g.surviving_components.empty());
  EXPECT_TRUE(cqa::remove_garbage(db, g).empty());
  EXPECT_EQ(oracle::repair_count(db), 8u);
  EXPECT_FALSE(oracle::certain(q, db));
  EXPECT_EQ(cqa::garbage_oracle(q, {"R", "S", "T"}, db), g.garbage_blocks);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
}

TEST(GarbageTest, RsHasNoGarbage) {
  Query q = oracle::fixture_query("rs.cqa");
  Database db = oracle::fixture_db("rs.facts", q);
  auto c = cqa::find_mcycle(q);
  auto g = cqa::maximal_garbage_set(q, c, db);
  EXPECT_TRUE(g.garbage_blocks.empty());
  EXPECT_TRUE(cqa::garbage_oracle(q, cqa::cycle_names(q, c), db).empty());
  EXPECT_EQ(g.surviving_components.size(), 2u);
  EXPECT_EQ(cqa::remove_garbage(db, g), db);
}

TEST(GarbageTest, IrrelevantOneEmbedding) {
  Query q = cqa::parse_query("q :- R(x|y,z), S(y|x,z).");
  // Two embeddings on z = 1 and z = 2; the crossed cycles match no embedding.
  Database db = cqa::parse_database("R(a|b,1).\nS(b|a,1).\nR(a|b,2).\nS(b|a,2).\n", q);
  auto c = cqa::find_mcycle(q);
  auto g = cqa::maximal_garbage_set(q, c, db);
  EXPECT_EQ(g.irrelevant, 2u);
  EXPECT_FALSE(oracle::certain(q, db));
  EXPECT_EQ(g.garbage_blocks, all_blocks(db));
  EXPECT_EQ(cqa::garbage_oracle(q, cqa::cycle_names(q, c), db), g.garbage_blocks);
}

TEST(GarbageTest, ZeroOutdegree) {
  Query q = cqa::parse_query("q :- R(x|y,z), S(y|x,z).");
  Database db = cqa::parse_database("R(a|b,1).\nS(b|a,1).\nR(c|d,1).\n", q);
  auto c = cqa::find_mcycle(q);
  auto g = cqa::maximal_garbage_set(q, c, db);
  EXPECT_EQ(g.zero_outdegree, 1u);
  EXPECT_EQ(g.garbage_blocks, cqa::garbage_oracle(q, cqa::cycle_names(q, c), db));
  EXPECT_EQ(g.garbage_blocks.size(), 1u);
}

TEST(GarbageOracleTest, BlockCap) {
  Query q = cqa::parse_query("q :- R(x|y,z), S(y|x,z).");
  std::string text;
  for (int i = 0; i < 7; ++i) {
    auto s = std::to_string(i);
    text += "R(a" + s + "|b" + s + ",1).\nS(b" + s + "|a" + s + ",1).\n";
  }
  Database db = cqa::parse_database(text, q);
  EXPECT_THROW(cqa::garbage_oracle(q, {"R", "S"}, db), cqa::CapExceeded);
}

TEST(LongCycleTest, SingleCycleIsShort) {
  for (std::size_t k : {2u, 3u, 4u}) {
    auto g = ring(k, k);
    EXPECT_FALSE(cqa::longcycle(g));
    EXPECT_FALSE(cqa::brute_longcycle(g));
    EXPECT_FALSE(oracle::long_cycle(g));
  }
}

KPartiteGraph guided_tour_quotient() {
  Query q = oracle::fixture_query("c3.cqa");
  auto h = cqa::chook_graph(q, cqa::find_mcycle(q), oracle::fixture_db("dbgt.facts", q));
  auto b = cqa::block_quotient(h);
  return kpartite(3, b.position, b.graph.edges());
}

// Two triangles joined into the 6-cycle a1 b1 c1 a2 b2 c2 by two more
// triangles (a2 b1 c1) and (a1 b2 c2).
KPartiteGraph two_triangles() {
  return kpartite(3, {0, 1, 2, 0, 1, 2},
                  {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0},
                   {2, 0}, {5, 3}, {3, 1}, {0, 4}});
}

TEST(LongCycleTest, GuidedTourQuotient) {
  auto g = guided_tour_quotient();
  EXPECT_EQ(g.size(), 6u);
  EXPECT_NO_THROW(cqa::check_instance(g));
  EXPECT_TRUE(cqa::longcycle(g));
  EXPECT_TRUE(cqa::brute_longcycle(g));
  EXPECT_TRUE(oracle::long_cycle(g));
}

TEST(LongCycleTest, JoinedCycles) {
  // Bidirected K_{2,2}: four 2-cycles and the 4-cycle 0 1 2 3.
  auto k2 = kpartite(2, {0, 1, 0, 1},
                     {{0, 1}, {1, 0}, {2, 3}, {3, 2}, {0, 3}, {3, 0}, {2, 1}, {1, 2}});
  auto k3 = two_triangles();
  for (const auto* g : {&k2, &k3}) {
    EXPECT_NO_THROW(cqa::check_instance(*g));
    EXPECT_TRUE(cqa::longcycle(*g));
    EXPECT_TRUE(cqa::brute_longcycle(*g));
    EXPECT_TRUE(oracle::long_cycle(*g));
  }
  // Two triangles sharing one vertex close no longer cycle.
  auto bow = kpartite(3, {0, 1, 2, 1, 2}, {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {3, 4}, {4, 0}});
  EXPECT_FALSE(cqa::longcycle(bow));
  EXPECT_FALSE(cqa::brute_longcycle(bow));
}

TEST(LongCycleTest, RejectsInvalidInstances) {
  EXPECT_THROW(cqa::longcycle(ring(3, 6)), cqa::Error);  // no k-cycle
  auto skip = kpartite(3, {0, 1, 2}, {{0, 2}, {2, 0}});
  EXPECT_THROW(cqa::check_instance(skip), cqa::Error);
  EXPECT_THROW(cqa::check_instance(ring(1, 1)), cqa::Error);
  EXPECT_THROW(cqa::brute_longcycle(ring(2, 16)), cqa::CapExceeded);
}

TEST(IntersectionGraphTest, SharedVertices) {
  auto one = cqa::kcycle_intersection_graph(ring(3, 3));
  ASSERT_EQ(one.cycles.size(), 1u);
  EXPECT_EQ(one.cycles[0], (std::vector<std::size_t>{0, 1, 2}));

  auto g = guided_tour_quotient();
  auto h = cqa::kcycle_intersection_graph(g);
  EXPECT_EQ(h.cycles.size(), 4u);
  EXPECT_EQ(h.cycles.size(), oracle::count_cycles_of_length(g.graph, 3));
  for (std::size_t a = 0; a < h.cycles.size(); ++a) {
    EXPECT_FALSE(h.adj[a][a]);
    for (std::size_t b = 0; b < h.cycles.size(); ++b) {
      if (a == b) continue;
      std::set<std::size_t> va(h.cycles[a].begin(), h.cycles[a].end());
      bool share = false;
      for (auto v : h.cycles[b]) share = share || va.count(v);
      EXPECT_EQ(h.adj[a][b], share);
    }
  }
}

TEST(LongCycleTest, RandomAgreesWithBruteForce) {
  auto start = std::chrono::steady_clock::now();
  int yes = 0;
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    std::size_t k = 2 + seed % 2;
    auto g = cqa::random_kpartite(seed, k, 12);
    ASSERT_LE(g.size(), 12u);
    ASSERT_NO_THROW(cqa::check_instance(g));
    bool want = oracle::long_cycle(g);
    EXPECT_EQ(cqa::brute_longcycle(g), want) << seed;
    EXPECT_EQ(cqa::longcycle(g), want) << seed;
    yes += want;
  }
  EXPECT_GT(yes, 50);
  EXPECT_LT(yes, 450);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::minutes(1));
}

// Reduce-stage instances from the corpus with their working query and
// purified database.
struct Stage {
  std::uint64_t seed;
  Query q;
  MCycle c;
  Database db;
};

std::vector<Stage> reduce_stages(std::size_t want) {
  std::vector<Stage> out;
  for (std::uint64_t seed = 1; out.size() < want && seed <= 20000; ++seed) {
    auto inst = cqa::generate_instance(seed);
    auto p = cqa::plan_stage(inst.query, 0);
    if (p.kind != cqa::StageKind::reduce) continue;
    Database db = cqa::restrict_to_query(inst.db, inst.query);
    for (const auto& st : p.saturation.added) db = cqa::purify(db, st);
    out.push_back({seed, p.query(), p.reduction.cycle, db});
  }
  return out;
}

TEST(GarbageTest, AgreesWithOracleOnCorpus) {
  int compared = 0, nonempty = 0;
  for (const auto& s : reduce_stages(300)) {
    auto g = cqa::maximal_garbage_set(s.q, s.c, s.db);
    try {
      auto want = cqa::garbage_oracle(s.q, cqa::cycle_names(s.q, s.c), s.db);
      EXPECT_EQ(g.garbage_blocks, want) << "seed " << s.seed;
      ++compared;
      nonempty += !want.empty();
    } catch (const cqa::CapExceeded&) {
    }
  }
  EXPECT_GT(compared, 100);
  EXPECT_GT(nonempty, 20);
}

TEST(GarbageTest, RemovalProperties) {
  int checked = 0;
  for (const auto& s : reduce_stages(200)) {
    auto g = cqa::maximal_garbage_set(s.q, s.c, s.db);
    Database clean = cqa::remove_garbage(s.db, g);
    EXPECT_TRUE(cqa::maximal_garbage_set(s.q, s.c, clean).garbage_blocks.empty())
        << "seed " << s.seed;
    // Surviving relevant cycles avoid garbage blocks.
    for (const auto& comp : g.surviving_components)
      for (const auto& cyc : comp.relevant)
        for (const auto& f : cyc) EXPECT_FALSE(g.contains(f));
    if (oracle::repair_count(s.db) <= 4096) {
      EXPECT_EQ(oracle::certain(s.q, s.db), oracle::certain(s.q, clean)) << "seed " << s.seed;
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

}  // namespace
