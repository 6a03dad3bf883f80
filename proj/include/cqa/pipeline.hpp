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
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqa/eval.hpp"
#include "cqa/garbage.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/model.hpp"
#include "cqa/plan.hpp"
#include "cqa/saturation.hpp"
#include "cqa/text.hpp"

namespace cqa {

// Exhaustive repair check: true iff every repair satisfies q.
inline bool certain_answer_oracle(const Query& q, const Database& db,
                                  std::uint64_t cap = kDefaultRepairCap) {
  std::set<std::string> rels;
  for (const auto& a : q.atoms()) rels.insert(a.name());
  Database rel = db.filter([&](const Fact& f) { return rels.count(f.relation()); });
  bool all = true;
  for_each_repair(
      rel,
      [&](const Database& r) {
        all = satisfies(q, r);
        return all;
      },
      cap);
  return all;
}

// The facts of db over q's relations, with exactly q's schemas declared.
inline Database restrict_to_query(const Database& db, const Query& q) {
  Database out;
  out.declare_query(q);
  for (const auto& a : q.atoms())
    for (const auto& f : db.facts_of(a.name())) out.add(f);
  return out;
}

struct Reduction {
  ReductionSpec spec;
  Database db;
  std::size_t identifiers = 0;
};

// Replaces the C-facts of a garbage-free db by T and N_1..N_k. Each strong
// component of the C-hook graph is named by the least key(F0) tuple among
// its embeddings.
inline Reduction reduce_once(const Query& q, const MCycle& c, const Database& db,
                             std::size_t depth,
                             ConstantOrder order = ConstantOrder::ascending,
                             const std::set<std::string>& reserved = {}) {
  Reduction out;
  out.spec = reduction_spec(q, c, depth, reserved);
  const ReductionSpec& s = out.spec;
  CHookGraph h = chook_graph(q, c, db);
  auto comps = strong_components(h.graph);
  const Atom& f0 = q[c.atoms[0]];

  auto id_of = [&](const Valuation& theta) {
    std::vector<Constant> id;
    for (const auto& v : s.key_vars) id.push_back(theta.at(v));
    if (s.constant_id()) id.push_back(Constant::number(0));
    return id;
  };
  std::map<std::size_t, std::vector<Constant>> cid;
  for (const auto& theta : h.embeddings) {
    std::size_t comp = comps.of[h.index.at(ground(theta, f0))];
    auto id = id_of(theta);
    auto it = cid.find(comp);
    if (it == cid.end())
      cid.emplace(comp, std::move(id));
    else if (tuple_less(id, it->second, order))
      it->second = std::move(id);
  }
  out.identifiers = cid.size();

  out.db = restrict_to_query(db, s.query.without(s.t.name()));
  out.db.declare(s.t.relation());
  for (const auto& n : s.n) out.db.declare(n.relation());
  for (const auto& theta : h.embeddings) {
    const auto& id = cid.at(comps.of[h.index.at(ground(theta, f0))]);
    std::vector<Constant> tv = id;
    for (const auto& v : s.w) tv.push_back(theta.at(v));
    out.db.add(Fact(s.t.name(), std::move(tv), id.size()));
    for (std::size_t i = 0; i < s.n.size(); ++i) {
      Fact key = ground(theta, q[c.atoms[i]]);
      std::vector<Constant> nv = key.key();
      std::size_t kl = nv.size();
      nv.insert(nv.end(), id.begin(), id.end());
      out.db.add(Fact(s.n[i].name(), std::move(nv), kl));
    }
  }
  return out;
}

struct TraceStep {
  std::size_t depth = 0;
  std::string stage;
  std::string details;
};

struct DirectOptions {
  ConstantOrder order = ConstantOrder::ascending;
  PurifyMode purify = PurifyMode::single_pass;
  std::uint64_t oracle_cap = kDefaultRepairCap;
  bool trace_branches = false;  // also trace the recursive grounding calls
};

struct DirectResult {
  bool answer = false;
  bool used_oracle = false;
  std::vector<TraceStep> trace;

  std::string trace_text() const {
    std::string out;
    for (const auto& t : trace)
      out += std::string(2 * t.depth, ' ') + t.stage + ": " + t.details + "\n";
    return out;
  }
};

namespace pipeline_detail {

inline std::string names(const Query& q, const MCycle& c) {
  std::string out;
  for (const auto& n : cycle_names(q, c)) out += (out.empty() ? "" : " -> ") + n;
  return out;
}

struct Direct {
  const DirectOptions& opts;
  DirectResult& res;
  std::size_t reductions = 0;

  void log(std::size_t depth, bool on, std::string stage, std::string details) {
    if (on) res.trace.push_back({depth, std::move(stage), std::move(details)});
  }

  bool solve(const Query& q0, const Database& db0, std::size_t depth, bool on) {
    Database db = restrict_to_query(db0, q0);
    std::set<std::string> reserved;
    for (const auto& [n, s] : db.schemas()) reserved.insert(n);
    StagePlan p = plan_stage(q0, reductions, reserved);
    if (p.kind == StageKind::conp) {
      res.used_oracle = true;
      bool a = certain_answer_oracle(q0, db, opts.oracle_cap);
      log(depth, on, "oracle", std::string("coNP-complete query, answer ") +
                                   (a ? "true" : "false"));
      return a;
    }
    for (const auto& st : p.saturation.added) {
      std::size_t before = db.size();
      db = purify(db, st, opts.purify);
      log(depth, on, "saturate",
          to_string(st.atom) + " on " + st.host + ", " +
              std::to_string(db.size() - before) + " facts net");
    }
    const Query& q = p.query();
    switch (p.kind) {
      case StageKind::conp:
        break;
      case StageKind::base: {
        bool a = q.empty() || satisfies(q, db);
        log(depth, on, "base", to_string(q) + " -> " + (a ? "true" : "false"));
        return a;
      }
      case StageKind::ground: {
        const Atom& f = q[p.atom];
        Query rest = q.without(f.name());
        std::size_t tried = 0;
        for (const auto& b : blocks(db)) {
          if (b.key.relation != f.name()) continue;
          Valuation kv;
          if (!match_key(f, b.key.key, kv)) continue;
          ++tried;
          bool ok = true;
          for (const auto& fact : b.facts) {
            Valuation theta;
            if (!match(f, fact, theta) ||
                !solve(cqa::apply(theta, rest), db, depth + 1,
                       on && opts.trace_branches)) {
              ok = false;
              break;
            }
          }
          if (ok) {
            log(depth, on, "ground",
                f.name() + ", block " + to_string(b.key) + " certifies, " +
                    std::to_string(tried) + " blocks tried");
            return true;
          }
        }
        log(depth, on, "ground",
            f.name() + ", no certifying block among " + std::to_string(tried));
        return false;
      }
      case StageKind::reduce: {
        const MCycle& c = p.reduction.cycle;
        GarbageReport g = maximal_garbage_set(q, c, db);
        Database clean = remove_garbage(db, g);
        log(depth, on, "garbage",
            names(q, c) + ", " + std::to_string(db.size() - clean.size()) +
                " facts in " + std::to_string(g.garbage_blocks.size()) +
                " blocks");
        Reduction r = reduce_once(q, c, clean, reductions++, opts.order,
                                  reserved);
        log(depth, on, "reduce",
            to_string(r.spec.t) + ", " + std::to_string(r.identifiers) +
                " components");
        return solve(r.spec.query, r.db, depth, on);
      }
    }
    return false;
  }
};

}  // namespace pipeline_detail

// Certain answer of a Boolean query by the recursive pipeline, running every
// step directly on facts. coNP-complete (sub)queries fall back to the oracle.
inline DirectResult certain_answer_direct(const Query& q, const Database& db,
                                          const DirectOptions& opts = {}) {
  DirectResult res;
  pipeline_detail::Direct d{opts, res};
  res.answer = d.solve(q, db, 0, true);
  return res;
}

}  // namespace cqa
