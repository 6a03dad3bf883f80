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
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cqa/error.hpp"
#include "cqa/model.hpp"

namespace cqa {

struct BcqResult {
  bool satisfied = false;
  std::vector<Valuation> valuations;  // sorted, distinct
};

namespace eval_detail {

struct Search {
  const Query& q;
  std::map<std::string, std::vector<Fact>> facts;
  bool first_only = false;
  std::vector<Valuation> found;

  std::size_t bound_terms(const Atom& a, const Valuation& v) const {
    std::size_t n = 0;
    for (const auto& t : a.terms())
      if (!t.is_var() || v.count(t.name())) ++n;
    return n;
  }

  bool run(std::vector<bool>& used, Valuation& v, std::size_t depth) {
    if (depth == q.size()) {
      found.push_back(v);
      return first_only;
    }
    // Most-bound atom first; ties by fewer candidate facts.
    std::size_t best = q.size();
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (used[i]) continue;
      if (best == q.size()) {
        best = i;
        continue;
      }
      std::size_t bi = bound_terms(q[i], v), bb = bound_terms(q[best], v);
      std::size_t si = facts[q[i].name()].size(),
                  sb = facts[q[best].name()].size();
      if (bi > bb || (bi == bb && si < sb)) best = i;
    }
    used[best] = true;
    for (const auto& f : facts[q[best].name()]) {
      Valuation w = v;
      if (!match(q[best], f, w)) continue;
      if (run(used, w, depth + 1)) {
        used[best] = false;
        return true;
      }
    }
    used[best] = false;
    return false;
  }
};

}  // namespace eval_detail

// All valuations θ over vars(q) with θ(q) ⊆ db.
inline BcqResult eval_bcq(const Query& q, const Database& db,
                          bool first_only = false) {
  eval_detail::Search s{q, {}, first_only, {}};
  for (const auto& a : q.atoms()) s.facts[a.name()] = db.facts_of(a.name());
  std::vector<bool> used(q.size(), false);
  Valuation v;
  s.run(used, v, 0);
  BcqResult r;
  std::sort(s.found.begin(), s.found.end());
  s.found.erase(std::unique(s.found.begin(), s.found.end()), s.found.end());
  r.satisfied = !s.found.empty();
  r.valuations = std::move(s.found);
  return r;
}

inline bool satisfies(const Query& q, const Database& db) {
  return eval_bcq(q, db, true).satisfied;
}

inline constexpr std::uint64_t kDefaultRepairCap = std::uint64_t{1} << 20;

// Number of repairs, saturating at cap + 1.
inline std::uint64_t count_repairs(const Database& db,
                                   std::uint64_t cap = kDefaultRepairCap) {
  std::uint64_t n = 1;
  for (const auto& b : blocks(db)) {
    n *= b.facts.size();
    if (n > cap) return cap + 1;
  }
  return n;
}

// Calls fn on every repair (one fact per block) until fn returns false.
// Throws CapExceeded if the number of repairs exceeds cap.
inline void for_each_repair(const Database& db,
                            const std::function<bool(const Database&)>& fn,
                            std::uint64_t cap = kDefaultRepairCap) {
  if (count_repairs(db, cap) > cap)
    throw CapExceeded("oracle infeasible: more than " + std::to_string(cap) +
                      " repairs");
  auto bs = blocks(db);
  std::vector<std::size_t> pick(bs.size(), 0);
  while (true) {
    Database r = db.filter([](const Fact&) { return false; });
    for (std::size_t i = 0; i < bs.size(); ++i) r.add(bs[i].facts[pick[i]]);
    if (!fn(r)) return;
    std::size_t i = 0;
    while (i < bs.size() && ++pick[i] == bs[i].facts.size()) pick[i++] = 0;
    if (i == bs.size()) return;
  }
}

inline std::vector<Database> enumerate_repairs(
    const Database& db, std::uint64_t cap = kDefaultRepairCap) {
  std::vector<Database> out;
  for_each_repair(
      db,
      [&](const Database& r) {
        out.push_back(r);
        return true;
      },
      cap);
  return out;
}

}  // namespace cqa
