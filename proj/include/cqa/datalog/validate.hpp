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
#include <set>
#include <string>
#include <vector>

#include "cqa/datalog/ir.hpp"
#include "cqa/datalog/text.hpp"
#include "cqa/graph.hpp"

namespace cqa::datalog {

// Variables bound by positive literals, closed under equality with bound
// terms.
inline std::set<std::string> bound_variables(const Rule& r) {
  std::set<std::string> bound;
  for (const auto& l : r.body)
    if (l.kind == LiteralKind::positive)
      for (const auto& v : variables(l.atom)) bound.insert(v);
  bool changed = true;
  auto is_bound = [&](const Term& t) {
    return !t.is_var() || bound.count(t.name());
  };
  while (changed) {
    changed = false;
    for (const auto& l : r.body) {
      if (l.kind != LiteralKind::equal) continue;
      if (is_bound(l.lhs) && l.rhs.is_var() && bound.insert(l.rhs.name()).second)
        changed = true;
      if (is_bound(l.rhs) && l.lhs.is_var() && bound.insert(l.lhs.name()).second)
        changed = true;
    }
  }
  return bound;
}

// Empty if the rule is range-restricted, else a description of the problem.
inline std::string range_restriction_error(const Rule& r) {
  auto bound = bound_variables(r);
  auto check = [&](const Term& t) {
    return !t.is_var() || bound.count(t.name()) > 0;
  };
  for (const auto& t : r.head.args)
    if (!check(t)) return "head variable " + t.name() + " is unbound";
  for (const auto& l : r.body) {
    if (l.kind == LiteralKind::positive) continue;
    if (l.is_atom()) {
      for (const auto& t : l.atom.args)
        if (!check(t)) return "variable " + t.name() + " only occurs negated";
    } else if (!check(l.lhs) || !check(l.rhs)) {
      return "comparison " + to_string(l) + " has an unbound side";
    }
  }
  if (r.min_from && *r.min_from >= r.head.args.size())
    return "min group is empty";
  return "";
}

// Groups rules into strata: one per strong component of the predicate
// dependency graph, in topological order. Throws if some negative or min
// dependency lies on a cycle.
inline std::vector<Stratum> stratify(const std::vector<Rule>& rules) {
  std::map<std::string, std::size_t> id;
  std::vector<std::string> names;
  for (const auto& r : rules)
    if (id.emplace(r.head.predicate, names.size()).second)
      names.push_back(r.head.predicate);
  Digraph g(names.size());
  struct Dep {
    std::size_t from, to;
    bool strict;
  };
  std::vector<Dep> deps;
  for (const auto& r : rules) {
    std::size_t h = id.at(r.head.predicate);
    for (const auto& l : r.body) {
      if (!l.is_atom()) continue;
      auto it = id.find(l.atom.predicate);
      if (it == id.end()) continue;
      bool strict = l.kind == LiteralKind::negative || r.min_from.has_value();
      g.add_edge(it->second, h);
      deps.push_back({it->second, h, strict});
    }
  }
  auto comps = strong_components(g);
  for (const auto& d : deps)
    if (d.strict && comps.of[d.from] == comps.of[d.to])
      throw Error("program is not stratifiable: " + names[d.to] +
                  " depends negatively or through min on " + names[d.from] +
                  " within a recursive component");
  // Topological order of the condensation (Kahn, smallest id first).
  const std::size_t n = comps.members.size();
  Digraph cg(n);
  for (auto [u, v] : g.edges())
    if (comps.of[u] != comps.of[v]) cg.add_edge(comps.of[u], comps.of[v]);
  std::vector<std::size_t> indeg(n, 0);
  for (auto [u, v] : cg.edges()) ++indeg[v];
  std::set<std::pair<std::size_t, std::size_t>> ready;  // (first rule, comp)
  std::vector<std::size_t> first_rule(n, rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    auto c = comps.of[id.at(rules[i].head.predicate)];
    first_rule[c] = std::min(first_rule[c], i);
  }
  for (std::size_t c = 0; c < n; ++c)
    if (!indeg[c]) ready.insert({first_rule[c], c});
  std::vector<std::size_t> rank(n);
  std::size_t next = 0;
  while (!ready.empty()) {
    auto [fr, c] = *ready.begin();
    ready.erase(ready.begin());
    rank[c] = next++;
    for (auto v : cg.out(c))
      if (--indeg[v] == 0) ready.insert({first_rule[v], v});
  }
  std::vector<Stratum> out(n);
  for (const auto& r : rules)
    out[rank[comps.of[id.at(r.head.predicate)]]].rules.push_back(r);
  return out;
}

namespace validate_detail {

// Is there a variable bijection mapping rule a onto rule b (body order
// ignored)?
inline bool equivalent(const Rule& a, const Rule& b) {
  if (a.head.predicate != b.head.predicate ||
      a.head.args.size() != b.head.args.size() ||
      a.body.size() != b.body.size() || a.min_from != b.min_from)
    return false;
  std::map<std::string, std::string> fwd, bwd;
  auto unify = [&](const Term& x, const Term& y,
                   std::vector<std::string>& trail) {
    if (x.is_var() != y.is_var()) return false;
    if (!x.is_var()) return x.value() == y.value();
    auto f = fwd.find(x.name());
    auto r = bwd.find(y.name());
    if (f != fwd.end() || r != bwd.end())
      return f != fwd.end() && r != bwd.end() && f->second == y.name();
    fwd[x.name()] = y.name();
    bwd[y.name()] = x.name();
    trail.push_back(x.name());
    return true;
  };
  auto undo = [&](std::vector<std::string>& trail) {
    for (const auto& v : trail) {
      bwd.erase(fwd[v]);
      fwd.erase(v);
    }
    trail.clear();
  };
  auto unify_lit = [&](const Literal& x, const Literal& y,
                       std::vector<std::string>& trail) {
    if (x.kind != y.kind) return false;
    if (x.is_atom()) {
      if (x.atom.predicate != y.atom.predicate ||
          x.atom.args.size() != y.atom.args.size())
        return false;
      for (std::size_t i = 0; i < x.atom.args.size(); ++i)
        if (!unify(x.atom.args[i], y.atom.args[i], trail)) return false;
      return true;
    }
    if (unify(x.lhs, y.lhs, trail) && unify(x.rhs, y.rhs, trail)) return true;
    undo(trail);
    // (dis)equality is symmetric
    return unify(x.lhs, y.rhs, trail) && unify(x.rhs, y.lhs, trail);
  };
  std::vector<std::string> head_trail;
  for (std::size_t i = 0; i < a.head.args.size(); ++i)
    if (!unify(a.head.args[i], b.head.args[i], head_trail)) return false;
  std::vector<bool> used(b.body.size(), false);
  std::function<bool(std::size_t)> match = [&](std::size_t i) {
    if (i == a.body.size()) return true;
    for (std::size_t j = 0; j < b.body.size(); ++j) {
      if (used[j]) continue;
      std::vector<std::string> trail;
      if (unify_lit(a.body[i], b.body[j], trail)) {
        used[j] = true;
        if (match(i + 1)) return true;
        used[j] = false;
      }
      undo(trail);
    }
    return false;
  };
  return match(0);
}

}  // namespace validate_detail

struct ValidationReport {
  bool stratified = true;
  bool linear = true;
  bool symmetric = true;
  bool range_restricted = true;
  std::vector<std::string> problems;

  bool ok() const {
    return stratified && linear && symmetric && range_restricted;
  }
};

// The symmetric version of a rule whose body literal i is the (positive)
// same-stratum IDB literal: swap the head with that literal.
inline Rule symmetric_rule(const Rule& r, std::size_t i) {
  Rule s = r;
  std::swap(s.head, s.body[i].atom);
  return s;
}

inline ValidationReport validate(const Program& p) {
  ValidationReport rep;
  auto stratum = p.stratum_of();
  for (std::size_t i = 0; i < p.strata.size(); ++i) {
    for (const auto& r : p.strata[i].rules) {
      std::string rule_text = to_string(r);
      if (stratum.at(r.head.predicate) != i) {
        rep.stratified = false;
        rep.problems.push_back(r.head.predicate +
                               " is defined in more than one stratum");
      }
      if (auto e = range_restriction_error(r); !e.empty()) {
        rep.range_restricted = false;
        rep.problems.push_back(rule_text + " " + e);
      }
      std::vector<std::size_t> same;
      for (std::size_t j = 0; j < r.body.size(); ++j) {
        const auto& l = r.body[j];
        if (!l.is_atom()) continue;
        auto it = stratum.find(l.atom.predicate);
        if (it == stratum.end()) continue;
        bool strict = l.kind == LiteralKind::negative || r.min_from;
        if (it->second > i || (strict && it->second == i)) {
          rep.stratified = false;
          rep.problems.push_back(rule_text + " depends on " +
                                 l.atom.predicate + " of a later stratum");
        }
        if (it->second == i && l.kind == LiteralKind::positive)
          same.push_back(j);
      }
      if (same.size() > 1) {
        rep.linear = false;
        rep.problems.push_back(rule_text + " is not linear");
      }
      if (same.size() == 1) {
        Rule s = symmetric_rule(r, same.front());
        bool found = false;
        for (const auto& o : p.strata[i].rules)
          if (validate_detail::equivalent(s, o)) found = true;
        if (!found) {
          rep.symmetric = false;
          rep.problems.push_back(rule_text + " has no symmetric rule");
        }
      }
    }
  }
  if (!rep.linear) rep.symmetric = false;
  return rep;
}

}  // namespace cqa::datalog
