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

// One step of the logspace pipeline, shared by the direct evaluator and the
// Datalog composer so that both follow the same recursion.

#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "cqa/attack.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/model.hpp"
#include "cqa/saturation.hpp"

namespace cqa {

// Parameters are variables fixed by an enclosing grounding step. While a
// subquery is analysed they stand in as placeholder constants.
inline Constant param_constant(const std::string& var) {
  return Constant::text(std::string("\x01param:") + var);
}
inline bool is_param(const Constant& c) {
  return c.is_text() && c.as_text().rfind("\x01param:", 0) == 0;
}
inline std::string param_name(const Constant& c) {
  return c.as_text().substr(7);
}

// Reduction of q by the M-cycle C = F0 -> ... -> F(k-1):
//   q' = (q \ C) ∪ {T(u|vars(C))} ∪ {N_i@c(key(F_{i-1})|u) : 1 <= i <= k}.
struct ReductionSpec {
  MCycle cycle;
  std::vector<std::string> key_vars;  // distinct key variables of F0, in order
  std::vector<std::string> u;         // key variables of T, one per key_vars
  std::vector<std::string> w;         // vars(C), first-occurrence order
  Atom t;
  std::vector<Atom> n;                // n[i-1] = N_i
  Query query;

  // An F0 key without variables still gives T a one-column key.
  bool constant_id() const { return key_vars.empty(); }
};

namespace plan_detail {

inline std::string fresh(std::string base, const std::set<std::string>& taken) {
  while (taken.count(base)) base += "_";
  return base;
}

}  // namespace plan_detail

inline ReductionSpec reduction_spec(const Query& q, const MCycle& c,
                                    std::size_t depth,
                                    const std::set<std::string>& reserved = {}) {
  ReductionSpec r;
  r.cycle = c;
  std::set<std::string> rel_names(reserved.begin(), reserved.end());
  for (const auto& a : q.atoms()) rel_names.insert(a.name());
  VarSet qvars = q.vars();
  std::set<std::string> taken_vars(qvars.begin(), qvars.end());

  const Atom& f0 = q[c.atoms[0]];
  VarSet seen;
  for (const auto& t : f0.key_terms())
    if (t.is_var() && seen.insert(t.name()).second)
      r.key_vars.push_back(t.name());
  std::size_t ucount = r.key_vars.empty() ? 1 : r.key_vars.size();
  for (std::size_t i = 1; i <= ucount; ++i) {
    std::string u = plan_detail::fresh("u" + std::to_string(i), taken_vars);
    taken_vars.insert(u);
    r.u.push_back(u);
  }
  seen.clear();
  for (auto a : c.atoms)
    for (const auto& v : q[a].var_list())
      if (seen.insert(v).second) r.w.push_back(v);

  std::string d = std::to_string(depth);
  std::vector<Term> tterms;
  for (const auto& u : r.u) tterms.push_back(Term::var(u));
  for (const auto& v : r.w) tterms.push_back(Term::var(v));
  std::string tname = plan_detail::fresh("T_" + d, rel_names);
  rel_names.insert(tname);
  RelationSchema tschema{tname, tterms.size(), r.u.size(), Mode::i};
  r.t = Atom(std::move(tschema), std::move(tterms));

  for (std::size_t i = 1; i <= c.size(); ++i) {
    const Atom& prev = q[c.atoms[i - 1]];
    std::vector<Term> terms(prev.key_terms().begin(), prev.key_terms().end());
    std::size_t key_len = terms.size();
    for (const auto& u : r.u) terms.push_back(Term::var(u));
    std::string name =
        plan_detail::fresh("N_red_" + d + "_" + std::to_string(i), rel_names);
    rel_names.insert(name);
    RelationSchema nschema{name, terms.size(), key_len, Mode::c};
    r.n.push_back(Atom(std::move(nschema), std::move(terms)));
  }

  std::set<std::size_t> in_c(c.atoms.begin(), c.atoms.end());
  for (std::size_t i = 0; i < q.size(); ++i)
    if (!in_c.count(i)) r.query.add(q[i]);
  r.query.add(r.t);
  for (const auto& n : r.n) r.query.add(n);
  return r;
}

enum class StageKind {
  conp,    // the attack graph has a strong cycle
  base,    // no mode-i atom left: plain evaluation
  ground,  // some mode-i atom is unattacked
  reduce   // eliminate an M-cycle
};

inline const char* to_string(StageKind k) {
  switch (k) {
    case StageKind::conp: return "conp";
    case StageKind::base: return "base";
    case StageKind::ground: return "ground";
    case StageKind::reduce: return "reduce";
  }
  return "";
}

struct StagePlan {
  StageKind kind = StageKind::base;
  Query input;
  SaturationResult saturation;  // saturation.query is the working query
  std::size_t atom = 0;         // ground: index into saturation.query
  ReductionSpec reduction;      // reduce

  const Query& query() const { return saturation.query; }
};

// Unattacked mode-i atom to ground on: all-constant keys first, then by name.
inline std::size_t choose_ground_atom(const Query& q, const AttackGraph& g) {
  std::size_t best = q.size();
  auto rank = [&](std::size_t i) {
    return std::make_pair(q[i].key_vars().empty() ? 0 : 1, q[i].name());
  };
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i].consistent() || g.attacked(i)) continue;
    if (best == q.size() || rank(i) < rank(best)) best = i;
  }
  return best;
}

inline StagePlan plan_stage(const Query& q, std::size_t depth,
                            const std::set<std::string>& reserved = {}) {
  StagePlan p;
  p.input = q;
  if (classify_complexity(q) == ComplexityClass::CONP_COMPLETE) {
    p.kind = StageKind::conp;
    p.saturation = {q, {}};
    return p;
  }
  p.saturation = saturate(q, reserved);
  const Query& s = p.saturation.query;
  if (s.count_inconsistent() == 0) {
    p.kind = StageKind::base;
    return p;
  }
  AttackGraph g = attack_graph(s);
  std::size_t f = choose_ground_atom(s, g);
  if (f < s.size()) {
    p.kind = StageKind::ground;
    p.atom = f;
    return p;
  }
  p.kind = StageKind::reduce;
  p.reduction = reduction_spec(s, find_mcycle(s), depth, reserved);
  return p;
}

}  // namespace cqa
