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
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqa/attack.hpp"
#include "cqa/eval.hpp"
#include "cqa/fd.hpp"
#include "cqa/model.hpp"

namespace cqa {

struct InternalFd {
  VarSet z;
  std::string w;
  SequentialProof proof;
};

// Z -> w with Z ⊆ vars(F) for some atom F, w ∉ Z, and a sequential proof
// whose atoms attack no variable of Z ∪ {w}.
inline std::vector<InternalFd> internal_fds(const Query& q) {
  std::vector<VarSet> attacked;
  for (std::size_t i = 0; i < q.size(); ++i)
    attacked.push_back(attacked_variables(i, q));
  std::vector<std::string> all_vars = q.var_list();
  std::set<std::pair<VarSet, std::string>> seen;
  std::vector<InternalFd> out;
  for (const auto& f : q.atoms()) {
    std::vector<std::string> fv = f.var_list();
    for (std::size_t mask = 0; mask < (std::size_t{1} << fv.size()); ++mask) {
      VarSet z;
      for (std::size_t b = 0; b < fv.size(); ++b)
        if (mask >> b & 1) z.insert(fv[b]);
      for (const auto& w : all_vars) {
        if (z.count(w) || seen.count({z, w})) continue;
        std::vector<std::string> allowed;
        for (std::size_t i = 0; i < q.size(); ++i) {
          bool clean = !attacked[i].count(w);
          for (const auto& x : z) clean = clean && !attacked[i].count(x);
          if (clean) allowed.push_back(q[i].name());
        }
        auto proof = sequential_proof(q, z, w, allowed);
        if (!proof) continue;
        seen.insert({z, w});
        out.push_back({z, w, std::move(*proof)});
      }
    }
  }
  return out;
}

inline bool is_saturated(const Query& q) {
  FdSet c = fds_of(catoms(q));
  for (const auto& fd : internal_fds(q))
    if (!entails(c, {fd.z, {fd.w}})) return false;
  return true;
}

struct SaturationStep {
  Atom atom;          // N@c(Z|w)
  VarSet z;
  std::string w;
  std::string host;   // relation name of F with Z ⊆ vars(F)
  Query before;       // query the FD is internal to
};

struct SaturationResult {
  Query query;
  std::vector<SaturationStep> added;
};

inline std::string fresh_name(const Query& q, const std::string& prefix,
                              std::size_t& counter,
                              const std::set<std::string>& reserved = {}) {
  while (true) {
    std::string n = prefix + std::to_string(counter++);
    if (!q.find(n) && !reserved.count(n)) return n;
  }
}

// N@c(Z|w); Z in order of first occurrence in the host atom. An empty Z gets
// the constant key 0 so that the key stays non-empty.
inline Atom saturation_atom(const std::string& name, const Atom& host,
                            const VarSet& z, const std::string& w) {
  std::vector<Term> terms;
  for (const auto& v : host.var_list())
    if (z.count(v)) terms.push_back(Term::var(v));
  if (terms.empty()) terms.push_back(Term::constant(Constant::number(0)));
  std::size_t k = terms.size();
  terms.push_back(Term::var(w));
  return Atom(RelationSchema{name, k + 1, k, Mode::c}, std::move(terms));
}

// reserved: further names the fresh relations must avoid.
inline SaturationResult saturate(const Query& q,
                                 const std::set<std::string>& reserved = {}) {
  SaturationResult r{q, {}};
  std::size_t counter = 1;
  while (true) {
    FdSet c = fds_of(catoms(r.query));
    bool added = false;
    for (const auto& fd : internal_fds(r.query)) {
      if (entails(c, {fd.z, {fd.w}})) continue;
      const Atom* host = nullptr;
      for (const auto& a : r.query.atoms())
        if (!host && is_subset(fd.z, a.vars())) host = &a;
      std::string name = fresh_name(r.query, "N_sat_", counter, reserved);
      Atom n = saturation_atom(name, *host, fd.z, fd.w);
      SaturationStep step{n, fd.z, fd.w, host->name(), r.query};
      r.query.add(n);
      r.added.push_back(std::move(step));
      added = true;
      break;
    }
    if (!added) return r;
  }
}

enum class PurifyMode {
  single_pass,  // remove every F-block touched by any violating pair at once
  fixpoint      // repeat full passes until no violating pair is left
};

namespace saturation_detail {

inline std::vector<Constant> z_values(const Atom& n, const Valuation& b) {
  std::vector<Constant> out;
  for (const auto& t : n.key_terms())
    out.push_back(t.is_var() ? b.at(t.name()) : t.value());
  return out;
}

// Blocks of F holding β(F) for some violating pair β1, β2.
inline std::set<BlockKey> violating_blocks(const Query& q, const Database& db,
                                           const Atom& n, const Atom& host,
                                           const std::string& w) {
  auto embeddings = eval_bcq(q, db).valuations;
  std::map<std::vector<Constant>, std::vector<const Valuation*>> groups;
  for (const auto& b : embeddings) groups[z_values(n, b)].push_back(&b);
  std::set<BlockKey> out;
  for (const auto& [z, members] : groups) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (members[i]->at(w) == members[j]->at(w)) continue;
        out.insert(block_of(ground(*members[i], host)));
        out.insert(block_of(ground(*members[j], host)));
      }
    }
  }
  return out;
}

}  // namespace saturation_detail

// Removes F-blocks on which the internal FD Z -> w fails, then adds the
// consistent relation N = {N(β(Z)|β(w)) : β(q) ⊆ purified db}.
inline Database purify(const Database& db, const Query& q, const Atom& n,
                       const std::string& w, const std::string& host_name,
                       PurifyMode mode = PurifyMode::single_pass) {
  if (db.schema(n.name()) || q.find(n.name()))
    throw Error("fresh relation " + n.name() + " collides with an existing one");
  const Atom* host = q.find(host_name);
  if (!host) throw Error("host atom " + host_name + " is not in the query");
  Database out = db;
  while (true) {
    auto bad = saturation_detail::violating_blocks(q, out, n, *host, w);
    if (bad.empty()) break;
    out = out.filter([&](const Fact& f) { return !bad.count(block_of(f)); });
    if (mode == PurifyMode::single_pass) break;
  }
  out.declare(n.relation());
  for (const auto& b : eval_bcq(q, out).valuations) {
    auto vals = saturation_detail::z_values(n, b);
    vals.push_back(b.at(w));
    out.add(Fact(n.name(), std::move(vals), n.relation().key_len));
  }
  return out;
}

inline Database purify(const Database& db, const SaturationStep& step,
                       PurifyMode mode = PurifyMode::single_pass) {
  return purify(db, step.before, step.atom, step.w, step.host, mode);
}

}  // namespace cqa
