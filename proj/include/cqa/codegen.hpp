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

// Datalog emission for garbage removal, M-cycle reduction and the composed
// pipeline.
//
// Naming: query relation and variable names may not contain "__". Renamed
// copies of a variable x are x__<tag>, parameters are x__p, and predicates
// of pipeline stage s are prefixed S<s>__. Every predicate of a stage starts
// with the parameter columns fixed by the enclosing grounding steps.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqa/datalog/ir.hpp"
#include "cqa/datalog/validate.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/model.hpp"
#include "cqa/plan.hpp"
#include "cqa/text.hpp"

namespace cqa {

struct EmitOptions {
  // eq_R / diseq_R predicates defined from R-facts; otherwise the = and !=
  // built-ins wherever a single key variable allows it.
  bool faithful = true;
};

namespace codegen_detail {

namespace dl = cqa::datalog;

inline void check_names(const Query& q) {
  for (const auto& a : q.atoms()) {
    if (a.name().find("__") != std::string::npos)
      throw Error("relation name " + a.name() + " contains the reserved \"__\"");
    for (const auto& v : a.var_list())
      if (v.find("__") != std::string::npos)
        throw Error("variable name " + v + " contains the reserved \"__\"");
  }
}

inline std::string param_var(const std::string& id) { return id + "__p"; }

// Predicate names in use; fresh() appends "_" until unused.
struct Namer {
  std::set<std::string> used;

  std::string fresh(std::string base) {
    while (used.count(base)) base += "_";
    used.insert(base);
    return base;
  }
};

// Where a query's relations live inside the program being emitted.
struct Scope {
  std::string prefix;
  std::vector<std::string> params;               // parameter ids
  std::map<std::string, std::string> predicate;  // relation -> predicate

  const std::string& pred(const std::string& rel) const {
    auto it = predicate.find(rel);
    if (it == predicate.end()) throw Error("no predicate for relation " + rel);
    return it->second;
  }
  std::vector<dl::Term> param_terms() const {
    std::vector<dl::Term> out;
    for (const auto& p : params) out.push_back(dl::var(param_var(p)));
    return out;
  }
};

using Renamer = std::function<std::string(const std::string&)>;

inline Renamer tagged(const std::string& tag) {
  if (tag.empty()) return [](const std::string& v) { return v; };
  return [tag](const std::string& v) { return v + "__" + tag; };
}

inline dl::Term term(const Term& t, const Renamer& rn) {
  if (t.is_var()) return dl::var(rn(t.name()));
  if (is_param(t.value())) return dl::var(param_var(param_name(t.value())));
  return dl::cst(t.value());
}

template <typename Range>
std::vector<dl::Term> terms(const Range& ts, const Renamer& rn) {
  std::vector<dl::Term> out;
  for (const auto& t : ts) out.push_back(term(t, rn));
  return out;
}

inline std::vector<dl::Term> cat(std::vector<dl::Term> a,
                                 const std::vector<dl::Term>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::vector<dl::Term> vars(const std::vector<std::string>& vs,
                                  const Renamer& rn) {
  std::vector<dl::Term> out;
  for (const auto& v : vs) out.push_back(dl::var(rn(v)));
  return out;
}

inline std::vector<dl::Term> columns(const std::string& prefix, std::size_t n) {
  std::vector<dl::Term> out;
  for (std::size_t i = 1; i <= n; ++i)
    out.push_back(dl::var(prefix + std::to_string(i)));
  return out;
}

inline std::vector<std::string> key_var_list(const Atom& a) {
  std::vector<std::string> out;
  VarSet seen;
  for (const auto& t : a.key_terms())
    if (t.is_var() && seen.insert(t.name()).second) out.push_back(t.name());
  return out;
}

inline dl::Atom query_atom(const Scope& sc, const Atom& a, const Renamer& rn,
                           const std::string* pred = nullptr) {
  return dl::atom(pred ? *pred : sc.pred(a.name()),
                  cat(sc.param_terms(), terms(a.terms(), rn)));
}

inline void append(std::vector<dl::Literal>& body,
                   const std::vector<dl::Literal>& more) {
  body.insert(body.end(), more.begin(), more.end());
}

inline dl::Rule rule(dl::Atom head, std::vector<dl::Literal> body,
                     std::optional<std::size_t> min_from = {}) {
  return dl::Rule{std::move(head), std::move(body), min_from};
}

// Rules for one M-cycle C of q inside a scope.
class CycleEmitter {
 public:
  CycleEmitter(const Query& q, const MCycle& c, const Scope& sc, Namer& nm,
               const EmitOptions& opts)
      : q_(q), c_(c), sc_(sc), opts_(opts) {
    const std::string& p = sc.prefix;
    for (std::size_t i = 0; i < k(); ++i) {
      const std::string& r = f(i).name();
      good_.push_back(nm.fresh(p + "good_" + r));
      del_.push_back(nm.fresh(p + "del_" + r));
      eq_.push_back(nm.fresh(p + "eq_" + r));
      diseq_.push_back(nm.fresh(p + "diseq_" + r));
      keep_.push_back(nm.fresh(p + "keep_" + r));
    }
    rel1_ = nm.fresh(p + "Rel1Emb");
    any1_ = nm.fresh(p + "Any1Emb");
    irr1_ = nm.fresh(p + "Irr1Emb");
    e_ = nm.fresh(p + "E");
    neq_ = nm.fresh(p + "Neq");
    ucon_ = nm.fresh(p + "UCon");
    inlong_ = nm.fresh(p + "InLongCycle");
    for (std::size_t n = 2; n + 3 <= 2 * k(); ++n)
      nemb_.push_back(nm.fresh(p + "Emb" + std::to_string(n)));
    keep1_ = nm.fresh(p + "Keep1Emb");
    link_ = nm.fresh(p + "Link");
    trans_ = nm.fresh(p + "Trans");
    idby_ = nm.fresh(p + "IdentifiedBy");
  }

  const std::vector<std::string>& del_predicates() const { return del_; }

  std::vector<dl::Rule> garbage_rules() const {
    std::vector<dl::Rule> out;
    const auto P = sc_.param_terms();
    const auto none = tagged("");

    // Rel1Emb(P, V) :- q
    {
      std::vector<dl::Literal> body;
      for (const auto& a : q_.atoms()) body.push_back(dl::Literal::pos(query_atom(sc_, a, none)));
      out.push_back(rule(dl::atom(rel1_, cat(P, V(none))), std::move(body)));
    }
    for (std::size_t i = 0; i < k(); ++i) {
      const std::size_t n = f(i).terms().size(), kl = f(i).relation().key_len;
      out.push_back(rule(dl::atom(good_[i], cat(P, terms(f(i).terms(), none))),
                         {rel1(none)}));
      auto c = columns("c", n);
      std::vector<dl::Term> ck(c.begin(), c.begin() + kl);
      out.push_back(rule(dl::atom(del_[i], cat(P, ck)),
                         {dl::Literal::pos(dl::atom(raw(i), cat(P, c))),
                          dl::Literal::neg(dl::atom(good_[i], cat(P, c)))}));
    }
    emit_eq_diseq(out);

    // Deleting one fact of a relevant embedding deletes all of its facts.
    for (std::size_t i = 0; i < k(); ++i)
      for (std::size_t j = 0; j < k(); ++j)
        if (i != j)
          out.push_back(rule(del(i, none), {rel1(none), dl::Literal::pos(del(j, none))}));

    // Irrelevant 1-embeddings.
    {
      std::vector<dl::Literal> body;
      for (std::size_t i = 0; i < k(); ++i) body.push_back(rel1(tagged(tag(i))));
      for (std::size_t i = 0; i < k(); ++i)
        append(body, eq_lits(i, tag(i), tag((i + k() - 1) % k())));
      auto per_atom = V_per_atom();
      out.push_back(rule(dl::atom(any1_, cat(P, per_atom)), std::move(body)));
      auto kv = KV_per_atom();
      out.push_back(rule(dl::atom(irr1_, cat(P, kv)),
                         {dl::Literal::pos(dl::atom(any1_, cat(P, per_atom))),
                          dl::Literal::neg(dl::atom(rel1_, cat(P, per_atom)))}));
      for (std::size_t i = 0; i < k(); ++i)
        out.push_back(rule(del(i, tagged(tag(i))),
                           {dl::Literal::pos(dl::atom(irr1_, cat(P, kv)))}));
    }

    // Vertices of the intersection graph are relevant 1-embeddings, named
    // by their key variables.
    const auto a = tagged("a"), b = tagged("b");
    for (std::size_t i = 0; i < k(); ++i)
      for (std::size_t j = 0; j < k(); ++j) {
        if (i == j) continue;
        auto ne = neq_lits(j, "a", "b");
        if (!ne) continue;
        std::vector<dl::Literal> body{rel1(a), rel1(b)};
        append(body, eq_lits(i, "a", "b"));
        append(body, *ne);
        out.push_back(rule(dl::atom(e_, cat(P, cat(KV(a), KV(b)))), std::move(body)));
      }
    for (std::size_t j = 0; j < k(); ++j) {
      auto ne = neq_lits(j, "a", "b");
      if (!ne) continue;
      std::vector<dl::Literal> body{rel1(a), rel1(b)};
      append(body, *ne);
      out.push_back(rule(dl::atom(neq_, cat(P, cat(KV(a), KV(b)))), std::move(body)));
    }

    emit_ucon(out);
    emit_long_cycle(out);
    emit_n_embeddings(out);
    return out;
  }

  // keep, Keep1Emb, Link, Trans, IdentifiedBy, T and N_1..N_k.
  std::vector<dl::Rule> reduction_rules(const ReductionSpec& s,
                                        const std::string& t_pred,
                                        const std::vector<std::string>& n_pred) const {
    std::vector<dl::Rule> out;
    const auto P = sc_.param_terms();
    const auto none = tagged("");
    for (std::size_t i = 0; i < k(); ++i) {
      const std::size_t n = f(i).terms().size(), kl = f(i).relation().key_len;
      auto c = columns("c", n);
      std::vector<dl::Term> ck(c.begin(), c.begin() + kl);
      out.push_back(rule(dl::atom(keep_[i], cat(P, c)),
                         {dl::Literal::pos(dl::atom(raw(i), cat(P, c))),
                          dl::Literal::neg(dl::atom(del_[i], cat(P, ck)))}));
    }
    {
      std::map<std::string, std::size_t> pos;
      for (std::size_t i = 0; i < k(); ++i) pos[f(i).name()] = i;
      std::vector<dl::Literal> body;
      for (const auto& a : q_.atoms()) {
        auto it = pos.find(a.name());
        body.push_back(dl::Literal::pos(
            it == pos.end() ? query_atom(sc_, a, none)
                            : query_atom(sc_, a, none, &keep_[it->second])));
      }
      out.push_back(rule(dl::atom(keep1_, cat(P, V(none))), std::move(body)));
    }
    auto keep1 = [&](const Renamer& rn) {
      return dl::Literal::pos(dl::atom(keep1_, cat(P, V(rn))));
    };
    const auto W = vars(s.w, none);
    auto t_atom = [&](std::vector<dl::Term> id) {
      return dl::atom(t_pred, cat(P, cat(std::move(id), W)));
    };
    std::vector<dl::Term> id;
    if (s.constant_id()) {
      id = {dl::cst(Constant::number(0))};
      out.push_back(rule(t_atom(id), {keep1(none)}));
    } else {
      const auto a = tagged("a"), b = tagged("b"), c = tagged("c");
      const auto X = s.key_vars;
      for (std::size_t i = 0; i < k(); ++i) {
        std::vector<dl::Literal> body{keep1(a), keep1(b)};
        append(body, eq_lits(i, "a", "b"));
        out.push_back(rule(dl::atom(link_, cat(P, cat(vars(X, a), vars(X, b)))),
                           std::move(body)));
      }
      auto pair = [&](const std::string& pred, const Renamer& x, const Renamer& y) {
        return dl::atom(pred, cat(P, cat(vars(X, x), vars(X, y))));
      };
      out.push_back(rule(pair(trans_, a, b), {dl::Literal::pos(pair(link_, a, b))}));
      out.push_back(rule(pair(trans_, a, b), {dl::Literal::pos(pair(trans_, a, c)),
                                              dl::Literal::pos(pair(link_, c, b))}));
      out.push_back(rule(pair(trans_, a, c), {dl::Literal::pos(pair(trans_, a, b)),
                                              dl::Literal::pos(pair(link_, c, b))}));
      out.push_back(rule(pair(idby_, none, b), {dl::Literal::pos(pair(trans_, none, b))},
                         P.size() + X.size()));
      id = vars(X, b);
      out.push_back(rule(t_atom(id), {keep1(none),
                                      dl::Literal::pos(pair(idby_, none, b))}));
    }
    for (std::size_t i = 1; i <= k(); ++i) {
      auto head = cat(P, cat(terms(f(i - 1).key_terms(), none), id));
      out.push_back(rule(dl::atom(n_pred[i - 1], std::move(head)),
                         {dl::Literal::pos(t_atom(id))}));
    }
    return out;
  }

 private:
  std::size_t k() const { return c_.size(); }
  const Atom& f(std::size_t i) const { return q_[c_.atoms[i]]; }
  const std::string& raw(std::size_t i) const { return sc_.pred(f(i).name()); }
  static std::string tag(std::size_t i) { return std::to_string(i); }

  // Columns of Rel1Emb: var_list(F_0) ... var_list(F_{k-1}).
  std::vector<dl::Term> V(const Renamer& rn) const {
    std::vector<dl::Term> out;
    for (std::size_t i = 0; i < k(); ++i) out = cat(std::move(out), vars(f(i).var_list(), rn));
    return out;
  }
  std::vector<dl::Term> V_per_atom() const {
    std::vector<dl::Term> out;
    for (std::size_t i = 0; i < k(); ++i)
      out = cat(std::move(out), vars(f(i).var_list(), tagged(tag(i))));
    return out;
  }
  // Vertex columns: key variables of F_0 ... F_{k-1}.
  std::vector<dl::Term> KV(const Renamer& rn) const {
    std::vector<dl::Term> out;
    for (std::size_t i = 0; i < k(); ++i) out = cat(std::move(out), vars(key_var_list(f(i)), rn));
    return out;
  }
  std::vector<dl::Term> KV_per_atom() const {
    std::vector<dl::Term> out;
    for (std::size_t i = 0; i < k(); ++i)
      out = cat(std::move(out), vars(key_var_list(f(i)), tagged(tag(i))));
    return out;
  }
  dl::Literal rel1(const Renamer& rn) const {
    return dl::Literal::pos(dl::atom(rel1_, cat(sc_.param_terms(), V(rn))));
  }
  dl::Atom del(std::size_t i, const Renamer& rn) const {
    return dl::atom(del_[i], cat(sc_.param_terms(), terms(f(i).key_terms(), rn)));
  }
  dl::Atom key_pair(const std::string& pred, std::size_t i, const std::string& x,
                    const std::string& y) const {
    return dl::atom(pred, cat(sc_.param_terms(),
                              cat(terms(f(i).key_terms(), tagged(x)),
                                  terms(f(i).key_terms(), tagged(y)))));
  }

  // key(F_i) of copy x equals key(F_i) of copy y.
  std::vector<dl::Literal> eq_lits(std::size_t i, const std::string& x,
                                   const std::string& y) const {
    if (opts_.faithful) return {dl::Literal::pos(key_pair(eq_[i], i, x, y))};
    std::vector<dl::Literal> out;
    for (const auto& v : key_var_list(f(i)))
      out.push_back(dl::Literal::eq(dl::var(tagged(x)(v)), dl::var(tagged(y)(v))));
    return out;
  }
  // key(F_i) of copy x differs from that of copy y; nullopt if it never can.
  std::optional<std::vector<dl::Literal>> neq_lits(std::size_t i, const std::string& x,
                                                   const std::string& y) const {
    auto kv = key_var_list(f(i));
    if (kv.empty()) return std::nullopt;
    if (!opts_.faithful && kv.size() == 1)
      return std::vector<dl::Literal>{
          dl::Literal::neq(dl::var(tagged(x)(kv[0])), dl::var(tagged(y)(kv[0])))};
    return std::vector<dl::Literal>{dl::Literal::pos(key_pair(diseq_[i], i, x, y))};
  }

  void emit_eq_diseq(std::vector<dl::Rule>& out) const {
    const auto P = sc_.param_terms();
    for (std::size_t i = 0; i < k(); ++i) {
      const std::size_t n = f(i).terms().size(), kl = f(i).relation().key_len;
      auto c = columns("c", n), d = columns("d", n);
      std::vector<dl::Term> ck(c.begin(), c.begin() + kl), dk(d.begin(), d.begin() + kl);
      auto fact_c = dl::Literal::pos(dl::atom(raw(i), cat(P, c)));
      auto fact_d = dl::Literal::pos(dl::atom(raw(i), cat(P, d)));
      if (opts_.faithful) {
        out.push_back(rule(dl::atom(eq_[i], cat(P, cat(ck, ck))), {fact_c}));
        out.push_back(rule(dl::atom(diseq_[i], cat(P, cat(ck, dk))),
                           {fact_c, fact_d,
                            dl::Literal::neg(dl::atom(eq_[i], cat(P, cat(ck, dk))))}));
      } else if (key_var_list(f(i)).size() > 1) {
        for (std::size_t j = 0; j < kl; ++j)
          out.push_back(rule(dl::atom(diseq_[i], cat(P, cat(ck, dk))),
                             {fact_c, fact_d, dl::Literal::neq(ck[j], dk[j])}));
      }
    }
  }

  // UCon(A, X, B_1..B_{2k-2}): X is reachable from A through vertices that
  // are distinct from and non-adjacent to every B_m.
  void emit_ucon(std::vector<dl::Rule>& out) const {
    const auto P = sc_.param_terms();
    std::vector<dl::Term> bs;
    for (std::size_t m = 1; m + 2 <= 2 * k(); ++m)
      bs = cat(std::move(bs), KV(tagged("b" + std::to_string(m))));
    auto away = [&](const std::string& x) {
      std::vector<dl::Literal> out;
      for (std::size_t m = 1; m + 2 <= 2 * k(); ++m) {
        auto vx = KV(tagged(x)), vb = KV(tagged("b" + std::to_string(m)));
        out.push_back(dl::Literal::pos(dl::atom(neq_, cat(P, cat(vx, vb)))));
        out.push_back(dl::Literal::neg(dl::atom(e_, cat(P, cat(vx, vb)))));
      }
      return out;
    };
    auto ucon = [&](const std::string& x, const std::string& y) {
      return dl::atom(ucon_, cat(P, cat(cat(KV(tagged(x)), KV(tagged(y))), bs)));
    };
    auto edge = [&](const std::string& x, const std::string& y) {
      return dl::Literal::pos(dl::atom(e_, cat(P, cat(KV(tagged(x)), KV(tagged(y))))));
    };
    out.push_back(rule(ucon("a", "a"), away("a")));
    for (auto [from, to] : {std::pair{"x", "y"}, std::pair{"y", "x"}}) {
      std::vector<dl::Literal> body{dl::Literal::pos(ucon("a", from)), edge("x", "y")};
      append(body, away("x"));
      append(body, away("y"));
      out.push_back(rule(ucon("a", to), std::move(body)));
    }
  }

  // C_1 lies on an induced cycle of length >= 2k: an induced path
  // C_1 .. C_2k closed either by the edge C_1 C_2k or by a path from a
  // neighbour of C_1 to a neighbour of C_2k avoiding C_2 .. C_{2k-1}.
  void emit_long_cycle(std::vector<dl::Rule>& out) const {
    const auto P = sc_.param_terms();
    const std::size_t len = 2 * k();
    auto v = [&](std::size_t i) { return KV(tagged(std::to_string(i))); };
    auto e = [&](const std::vector<dl::Term>& x, const std::vector<dl::Term>& y) {
      return dl::atom(e_, cat(P, cat(x, y)));
    };
    std::vector<dl::Literal> body;
    for (std::size_t i = 1; i < len; ++i) body.push_back(dl::Literal::pos(e(v(i), v(i + 1))));
    for (std::size_t i = 1; i <= len; ++i)
      for (std::size_t j = i + 1; j <= len; ++j) {
        if (i == 1 && j == len) continue;
        if (j >= i + 2) body.push_back(dl::Literal::neg(e(v(i), v(j))));
        body.push_back(dl::Literal::pos(dl::atom(neq_, cat(P, cat(v(i), v(j))))));
      }
    auto head = dl::atom(inlong_, cat(P, v(1)));
    auto closed = body;
    closed.push_back(dl::Literal::pos(e(v(1), v(len))));
    out.push_back(rule(head, std::move(closed)));
    auto d = KV(tagged("d")), d2 = KV(tagged("e"));
    std::vector<dl::Term> args = cat(d, d2);
    for (std::size_t i = 2; i < len; ++i) args = cat(std::move(args), v(i));
    body.push_back(dl::Literal::pos(e(v(1), d)));
    body.push_back(dl::Literal::pos(e(d2, v(len))));
    body.push_back(dl::Literal::pos(dl::atom(ucon_, cat(P, args))));
    out.push_back(rule(head, std::move(body)));
    for (std::size_t i = 0; i < k(); ++i)
      out.push_back(rule(del(i, tagged("")),
                         {dl::Literal::pos(dl::atom(inlong_, cat(P, KV(tagged("")))))}));
  }

  // n-embeddings for 2 <= n <= 2k-3: nk relevant 1-embeddings chained by
  // key equality, pairwise key-distinct per atom of C.
  void emit_n_embeddings(std::vector<dl::Rule>& out) const {
    const auto P = sc_.param_terms();
    for (std::size_t n = 2; n + 3 <= 2 * k(); ++n) {
      const std::size_t len = n * k();
      std::vector<dl::Literal> body;
      std::vector<dl::Term> head;
      bool possible = true;
      for (std::size_t j = 0; j < len; ++j) {
        std::size_t i = j % k();
        body.push_back(rel1(tagged(tag(j))));
        append(body, eq_lits(i, tag(j), tag((j + len - 1) % len)));
        head = cat(std::move(head), vars(key_var_list(f(i)), tagged(tag(j))));
        for (std::size_t j2 = j + k(); j2 < len; j2 += k()) {
          auto ne = neq_lits(i, tag(j), tag(j2));
          if (!ne) possible = false;
          else append(body, *ne);
        }
      }
      if (!possible) continue;
      const std::string& pred = nemb_[n - 2];
      out.push_back(rule(dl::atom(pred, cat(P, head)), std::move(body)));
      for (std::size_t j = 0; j < len; ++j)
        out.push_back(rule(del(j % k(), tagged(tag(j))),
                           {dl::Literal::pos(dl::atom(pred, cat(P, head)))}));
    }
  }

  const Query& q_;
  MCycle c_;
  const Scope& sc_;
  EmitOptions opts_;
  std::vector<std::string> good_, del_, eq_, diseq_, keep_, nemb_;
  std::string rel1_, any1_, irr1_, e_, neq_, ucon_, inlong_, keep1_, link_,
      trans_, idby_;
};

inline Scope standalone_scope(const Query& q, Namer& nm) {
  Scope sc;
  for (const auto& a : q.atoms()) {
    sc.predicate[a.name()] = a.name();
    nm.used.insert(a.name());
  }
  return sc;
}

inline datalog::Program finish(std::vector<dl::Rule> rules,
                               std::map<std::string, std::size_t> edb,
                               std::vector<std::pair<std::string, std::string>> manifest,
                               std::string goal = "") {
  datalog::Program p;
  p.manifest = std::move(manifest);
  p.edb = std::move(edb);
  p.strata = dl::stratify(rules);
  p.goal = std::move(goal);
  return p;
}

inline std::map<std::string, std::size_t> edb_of(const Query& q) {
  std::map<std::string, std::size_t> out;
  for (const auto& a : q.atoms()) out[a.name()] = a.terms().size();
  return out;
}

inline std::string cycle_text(const Query& q, const MCycle& c) {
  std::string out;
  for (const auto& n : cycle_names(q, c)) out += (out.empty() ? "" : " ") + n;
  return out;
}

}  // namespace codegen_detail

// Program whose del_R relations hold the keys of the blocks in the maximal
// garbage set of C (manifest key "del.<R>" names each predicate).
inline datalog::Program emit_garbage_program(const Query& q, const MCycle& c,
                                             const EmitOptions& opts = {}) {
  using namespace codegen_detail;
  check_names(q);
  Namer nm;
  Scope sc = standalone_scope(q, nm);
  CycleEmitter em(q, c, sc, nm, opts);
  std::vector<std::pair<std::string, std::string>> manifest{
      {"kind", "garbage"},
      {"query", to_string(q)},
      {"cycle", cycle_text(q, c)},
      {"mode", opts.faithful ? "faithful" : "builtin"}};
  for (std::size_t i = 0; i < c.size(); ++i)
    manifest.push_back({"del." + q[c.atoms[i]].name(), em.del_predicates()[i]});
  return finish(em.garbage_rules(), edb_of(q), std::move(manifest));
}

// Garbage removal followed by the reduction to T and N_1..N_k (manifest keys
// "T" and "N.<i>").
inline datalog::Program emit_reduction_program(const Query& q, const MCycle& c,
                                               std::size_t depth = 0,
                                               const EmitOptions& opts = {}) {
  using namespace codegen_detail;
  check_names(q);
  ReductionSpec s = reduction_spec(q, c, depth);
  Namer nm;
  Scope sc = standalone_scope(q, nm);
  std::string t_pred = nm.fresh(s.t.name());
  std::vector<std::string> n_pred;
  for (const auto& n : s.n) n_pred.push_back(nm.fresh(n.name()));
  CycleEmitter em(q, c, sc, nm, opts);
  auto rules = em.garbage_rules();
  auto more = em.reduction_rules(s, t_pred, n_pred);
  rules.insert(rules.end(), more.begin(), more.end());
  std::vector<std::pair<std::string, std::string>> manifest{
      {"kind", "reduction"},
      {"query", to_string(q)},
      {"cycle", cycle_text(q, c)},
      {"mode", opts.faithful ? "faithful" : "builtin"},
      {"reduced", to_string(s.query)},
      {"T", t_pred}};
  for (std::size_t i = 0; i < n_pred.size(); ++i)
    manifest.push_back({"N." + std::to_string(i + 1), n_pred[i]});
  return finish(std::move(rules), edb_of(q), std::move(manifest));
}

// The whole pipeline for a query whose attack graph has no strong cycle, as
// one program over q's relations with the 0-ary goal predicate.
inline datalog::Program compose_pipeline(const Query& q, const EmitOptions& opts = {}) {
  using namespace codegen_detail;
  check_names(q);
  Namer nm;
  Scope sc = standalone_scope(q, nm);
  std::vector<dl::Rule> rules;
  std::vector<std::pair<std::string, std::string>> manifest{
      {"kind", "pipeline"},
      {"query", to_string(q)},
      {"mode", opts.faithful ? "faithful" : "builtin"}};

  const std::string goal = nm.fresh("Goal");
  sc.prefix = "S0__";
  std::string dom = nm.fresh("S0__Dom"), ans = nm.fresh("S0__Ans");
  rules.push_back(rule(dl::atom(dom), {}));
  rules.push_back(rule(dl::atom(goal), {dl::Literal::pos(dl::atom(ans))}));

  Query cur = q;
  for (std::size_t s = 0;; ++s) {
    sc.prefix = "S" + std::to_string(s) + "__";
    const std::string next_prefix = "S" + std::to_string(s + 1) + "__";
    StagePlan plan = plan_stage(cur, s);
    const auto P = sc.param_terms();
    const auto none = tagged("");
    if (plan.kind == StageKind::conp)
      throw Error("no pipeline: the attack graph of " + to_string(cur) +
                  " has a strong cycle");

    std::string desc;
    for (const auto& st : plan.saturation.added) {
      const Atom& host = *st.before.find(st.host);
      std::string bad = nm.fresh(sc.prefix + "BadKey_" + st.host);
      std::string pure = nm.fresh(sc.prefix + st.host + "_pure");
      std::string npred = nm.fresh(sc.prefix + st.atom.name());
      // Two embeddings agreeing on Z but not on w.
      std::vector<dl::Literal> body;
      Renamer one = tagged("1");
      Renamer two = [&](const std::string& v) {
        return v + (st.z.count(v) ? "__1" : "__2");
      };
      for (const auto& a : st.before.atoms()) body.push_back(dl::Literal::pos(query_atom(sc, a, one)));
      for (const auto& a : st.before.atoms()) body.push_back(dl::Literal::pos(query_atom(sc, a, two)));
      body.push_back(dl::Literal::neq(dl::var(one(st.w)), dl::var(two(st.w))));
      rules.push_back(rule(dl::atom(bad, cat(P, terms(host.key_terms(), one))), std::move(body)));
      auto c = columns("c", host.terms().size());
      std::vector<dl::Term> ck(c.begin(), c.begin() + host.relation().key_len);
      rules.push_back(rule(dl::atom(pure, cat(P, c)),
                           {dl::Literal::pos(dl::atom(sc.pred(st.host), cat(P, c))),
                            dl::Literal::neg(dl::atom(bad, cat(P, ck)))}));
      sc.predicate[st.host] = pure;
      std::vector<dl::Literal> nbody;
      for (const auto& a : st.before.atoms()) nbody.push_back(dl::Literal::pos(query_atom(sc, a, none)));
      rules.push_back(rule(dl::atom(npred, cat(P, terms(st.atom.terms(), none))), std::move(nbody)));
      sc.predicate[st.atom.name()] = npred;
      desc += "saturate " + to_string(st.atom) + "; ";
    }
    const Query& sq = plan.query();

    if (plan.kind == StageKind::base) {
      std::vector<dl::Literal> body{dl::Literal::pos(dl::atom(dom, P))};
      for (const auto& a : sq.atoms()) body.push_back(dl::Literal::pos(query_atom(sc, a, none)));
      rules.push_back(rule(dl::atom(ans, P), std::move(body)));
      manifest.push_back({"stage." + std::to_string(s), desc + "base " + to_string(sq)});
      manifest.push_back({"stages", std::to_string(s + 1)});
      break;
    }

    std::string dom2 = nm.fresh(next_prefix + "Dom"), ans2 = nm.fresh(next_prefix + "Ans");
    Scope next;
    next.prefix = next_prefix;
    next.params = sc.params;

    if (plan.kind == StageKind::ground) {
      const Atom& f = sq[plan.atom];
      // Fresh parameter ids for the variables of F.
      std::set<std::string> taken(sc.params.begin(), sc.params.end());
      std::map<std::string, std::string> id;
      Valuation theta;
      for (const auto& v : f.var_list()) {
        std::string p = v;
        while (taken.count(p)) p += "_";
        taken.insert(p);
        id[v] = p;
        next.params.push_back(p);
        theta[v] = param_constant(p);
      }
      Renamer as_param = [&](const std::string& v) { return param_var(id.at(v)); };
      const auto P2 = next.param_terms();
      const std::string& fp = sc.pred(f.name());
      rules.push_back(rule(dl::atom(dom2, P2),
                           {dl::Literal::pos(query_atom(sc, f, as_param))}));
      Query rest = cqa::apply(theta, sq.without(f.name()));
      for (const auto& a : rest.atoms()) {
        std::string lifted = nm.fresh(next_prefix + a.name());
        auto c = columns("c", a.terms().size());
        rules.push_back(rule(dl::atom(lifted, cat(P2, c)),
                             {dl::Literal::pos(dl::atom(dom2, P2)),
                              dl::Literal::pos(dl::atom(sc.pred(a.name()), cat(P, c)))}));
        next.predicate[a.name()] = lifted;
      }
      std::string ok = nm.fresh(sc.prefix + "FactOK"), bad = nm.fresh(sc.prefix + "BadBlock");
      auto full = terms(f.terms(), as_param);
      rules.push_back(rule(dl::atom(ok, cat(P, full)),
                           {dl::Literal::pos(dl::atom(fp, cat(P, full))),
                            dl::Literal::pos(dl::atom(ans2, P2))}));
      auto key = terms(f.key_terms(), as_param);
      auto vals = columns("c", f.value_terms().size());
      auto block_key = vars(key_var_list(f), as_param);
      rules.push_back(rule(dl::atom(bad, cat(P, block_key)),
                           {dl::Literal::pos(dl::atom(fp, cat(P, cat(key, vals)))),
                            dl::Literal::neg(dl::atom(ok, cat(P, cat(key, vals))))}));
      rules.push_back(rule(dl::atom(ans, P),
                           {dl::Literal::pos(dl::atom(fp, cat(P, cat(key, vals)))),
                            dl::Literal::neg(dl::atom(bad, cat(P, block_key)))}));
      manifest.push_back({"stage." + std::to_string(s), desc + "ground " + f.name()});
      cur = rest;
    } else {
      const ReductionSpec& red = plan.reduction;
      std::string t_pred = nm.fresh(sc.prefix + red.t.name());
      std::vector<std::string> n_pred;
      for (const auto& n : red.n) n_pred.push_back(nm.fresh(sc.prefix + n.name()));
      CycleEmitter em(sq, red.cycle, sc, nm, opts);
      for (auto& r : em.garbage_rules()) rules.push_back(std::move(r));
      for (auto& r : em.reduction_rules(red, t_pred, n_pred)) rules.push_back(std::move(r));
      next.predicate = sc.predicate;
      for (auto a : red.cycle.atoms) next.predicate.erase(sq[a].name());
      next.predicate[red.t.name()] = t_pred;
      for (std::size_t i = 0; i < red.n.size(); ++i) next.predicate[red.n[i].name()] = n_pred[i];
      rules.push_back(rule(dl::atom(dom2, P), {dl::Literal::pos(dl::atom(dom, P))}));
      rules.push_back(rule(dl::atom(ans, P), {dl::Literal::pos(dl::atom(ans2, P))}));
      manifest.push_back({"stage." + std::to_string(s),
                          desc + "reduce " + cycle_text(sq, red.cycle) + " to " +
                              to_string(red.t)});
      cur = red.query;
    }
    sc = std::move(next);
    dom = dom2;
    ans = ans2;
  }
  manifest.push_back({"goal", goal});
  return finish(std::move(rules), edb_of(q), std::move(manifest), goal);
}

}  // namespace cqa
