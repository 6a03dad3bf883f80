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

// Stratified Datalog with negation, (dis)equality built-ins and
// min-aggregation in rule heads.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cqa/constant.hpp"
#include "cqa/error.hpp"

namespace cqa::datalog {

class Term {
 public:
  static Term var(std::string name) {
    Term t;
    t.var_ = true;
    t.name_ = std::move(name);
    return t;
  }
  static Term constant(Constant c) {
    Term t;
    t.value_ = std::move(c);
    return t;
  }

  bool is_var() const { return var_; }
  const std::string& name() const { return name_; }
  const Constant& value() const { return value_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.var_ != b.var_) return false;
    return a.var_ ? a.name_ == b.name_ : a.value_ == b.value_;
  }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.var_ != b.var_) return a.var_;
    return a.var_ ? a.name_ < b.name_ : a.value_ < b.value_;
  }

 private:
  bool var_ = false;
  std::string name_;
  Constant value_ = Constant::number(0);
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

enum class LiteralKind { positive, negative, equal, not_equal };

struct Literal {
  LiteralKind kind = LiteralKind::positive;
  Atom atom;                                      // positive / negative
  Term lhs = Term::var(""), rhs = Term::var("");  // equal / not_equal

  static Literal pos(Atom a) { return {LiteralKind::positive, std::move(a)}; }
  static Literal neg(Atom a) { return {LiteralKind::negative, std::move(a)}; }
  static Literal eq(Term l, Term r) {
    return {LiteralKind::equal, {}, std::move(l), std::move(r)};
  }
  static Literal neq(Term l, Term r) {
    return {LiteralKind::not_equal, {}, std::move(l), std::move(r)};
  }

  bool is_atom() const {
    return kind == LiteralKind::positive || kind == LiteralKind::negative;
  }

  friend bool operator==(const Literal& a, const Literal& b) {
    if (a.kind != b.kind) return false;
    if (a.is_atom()) return a.atom == b.atom;
    return a.lhs == b.lhs && a.rhs == b.rhs;
  }
};

// head :- body. With min_from = m, head arguments m.. form the min group:
// per assignment of arguments 0..m-1, only the least tuple is kept.
struct Rule {
  Atom head;
  std::vector<Literal> body;
  std::optional<std::size_t> min_from;

  bool is_fact() const { return body.empty(); }
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct Stratum {
  std::vector<Rule> rules;
  friend bool operator==(const Stratum&, const Stratum&) = default;
};

struct Program {
  std::vector<std::pair<std::string, std::string>> manifest;
  std::map<std::string, std::size_t> edb;  // declared EDB predicates
  std::vector<Stratum> strata;
  std::string goal;  // 0-ary predicate, empty if none

  std::vector<const Rule*> rules() const {
    std::vector<const Rule*> out;
    for (const auto& s : strata)
      for (const auto& r : s.rules) out.push_back(&r);
    return out;
  }
  std::size_t rule_count() const {
    std::size_t n = 0;
    for (const auto& s : strata) n += s.rules.size();
    return n;
  }
  std::set<std::string> idb() const {
    std::set<std::string> out;
    for (const auto* r : rules()) out.insert(r->head.predicate);
    return out;
  }
  // Stratum index of every IDB predicate (first defining stratum).
  std::map<std::string, std::size_t> stratum_of() const {
    std::map<std::string, std::size_t> out;
    for (std::size_t i = 0; i < strata.size(); ++i)
      for (const auto& r : strata[i].rules) out.emplace(r.head.predicate, i);
    return out;
  }
  std::optional<std::string> manifest_value(const std::string& key) const {
    for (const auto& [k, v] : manifest)
      if (k == key) return v;
    return std::nullopt;
  }

  friend bool operator==(const Program&, const Program&) = default;
};

// Builders used by the code generators.
inline Term var(std::string name) { return Term::var(std::move(name)); }
inline Term cst(Constant c) { return Term::constant(std::move(c)); }
inline Atom atom(std::string pred, std::vector<Term> args = {}) {
  return {std::move(pred), std::move(args)};
}

inline std::vector<std::string> variables(const Atom& a) {
  std::vector<std::string> out;
  for (const auto& t : a.args)
    if (t.is_var()) out.push_back(t.name());
  return out;
}

}  // namespace cqa::datalog
