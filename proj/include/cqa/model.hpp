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
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cqa/constant.hpp"
#include "cqa/error.hpp"

namespace cqa {

using VarSet = std::set<std::string>;
using Valuation = std::map<std::string, Constant>;

enum class Mode { c, i };

struct RelationSchema {
  std::string name;
  std::size_t arity = 0;
  std::size_t key_len = 0;
  Mode mode = Mode::i;

  friend bool operator==(const RelationSchema&,
                         const RelationSchema&) = default;
};

inline void check_schema(const RelationSchema& s) {
  if (s.arity == 0) throw Error("relation " + s.name + ": arity must be >= 1");
  if (s.key_len < 1 || s.key_len > s.arity)
    throw Error("relation " + s.name + ": key length out of range");
}

class Term {
 public:
  static Term var(std::string name) {
    Term t;
    t.is_var_ = true;
    t.name_ = std::move(name);
    return t;
  }
  static Term constant(Constant c) {
    Term t;
    t.value_ = std::move(c);
    return t;
  }

  bool is_var() const { return is_var_; }
  const std::string& name() const { return name_; }
  const Constant& value() const { return value_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.is_var_ != b.is_var_) return false;
    return a.is_var_ ? a.name_ == b.name_ : a.value_ == b.value_;
  }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.is_var_ != b.is_var_) return a.is_var_ < b.is_var_;
    return a.is_var_ ? a.name_ < b.name_ : a.value_ < b.value_;
  }

 private:
  bool is_var_ = false;
  std::string name_;
  Constant value_;
};

class Atom {
 public:
  Atom() = default;
  Atom(RelationSchema relation, std::vector<Term> terms)
      : relation_(std::move(relation)), terms_(std::move(terms)) {
    check_schema(relation_);
    if (terms_.size() != relation_.arity)
      throw Error("atom " + relation_.name + ": term count does not match arity");
  }

  const RelationSchema& relation() const { return relation_; }
  const std::string& name() const { return relation_.name; }
  Mode mode() const { return relation_.mode; }
  bool consistent() const { return relation_.mode == Mode::c; }
  const std::vector<Term>& terms() const { return terms_; }
  std::span<const Term> key_terms() const {
    return std::span<const Term>(terms_).first(relation_.key_len);
  }
  std::span<const Term> value_terms() const {
    return std::span<const Term>(terms_).subspan(relation_.key_len);
  }

  VarSet vars() const {
    VarSet out;
    for (const auto& t : terms_)
      if (t.is_var()) out.insert(t.name());
    return out;
  }
  VarSet key_vars() const {
    VarSet out;
    for (const auto& t : key_terms())
      if (t.is_var()) out.insert(t.name());
    return out;
  }
  // Distinct variables in order of first occurrence.
  std::vector<std::string> var_list() const {
    std::vector<std::string> out;
    VarSet seen;
    for (const auto& t : terms_)
      if (t.is_var() && seen.insert(t.name()).second) out.push_back(t.name());
    return out;
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.relation_ == b.relation_ && a.terms_ == b.terms_;
  }

 private:
  RelationSchema relation_;
  std::vector<Term> terms_;
};

// A self-join-free Boolean conjunctive query. Atoms keep declaration order.
class Query {
 public:
  Query() = default;
  explicit Query(std::vector<Atom> atoms) {
    for (auto& a : atoms) add(std::move(a));
  }

  void add(Atom a) {
    if (find(a.name()))
      throw Error("self-join: relation " + a.name() + " occurs twice");
    atoms_.push_back(std::move(a));
  }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }

  const Atom* find(const std::string& name) const {
    for (const auto& a : atoms_)
      if (a.name() == name) return &a;
    return nullptr;
  }
  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < atoms_.size(); ++i)
      if (atoms_[i].name() == name) return i;
    return std::nullopt;
  }

  VarSet vars() const {
    VarSet out;
    for (const auto& a : atoms_) {
      auto v = a.vars();
      out.insert(v.begin(), v.end());
    }
    return out;
  }
  std::vector<std::string> var_list() const {
    std::vector<std::string> out;
    VarSet seen;
    for (const auto& a : atoms_)
      for (const auto& v : a.var_list())
        if (seen.insert(v).second) out.push_back(v);
    return out;
  }

  Query without(const std::string& name) const {
    Query out;
    for (const auto& a : atoms_)
      if (a.name() != name) out.atoms_.push_back(a);
    return out;
  }

  std::size_t count_inconsistent() const {
    std::size_t n = 0;
    for (const auto& a : atoms_) n += a.consistent() ? 0 : 1;
    return n;
  }

  friend bool operator==(const Query&, const Query&) = default;

 private:
  std::vector<Atom> atoms_;
};

class Fact {
 public:
  Fact() = default;
  Fact(std::string relation, std::vector<Constant> values, std::size_t key_len)
      : relation_(std::move(relation)),
        values_(std::move(values)),
        key_len_(key_len) {}

  const std::string& relation() const { return relation_; }
  const std::vector<Constant>& values() const { return values_; }
  std::size_t key_len() const { return key_len_; }
  std::vector<Constant> key() const {
    return std::vector<Constant>(values_.begin(), values_.begin() + key_len_);
  }
  bool key_equal(const Fact& o) const {
    if (relation_ != o.relation_ || key_len_ != o.key_len_) return false;
    for (std::size_t i = 0; i < key_len_; ++i)
      if (!(values_[i] == o.values_[i])) return false;
    return true;
  }

  friend bool operator==(const Fact& a, const Fact& b) {
    return a.relation_ == b.relation_ && a.values_ == b.values_;
  }
  friend bool operator<(const Fact& a, const Fact& b) {
    if (a.relation_ != b.relation_) return a.relation_ < b.relation_;
    return a.values_ < b.values_;
  }

 private:
  std::string relation_;
  std::vector<Constant> values_;
  std::size_t key_len_ = 0;
};

struct BlockKey {
  std::string relation;
  std::vector<Constant> key;

  friend bool operator==(const BlockKey&, const BlockKey&) = default;
  friend bool operator<(const BlockKey& a, const BlockKey& b) {
    if (a.relation != b.relation) return a.relation < b.relation;
    return a.key < b.key;
  }
};

inline BlockKey block_of(const Fact& f) { return {f.relation(), f.key()}; }

struct Block {
  BlockKey key;
  std::vector<Fact> facts;
};

// A finite set of facts over declared relations. Mode-c relations never hold
// two distinct key-equal facts.
class Database {
 public:
  Database() = default;

  void declare(const RelationSchema& s) {
    check_schema(s);
    auto it = schemas_.find(s.name);
    if (it != schemas_.end()) {
      if (!(it->second == s))
        throw Error("relation " + s.name + " declared with two signatures");
      return;
    }
    schemas_.emplace(s.name, s);
  }
  void declare_query(const Query& q) {
    for (const auto& a : q.atoms()) declare(a.relation());
  }

  const std::map<std::string, RelationSchema>& schemas() const {
    return schemas_;
  }
  const RelationSchema* schema(const std::string& name) const {
    auto it = schemas_.find(name);
    return it == schemas_.end() ? nullptr : &it->second;
  }

  // Adds a fact; returns false if it was already present.
  bool add(Fact f) {
    const RelationSchema* s = schema(f.relation());
    if (!s) throw Error("unknown relation " + f.relation());
    if (f.values().size() != s->arity)
      throw Error("arity mismatch for relation " + f.relation());
    if (f.key_len() != s->key_len) f = Fact(f.relation(), f.values(), s->key_len);
    if (s->mode == Mode::c) {
      for (const auto& g : facts_of(f.relation()))
        if (g.key_equal(f) && !(g == f))
          throw Error("mode-c relation " + f.relation() +
                      " has two distinct key-equal facts");
    }
    return facts_.insert(std::move(f)).second;
  }
  void add(const std::string& relation, std::vector<Constant> values) {
    const RelationSchema* s = schema(relation);
    if (!s) throw Error("unknown relation " + relation);
    add(Fact(relation, std::move(values), s->key_len));
  }
  bool erase(const Fact& f) { return facts_.erase(f) > 0; }
  bool contains(const Fact& f) const { return facts_.count(f) > 0; }

  const std::set<Fact>& facts() const { return facts_; }
  std::size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

  std::vector<Fact> facts_of(const std::string& relation) const {
    std::vector<Fact> out;
    Fact probe(relation, {}, 0);
    for (auto it = facts_.lower_bound(probe);
         it != facts_.end() && it->relation() == relation; ++it)
      out.push_back(*it);
    return out;
  }

  // Same schemas, only the facts satisfying pred.
  template <typename Pred>
  Database filter(Pred pred) const {
    Database out;
    out.schemas_ = schemas_;
    for (const auto& f : facts_)
      if (pred(f)) out.facts_.insert(f);
    return out;
  }

  friend bool operator==(const Database& a, const Database& b) {
    return a.facts_ == b.facts_;
  }

 private:
  std::map<std::string, RelationSchema> schemas_;
  std::set<Fact> facts_;
};

// Blocks ordered by (relation, key tuple).
inline std::vector<Block> blocks(const Database& db) {
  std::vector<Block> out;
  for (const auto& f : db.facts()) {
    BlockKey k = block_of(f);
    if (out.empty() || !(out.back().key == k)) out.push_back(Block{k, {}});
    out.back().facts.push_back(f);
  }
  return out;
}

inline std::map<BlockKey, std::vector<Fact>> block_index(const Database& db) {
  std::map<BlockKey, std::vector<Fact>> out;
  for (const auto& f : db.facts()) out[block_of(f)].push_back(f);
  return out;
}

// Substitutes valuation values for variables; constants pass through.
inline Term apply(const Valuation& v, const Term& t) {
  if (!t.is_var()) return t;
  auto it = v.find(t.name());
  return it == v.end() ? t : Term::constant(it->second);
}

inline Atom apply(const Valuation& v, const Atom& a) {
  std::vector<Term> ts;
  ts.reserve(a.terms().size());
  for (const auto& t : a.terms()) ts.push_back(apply(v, t));
  return Atom(a.relation(), std::move(ts));
}

inline Query apply(const Valuation& v, const Query& q) {
  Query out;
  for (const auto& a : q.atoms()) out.add(apply(v, a));
  return out;
}

// The fact θ(F); requires θ to cover vars(F).
inline Fact ground(const Valuation& v, const Atom& a) {
  std::vector<Constant> vals;
  vals.reserve(a.terms().size());
  for (const auto& t : a.terms()) {
    if (!t.is_var()) {
      vals.push_back(t.value());
      continue;
    }
    auto it = v.find(t.name());
    if (it == v.end()) throw Error("valuation misses variable " + t.name());
    vals.push_back(it->second);
  }
  return Fact(a.name(), std::move(vals), a.relation().key_len);
}

// Extends v so that θ(a) = f; returns false (leaving v unspecified) if
// impossible.
inline bool match(const Atom& a, const Fact& f, Valuation& v) {
  if (a.name() != f.relation() || a.terms().size() != f.values().size())
    return false;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const Term& t = a.terms()[i];
    const Constant& c = f.values()[i];
    if (!t.is_var()) {
      if (!(t.value() == c)) return false;
      continue;
    }
    auto [it, inserted] = v.emplace(t.name(), c);
    if (!inserted && !(it->second == c)) return false;
  }
  return true;
}

// Key-only variant of match: binds key variables of a to the key of f.
inline bool match_key(const Atom& a, const std::vector<Constant>& key,
                      Valuation& v) {
  auto kt = a.key_terms();
  if (kt.size() != key.size()) return false;
  for (std::size_t i = 0; i < kt.size(); ++i) {
    if (!kt[i].is_var()) {
      if (!(kt[i].value() == key[i])) return false;
      continue;
    }
    auto [it, inserted] = v.emplace(kt[i].name(), key[i]);
    if (!inserted && !(it->second == key[i])) return false;
  }
  return true;
}

inline Valuation restrict_to(const Valuation& v, const VarSet& vars) {
  Valuation out;
  for (const auto& [k, c] : v)
    if (vars.count(k)) out.emplace(k, c);
  return out;
}

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

inline bool is_subset(const VarSet& a, const VarSet& b) {
  for (const auto& x : a)
    if (!b.count(x)) return false;
  return true;
}

inline VarSet intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  for (const auto& x : a)
    if (b.count(x)) out.insert(x);
  return out;
}

}  // namespace cqa
