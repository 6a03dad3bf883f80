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

// Bottom-up evaluation: strata in order, semi-naive within a stratum,
// min-rules ahead of the rest of their stratum.

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cqa/constant.hpp"
#include "cqa/datalog/ir.hpp"
#include "cqa/datalog/validate.hpp"
#include "cqa/model.hpp"

namespace cqa::datalog {

using Tuple = std::vector<Constant>;
using RelationStore = std::map<std::string, std::set<Tuple>>;

// One tuple per fact: key values followed by the remaining values.
inline RelationStore edb_from(const Database& db) {
  RelationStore out;
  for (const auto& [name, s] : db.schemas()) out[name];
  for (const auto& f : db.facts()) out[f.relation()].insert(f.values());
  return out;
}

struct EvalOptions {
  ConstantOrder order = ConstantOrder::ascending;
  bool naive = false;  // recompute every rule until nothing changes
};

namespace engine_detail {

using Row = std::vector<std::uint32_t>;

struct RowHash {
  std::size_t operator()(const Row& r) const {
    std::size_t h = r.size();
    for (auto x : r) h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

class Interner {
 public:
  std::uint32_t id(const Constant& c) {
    auto [it, inserted] = ids_.emplace(c, values_.size());
    if (inserted) values_.push_back(c);
    return it->second;
  }
  const Constant& value(std::uint32_t i) const { return values_[i]; }

 private:
  std::unordered_map<Constant, std::uint32_t, ConstantHash> ids_;
  std::vector<Constant> values_;
};

class Relation {
 public:
  using Index = std::unordered_map<Row, std::vector<std::uint32_t>, RowHash>;

  bool insert(const Row& r) {
    if (!set_.insert(r).second) return false;
    auto id = static_cast<std::uint32_t>(rows_.size());
    rows_.push_back(r);
    for (auto& [cols, idx] : indexes_) idx[project(r, cols)].push_back(id);
    return true;
  }
  bool contains(const Row& r) const { return set_.count(r) > 0; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  const Index& index(const std::vector<std::size_t>& cols) {
    auto it = indexes_.find(cols);
    if (it != indexes_.end()) return it->second;
    Index& idx = indexes_[cols];
    for (std::uint32_t i = 0; i < rows_.size(); ++i)
      idx[project(rows_[i], cols)].push_back(i);
    return idx;
  }

 private:
  static Row project(const Row& r, const std::vector<std::size_t>& cols) {
    Row out;
    out.reserve(cols.size());
    for (auto c : cols) out.push_back(r[c]);
    return out;
  }

  std::vector<Row> rows_;
  std::unordered_set<Row, RowHash> set_;
  std::map<std::vector<std::size_t>, Index> indexes_;
};

// Operand: constant id or variable slot.
struct Operand {
  bool is_slot = false;
  std::uint32_t value = 0;
};

enum class ArgMode { constant, bound, bind, check };

struct Arg {
  ArgMode mode;
  std::uint32_t value;  // constant id or slot
};

enum class StepKind { scan, negated, equal, not_equal, assign };

struct Step {
  StepKind kind;
  std::string predicate;
  bool delta = false;
  std::vector<Arg> args;
  std::vector<std::size_t> key_cols;  // scan: columns fixed before the scan
  Operand lhs, rhs;                   // comparisons; assign: lhs := rhs
};

struct Plan {
  std::vector<Step> steps;
  std::vector<Operand> head;
  std::size_t slots = 0;
};

inline Plan compile(const Rule& r, std::optional<std::size_t> delta_literal,
                    Interner& in) {
  Plan p;
  std::map<std::string, std::uint32_t> slot;
  std::set<std::string> bound;
  auto slot_of = [&](const std::string& v) {
    auto [it, inserted] = slot.emplace(v, static_cast<std::uint32_t>(p.slots));
    if (inserted) ++p.slots;
    return it->second;
  };
  auto operand = [&](const Term& t) {
    if (!t.is_var()) return Operand{false, in.id(t.value())};
    return Operand{true, slot_of(t.name())};
  };
  auto is_bound = [&](const Term& t) {
    return !t.is_var() || bound.count(t.name()) > 0;
  };
  std::vector<bool> done(r.body.size(), false);
  std::size_t remaining = r.body.size();
  while (remaining) {
    bool progress = false;
    // Filters and assignments as soon as they are ready.
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (done[i]) continue;
      const Literal& l = r.body[i];
      Step s;
      if (l.kind == LiteralKind::negative) {
        bool ready = true;
        for (const auto& t : l.atom.args) ready = ready && is_bound(t);
        if (!ready) continue;
        s.kind = StepKind::negated;
        s.predicate = l.atom.predicate;
        for (const auto& t : l.atom.args) {
          Operand o = operand(t);
          s.args.push_back({o.is_slot ? ArgMode::bound : ArgMode::constant,
                            o.value});
        }
      } else if (l.kind == LiteralKind::not_equal ||
                 l.kind == LiteralKind::equal) {
        bool lb = is_bound(l.lhs), rb = is_bound(l.rhs);
        if (lb && rb) {
          s.kind = l.kind == LiteralKind::equal ? StepKind::equal
                                                : StepKind::not_equal;
          s.lhs = operand(l.lhs);
          s.rhs = operand(l.rhs);
        } else if (l.kind == LiteralKind::equal && (lb || rb)) {
          const Term& target = lb ? l.rhs : l.lhs;
          const Term& source = lb ? l.lhs : l.rhs;
          s.kind = StepKind::assign;
          s.rhs = operand(source);
          s.lhs = operand(target);
          bound.insert(target.name());
        } else {
          continue;
        }
      } else {
        continue;
      }
      p.steps.push_back(std::move(s));
      done[i] = true;
      --remaining;
      progress = true;
    }
    if (progress) continue;
    // Next positive literal: the delta literal first, then most bound.
    std::optional<std::size_t> best;
    std::pair<std::size_t, long> best_score{0, 0};
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (done[i] || r.body[i].kind != LiteralKind::positive) continue;
      std::size_t nb = 0;
      for (const auto& t : r.body[i].atom.args) nb += is_bound(t);
      long free = static_cast<long>(r.body[i].atom.args.size() - nb);
      std::pair<std::size_t, long> score{
          delta_literal == i ? std::size_t{1000000} : nb, -free};
      if (!best || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    if (!best) throw Error("rule is not range-restricted: " + to_string(r));
    const Atom& a = r.body[*best].atom;
    Step s;
    s.kind = StepKind::scan;
    s.predicate = a.predicate;
    s.delta = delta_literal == *best;
    std::set<std::string> local;
    for (std::size_t c = 0; c < a.args.size(); ++c) {
      const Term& t = a.args[c];
      if (!t.is_var()) {
        s.args.push_back({ArgMode::constant, in.id(t.value())});
        s.key_cols.push_back(c);
      } else if (bound.count(t.name())) {
        s.args.push_back({ArgMode::bound, slot_of(t.name())});
        s.key_cols.push_back(c);
      } else if (local.count(t.name())) {
        s.args.push_back({ArgMode::check, slot_of(t.name())});
      } else {
        s.args.push_back({ArgMode::bind, slot_of(t.name())});
        local.insert(t.name());
      }
    }
    for (const auto& v : local) bound.insert(v);
    p.steps.push_back(std::move(s));
    done[*best] = true;
    --remaining;
  }
  for (const auto& t : r.head.args) {
    if (t.is_var() && !bound.count(t.name()))
      throw Error("rule is not range-restricted: " + to_string(r));
    p.head.push_back(operand(t));
  }
  return p;
}

class Evaluator {
 public:
  Evaluator(const EvalOptions& opts) : opts_(opts) {}

  Relation& rel(const std::string& name) {
    auto& p = rels_[name];
    if (!p) p = std::make_unique<Relation>();
    return *p;
  }

  Interner& interner() { return in_; }

  void load(const RelationStore& edb) {
    for (const auto& [name, tuples] : edb) {
      Relation& r = rel(name);
      for (const auto& t : tuples) r.insert(encode(t));
    }
  }

  Row encode(const Tuple& t) {
    Row r;
    for (const auto& c : t) r.push_back(in_.id(c));
    return r;
  }
  Tuple decode(const Row& r) const {
    Tuple t;
    for (auto x : r) t.push_back(in_.value(x));
    return t;
  }

  void run_stratum(const Stratum& s) {
    std::set<std::string> recursive;
    for (const auto& r : s.rules)
      if (!r.min_from) recursive.insert(r.head.predicate);
    // Min rules read lower strata only.
    std::map<std::string, std::vector<Row>> min_rows;
    std::map<std::string, std::size_t> min_from;
    for (const auto& r : s.rules) {
      if (!r.min_from) continue;
      Plan p = compile(r, std::nullopt, in_);
      auto& out = min_rows[r.head.predicate];
      min_from[r.head.predicate] = *r.min_from;
      execute(p, [&](const Row& row) { out.push_back(row); });
    }
    for (auto& [pred, rows] : min_rows) insert_min(pred, rows, min_from[pred]);

    std::vector<const Rule*> rules;
    for (const auto& r : s.rules)
      if (!r.min_from) rules.push_back(&r);
    auto recursive_literals = [&](const Rule& r) {
      std::vector<std::size_t> out;
      for (std::size_t i = 0; i < r.body.size(); ++i)
        if (r.body[i].kind == LiteralKind::positive &&
            recursive.count(r.body[i].atom.predicate))
          out.push_back(i);
      return out;
    };

    if (opts_.naive) {
      bool changed = true;
      while (changed) {
        changed = false;
        std::vector<std::pair<std::string, Row>> fresh;
        for (const auto* r : rules) {
          Plan p = compile(*r, std::nullopt, in_);
          execute(p, [&](const Row& row) {
            fresh.push_back({r->head.predicate, row});
          });
        }
        for (auto& [pred, row] : fresh) changed |= rel(pred).insert(row);
      }
      return;
    }

    std::map<std::string, std::vector<Row>> delta;
    for (const auto* r : rules) {
      Plan p = compile(*r, std::nullopt, in_);
      auto& d = delta[r->head.predicate];
      execute(p, [&](const Row& row) { d.push_back(row); });
    }
    std::vector<std::pair<const Rule*, Plan>> delta_plans;
    for (const auto* r : rules)
      for (auto i : recursive_literals(*r))
        delta_plans.push_back({r, compile(*r, i, in_)});
    while (true) {
      // Merge the new tuples and keep only the genuinely new ones as delta.
      deltas_.clear();
      bool any = false;
      for (auto& [pred, rows] : delta) {
        Relation& full = rel(pred);
        Relation& d = delta_rel(pred);
        for (const auto& row : rows)
          if (full.insert(row)) {
            d.insert(row);
            any = true;
          }
      }
      if (!any || delta_plans.empty()) break;
      delta.clear();
      for (auto& [r, p] : delta_plans) {
        auto& d = delta[r->head.predicate];
        execute(p, [&](const Row& row) {
          if (!rel(r->head.predicate).contains(row)) d.push_back(row);
        });
      }
    }
    deltas_.clear();
  }

  RelationStore store() const {
    RelationStore out;
    for (const auto& [name, r] : rels_) {
      auto& s = out[name];
      for (const auto& row : r->rows()) s.insert(decode(row));
    }
    return out;
  }

 private:
  Relation& delta_rel(const std::string& name) {
    auto& p = deltas_[name];
    if (!p) p = std::make_unique<Relation>();
    return *p;
  }

  bool less(const Row& a, const Row& b, std::size_t from) const {
    for (std::size_t i = from; i < a.size(); ++i) {
      if (a[i] == b[i]) continue;
      const Constant& x = in_.value(a[i]);
      const Constant& y = in_.value(b[i]);
      return opts_.order == ConstantOrder::ascending ? x < y : y < x;
    }
    return false;
  }

  void insert_min(const std::string& pred, const std::vector<Row>& rows,
                  std::size_t from) {
    std::map<Row, Row> best;
    for (const auto& r : rows) {
      Row group(r.begin(), r.begin() + static_cast<long>(from));
      auto it = best.find(group);
      if (it == best.end()) {
        best.emplace(std::move(group), r);
      } else if (less(r, it->second, from)) {
        it->second = r;
      }
    }
    Relation& out = rel(pred);
    for (const auto& [g, r] : best) out.insert(r);
  }

  template <typename Emit>
  void execute(const Plan& p, Emit&& emit) {
    std::vector<std::uint32_t> slots(p.slots, 0);
    run(p, 0, slots, emit);
  }

  std::uint32_t get(const Operand& o,
                    const std::vector<std::uint32_t>& slots) const {
    return o.is_slot ? slots[o.value] : o.value;
  }

  template <typename Emit>
  void run(const Plan& p, std::size_t i, std::vector<std::uint32_t>& slots,
           Emit& emit) {
    if (i == p.steps.size()) {
      Row head;
      head.reserve(p.head.size());
      for (const auto& o : p.head) head.push_back(get(o, slots));
      emit(head);
      return;
    }
    const Step& s = p.steps[i];
    switch (s.kind) {
      case StepKind::equal:
        if (get(s.lhs, slots) == get(s.rhs, slots)) run(p, i + 1, slots, emit);
        return;
      case StepKind::not_equal:
        if (get(s.lhs, slots) != get(s.rhs, slots)) run(p, i + 1, slots, emit);
        return;
      case StepKind::assign:
        slots[s.lhs.value] = get(s.rhs, slots);
        run(p, i + 1, slots, emit);
        return;
      case StepKind::negated: {
        Row row;
        for (const auto& a : s.args)
          row.push_back(a.mode == ArgMode::constant ? a.value : slots[a.value]);
        auto it = rels_.find(s.predicate);
        if (it == rels_.end() || !it->second->contains(row))
          run(p, i + 1, slots, emit);
        return;
      }
      case StepKind::scan:
        break;
    }
    Relation* r = nullptr;
    if (s.delta) {
      auto it = deltas_.find(s.predicate);
      if (it == deltas_.end()) return;
      r = it->second.get();
    } else {
      auto it = rels_.find(s.predicate);
      if (it == rels_.end()) return;
      r = it->second.get();
    }
    auto visit = [&](const Row& row) {
      if (row.size() != s.args.size()) return;
      for (std::size_t c = 0; c < s.args.size(); ++c) {
        const Arg& a = s.args[c];
        switch (a.mode) {
          case ArgMode::bind:
            slots[a.value] = row[c];
            break;
          case ArgMode::check:
            if (slots[a.value] != row[c]) return;
            break;
          case ArgMode::constant:
            if (row[c] != a.value) return;
            break;
          case ArgMode::bound:
            if (row[c] != slots[a.value]) return;
            break;
        }
      }
      run(p, i + 1, slots, emit);
    };
    if (s.key_cols.empty()) {
      // Copy: the relation may grow while we iterate (naive mode).
      std::size_t n = r->size();
      for (std::size_t k = 0; k < n; ++k) {
        Row row = r->rows()[k];
        visit(row);
      }
      return;
    }
    Row key;
    for (auto c : s.key_cols) {
      const Arg& a = s.args[c];
      key.push_back(a.mode == ArgMode::constant ? a.value : slots[a.value]);
    }
    const auto& idx = r->index(s.key_cols);
    auto it = idx.find(key);
    if (it == idx.end()) return;
    std::vector<std::uint32_t> ids = it->second;
    for (auto id : ids) {
      Row row = r->rows()[id];
      visit(row);
    }
  }

  EvalOptions opts_;
  Interner in_;
  std::map<std::string, std::unique_ptr<Relation>> rels_;
  std::map<std::string, std::unique_ptr<Relation>> deltas_;
};

}  // namespace engine_detail

// Evaluates p on edb. Throws if p is not stratified or not
// range-restricted.
inline RelationStore evaluate(const Program& p, const RelationStore& edb,
                              const EvalOptions& opts = {}) {
  auto rep = validate(p);
  if (!rep.stratified || !rep.range_restricted)
    throw Error("cannot evaluate program: " +
                (rep.problems.empty() ? std::string("invalid")
                                      : rep.problems.front()));
  for (const auto& [name, tuples] : edb)
    if (p.stratum_of().count(name))
      throw Error("EDB relation " + name + " is also defined by rules");
  engine_detail::Evaluator ev(opts);
  ev.load(edb);
  for (const auto& s : p.strata) ev.run_stratum(s);
  RelationStore out = ev.store();
  for (const auto& name : p.idb()) out[name];
  return out;
}

inline bool holds(const RelationStore& s, const std::string& pred) {
  auto it = s.find(pred);
  return it != s.end() && !it->second.empty();
}

}  // namespace cqa::datalog
