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

// .dl text format:
//
//   # key: value            manifest lines (leading comment block)
//   @edb R/2
//   @goal Goal
//   @stratum 0
//   Ans(x) :- R(x, y), !S(y), x != y.
//   P(x, min(y, z)) :- Q(x, y, z).
//   Dom.
//
// Bare identifiers are variables; constants are quoted, integers or [..].

#pragma once

#include <cstddef>
#include <sstream>
#include <string>
#include <string_view>

#include "cqa/datalog/ir.hpp"
#include "cqa/text.hpp"

namespace cqa::datalog {

inline std::string to_string(const Term& t) {
  if (t.is_var()) return t.name();
  if (t.value().is_text()) return quote(t.value().as_text());
  return cqa::to_string(t.value());
}

inline std::string to_string(const Atom& a,
                             std::optional<std::size_t> min_from = {}) {
  if (a.args.empty()) return a.predicate;
  std::string out = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    if (min_from && i == *min_from) out += "min(";
    out += to_string(a.args[i]);
  }
  if (min_from) out += ")";
  return out + ")";
}

inline std::string to_string(const Literal& l) {
  switch (l.kind) {
    case LiteralKind::positive:
      return to_string(l.atom);
    case LiteralKind::negative:
      return "!" + to_string(l.atom);
    case LiteralKind::equal:
      return to_string(l.lhs) + " = " + to_string(l.rhs);
    case LiteralKind::not_equal:
      return to_string(l.lhs) + " != " + to_string(l.rhs);
  }
  return "";
}

inline std::string to_string(const Rule& r) {
  std::string out = to_string(r.head, r.min_from);
  if (!r.body.empty()) {
    out += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out += ", ";
      out += to_string(r.body[i]);
    }
  }
  return out + ".";
}

inline std::string print_program(const Program& p) {
  std::ostringstream out;
  for (const auto& [k, v] : p.manifest) out << "# " << k << ": " << v << "\n";
  for (const auto& [name, arity] : p.edb)
    out << "@edb " << name << "/" << arity << "\n";
  if (!p.goal.empty()) out << "@goal " << p.goal << "\n";
  for (std::size_t i = 0; i < p.strata.size(); ++i) {
    out << "\n@stratum " << i << "\n";
    for (const auto& r : p.strata[i].rules) out << to_string(r) << "\n";
  }
  return out.str();
}

namespace text_detail {

inline Term parse_term(Cursor& cur) {
  char c = cur.peek();
  if (cqa::text_detail::is_ident_start(c)) return Term::var(cur.ident());
  return Term::constant(cur.constant(false));
}

// Atom arguments; sets min_from when a trailing min(...) group is present.
inline Atom parse_atom(Cursor& cur, std::string name,
                       std::optional<std::size_t>* min_from) {
  Atom a{std::move(name), {}};
  if (!cur.accept("(")) return a;
  if (cur.accept(")")) return a;
  do {
    if (min_from && cur.starts_with("min(")) {
      cur.expect("min(");
      *min_from = a.args.size();
      do {
        a.args.push_back(parse_term(cur));
      } while (cur.accept(","));
      cur.expect(")");
      break;
    }
    a.args.push_back(parse_term(cur));
  } while (cur.accept(","));
  cur.expect(")");
  return a;
}

inline Literal parse_literal(Cursor& cur) {
  if (cur.accept("!")) {
    std::string name = cur.ident();
    return Literal::neg(parse_atom(cur, std::move(name), nullptr));
  }
  char c = cur.peek();
  if (cqa::text_detail::is_ident_start(c)) {
    std::string name = cur.ident();
    if (cur.accept("!=")) return Literal::neq(Term::var(name), parse_term(cur));
    if (cur.accept("=")) return Literal::eq(Term::var(name), parse_term(cur));
    return Literal::pos(parse_atom(cur, std::move(name), nullptr));
  }
  Term lhs = parse_term(cur);
  if (cur.accept("!=")) return Literal::neq(lhs, parse_term(cur));
  cur.expect("=");
  return Literal::eq(lhs, parse_term(cur));
}

}  // namespace text_detail

inline Program parse_program(std::string_view src) {
  Program p;
  // Manifest: leading "# key: value" lines.
  {
    std::istringstream in{std::string(src)};
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (line.rfind("# ", 0) != 0) break;
      auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      p.manifest.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
    }
  }
  Cursor cur(src);
  bool have_stratum = false;
  while (!cur.at_end()) {
    if (cur.accept("@")) {
      std::string d = cur.ident();
      if (d == "stratum") {
        Constant n = cur.constant(false);
        if (!n.is_number() ||
            n.as_number() != static_cast<std::int64_t>(p.strata.size()))
          cur.fail("strata must be numbered 0, 1, ... in order");
        p.strata.emplace_back();
        have_stratum = true;
      } else if (d == "edb") {
        std::string name = cur.ident();
        cur.expect("/");
        Constant n = cur.constant(false);
        if (!n.is_number() || n.as_number() < 0) cur.fail("bad arity");
        p.edb[name] = static_cast<std::size_t>(n.as_number());
      } else if (d == "goal") {
        p.goal = cur.ident();
      } else {
        cur.fail("unknown directive @" + d);
      }
      continue;
    }
    if (!have_stratum) cur.fail("rule before the first @stratum");
    Rule r;
    std::string name = cur.ident();
    r.head = text_detail::parse_atom(cur, std::move(name), &r.min_from);
    if (cur.accept(":-")) {
      do {
        r.body.push_back(text_detail::parse_literal(cur));
      } while (cur.accept(","));
    }
    cur.expect(".");
    p.strata.back().rules.push_back(std::move(r));
  }
  return p;
}

}  // namespace cqa::datalog
