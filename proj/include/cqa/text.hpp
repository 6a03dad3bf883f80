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

// Text formats for queries (.cqa) and databases (.facts).
//
//   q :- R(x|y), S@c(y|z, "lit", 7).
//   R(a1|b1).          # bare words are text constants in .facts
//   U(1, "a b"|[1, 2]). # [..] is a tuple constant

#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cqa/constant.hpp"
#include "cqa/error.hpp"
#include "cqa/model.hpp"

namespace cqa {

namespace text_detail {

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_bare_char(char c) {
  if (static_cast<unsigned char>(c) >= 0x80) return true;
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  switch (c) {
    case '(': case ')': case '|': case ',': case '.': case '[': case ']':
    case '"': case '\'': case '#': case '@': case ':': case '!': case '=':
      return false;
    default:
      return std::isprint(static_cast<unsigned char>(c)) != 0;
  }
}
inline bool is_integer(std::string_view s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace text_detail

// Character cursor with line/column tracking shared by the text parsers.
class Cursor {
 public:
  explicit Cursor(std::string_view src) : src_(src) {}

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  bool at_end() {
    skip_space();
    return pos_ >= src_.size();
  }
  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }
  char peek_raw() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  bool starts_with(std::string_view s) {
    skip_space();
    return src_.substr(pos_, s.size()) == s;
  }
  bool accept(std::string_view s) {
    if (!starts_with(s)) return false;
    for (std::size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }
  void expect(std::string_view s) {
    if (!accept(s)) fail("expected '" + std::string(s) + "'");
  }
  std::string ident() {
    skip_space();
    if (pos_ >= src_.size() || !text_detail::is_ident_start(src_[pos_]))
      fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < src_.size() && text_detail::is_ident_char(src_[pos_]))
      advance();
    return std::string(src_.substr(start, pos_ - start));
  }
  // Constant: quoted string, integer, [tuple], or (if bare_words) a bare word.
  Constant constant(bool bare_words) {
    skip_space();
    char c = peek_raw();
    if (c == '"' || c == '\'') return Constant::text(quoted());
    if (c == '[') {
      advance();
      std::vector<Constant> items;
      if (!accept("]")) {
        do {
          items.push_back(constant(bare_words));
        } while (accept(","));
        expect("]");
      }
      return Constant::tuple(std::move(items));
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      advance();
      while (std::isdigit(static_cast<unsigned char>(peek_raw()))) advance();
      std::string_view tok = src_.substr(start, pos_ - start);
      if (!bare_words || !text_detail::is_bare_char(peek_raw())) {
        if (!text_detail::is_integer(tok)) fail("malformed integer");
        try {
          return Constant::number(std::stoll(std::string(tok)));
        } catch (const std::out_of_range&) {
          fail("integer out of range");
        }
      }
      while (text_detail::is_bare_char(peek_raw())) advance();
      return Constant::text(std::string(src_.substr(start, pos_ - start)));
    }
    if (bare_words && text_detail::is_bare_char(c)) {
      std::size_t start = pos_;
      while (text_detail::is_bare_char(peek_raw())) advance();
      return Constant::text(std::string(src_.substr(start, pos_ - start)));
    }
    fail("expected constant");
  }
  std::string quoted() {
    char q = peek_raw();
    advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) fail("unterminated string");
      char c = src_[pos_];
      advance();
      if (c == q) break;
      if (c == '\\') {
        if (pos_ >= src_.size()) fail("unterminated string");
        char e = src_[pos_];
        advance();
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default: out.push_back(e);
        }
        continue;
      }
      out.push_back(c);
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, col_);
  }
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline Query parse_query(std::string_view src) {
  Cursor cur(src);
  cur.ident();
  cur.expect(":-");
  Query q;
  do {
    std::size_t line = (cur.skip_space(), cur.line());
    std::size_t col = cur.column();
    std::string name = cur.ident();
    Mode mode = Mode::i;
    if (cur.accept("@")) {
      std::string m = cur.ident();
      if (m == "c") {
        mode = Mode::c;
      } else if (m != "i") {
        cur.fail("unknown mode @" + m);
      }
    }
    cur.expect("(");
    std::vector<Term> terms;
    std::size_t key_len = 0;
    bool in_key = true;
    auto term = [&]() {
      char c = cur.peek();
      if (text_detail::is_ident_start(c)) return Term::var(cur.ident());
      return Term::constant(cur.constant(false));
    };
    if (cur.peek() != '|' && cur.peek() != ')') {
      terms.push_back(term());
      while (cur.accept(",")) terms.push_back(term());
    }
    if (cur.accept("|")) {
      key_len = terms.size();
      in_key = false;
      if (cur.peek() != ')') {
        terms.push_back(term());
        while (cur.accept(",")) terms.push_back(term());
      }
    }
    cur.expect(")");
    if (in_key) key_len = terms.size();
    if (key_len == 0)
      throw ParseError("relation " + name + ": key length out of range", line,
                       col);
    try {
      RelationSchema schema{name, terms.size(), key_len, mode};
      q.add(Atom(std::move(schema), std::move(terms)));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line, col);
    }
  } while (cur.accept(","));
  cur.expect(".");
  if (!cur.at_end()) cur.fail("trailing input after query");
  return q;
}

struct RawFact {
  std::string relation;
  std::vector<Constant> key;
  std::vector<Constant> value;
  std::size_t line = 0;
  std::size_t column = 0;
};

inline std::vector<RawFact> parse_raw_facts(std::string_view src) {
  Cursor cur(src);
  std::vector<RawFact> out;
  while (!cur.at_end()) {
    RawFact f;
    f.line = cur.line();
    f.column = cur.column();
    f.relation = cur.ident();
    cur.expect("(");
    std::vector<Constant>* side = &f.key;
    if (cur.peek() != '|' && cur.peek() != ')') {
      side->push_back(cur.constant(true));
      while (cur.accept(",")) side->push_back(cur.constant(true));
    }
    if (cur.accept("|")) {
      side = &f.value;
      if (cur.peek() != ')') {
        side->push_back(cur.constant(true));
        while (cur.accept(",")) side->push_back(cur.constant(true));
      }
    }
    cur.expect(")");
    cur.expect(".");
    out.push_back(std::move(f));
  }
  return out;
}

// Parses facts over the relations declared by q.
inline Database parse_database(std::string_view src, const Query& q) {
  Database db;
  db.declare_query(q);
  for (auto& rf : parse_raw_facts(src)) {
    const RelationSchema* s = db.schema(rf.relation);
    if (!s)
      throw ParseError("unknown relation " + rf.relation, rf.line, rf.column);
    if (rf.key.size() + rf.value.size() != s->arity)
      throw ParseError("arity mismatch for relation " + rf.relation, rf.line,
                       rf.column);
    if (rf.key.size() != s->key_len)
      throw ParseError("key length mismatch for relation " + rf.relation,
                       rf.line, rf.column);
    std::vector<Constant> vals = rf.key;
    vals.insert(vals.end(), rf.value.begin(), rf.value.end());
    try {
      db.add(Fact(rf.relation, std::move(vals), s->key_len));
    } catch (const Error& e) {
      throw ParseError(e.what(), rf.line, rf.column);
    }
  }
  return db;
}

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

// bare: print identifier-like texts without quotes (only valid in .facts).
inline std::string to_string(const Constant& c, bool bare = false) {
  switch (c.kind()) {
    case Constant::Kind::number:
      return std::to_string(c.as_number());
    case Constant::Kind::text: {
      const std::string& s = c.as_text();
      bool ok = bare && !s.empty() && !text_detail::is_integer(s) &&
                s[0] != '-' && !std::isdigit(static_cast<unsigned char>(s[0]));
      for (char ch : s) ok = ok && text_detail::is_bare_char(ch);
      return ok ? s : quote(s);
    }
    case Constant::Kind::tuple: {
      std::string out = "[";
      for (std::size_t i = 0; i < c.as_tuple().size(); ++i) {
        if (i) out += ", ";
        out += to_string(c.as_tuple()[i], bare);
      }
      return out + "]";
    }
  }
  return "";
}

inline std::string to_string(const Term& t) {
  return t.is_var() ? t.name() : to_string(t.value());
}

inline std::string to_string(const Atom& a) {
  std::string out = a.name();
  if (a.consistent()) out += "@c";
  out += "(";
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    if (i == a.relation().key_len) {
      out += "|";
    } else if (i) {
      out += ", ";
    }
    out += to_string(a.terms()[i]);
  }
  if (a.relation().key_len == a.terms().size()) out += "|";
  return out + ")";
}

inline std::string to_string(const Query& q) {
  std::string out = "q :- ";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out += ", ";
    out += to_string(q[i]);
  }
  return out + ".";
}

inline std::string to_string(const Fact& f) {
  std::string out = f.relation() + "(";
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    if (i == f.key_len()) {
      out += "|";
    } else if (i) {
      out += ", ";
    }
    out += to_string(f.values()[i], true);
  }
  if (f.key_len() == f.values().size()) out += "|";
  return out + ")";
}

inline std::string to_string(const Database& db) {
  std::string out;
  for (const auto& f : db.facts()) out += to_string(f) + ".\n";
  return out;
}

inline std::string to_string(const BlockKey& b) {
  std::string out = b.relation + "(";
  for (std::size_t i = 0; i < b.key.size(); ++i) {
    if (i) out += ", ";
    out += to_string(b.key[i], true);
  }
  return out + ", *)";
}

inline std::string to_string(const Valuation& v) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, c] : v) {
    if (!first) out += ", ";
    first = false;
    out += k + "->" + to_string(c);
  }
  return out + "}";
}

inline std::string to_string(const VarSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& x : s) {
    if (!first) out += ",";
    first = false;
    out += x;
  }
  return out + "}";
}

}  // namespace cqa
