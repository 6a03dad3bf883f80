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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace cqa {

// A database constant: number, byte string, or tuple of constants.
// Constants are totally ordered: numbers < texts < tuples.
class Constant {
 public:
  enum class Kind : std::uint8_t { number = 0, text = 1, tuple = 2 };

  Constant() = default;

  static Constant number(std::int64_t v) {
    Constant c;
    c.kind_ = Kind::number;
    c.num_ = v;
    return c;
  }
  static Constant text(std::string v) {
    Constant c;
    c.kind_ = Kind::text;
    c.text_ = std::move(v);
    return c;
  }
  static Constant tuple(std::vector<Constant> v) {
    Constant c;
    c.kind_ = Kind::tuple;
    c.items_ = std::move(v);
    return c;
  }

  Kind kind() const { return kind_; }
  bool is_number() const { return kind_ == Kind::number; }
  bool is_text() const { return kind_ == Kind::text; }
  bool is_tuple() const { return kind_ == Kind::tuple; }
  std::int64_t as_number() const { return num_; }
  const std::string& as_text() const { return text_; }
  const std::vector<Constant>& as_tuple() const { return items_; }

  friend bool operator==(const Constant& a, const Constant& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::number:
        return a.num_ == b.num_;
      case Kind::text:
        return a.text_ == b.text_;
      case Kind::tuple:
        return a.items_ == b.items_;
    }
    return false;
  }

  friend std::strong_ordering operator<=>(const Constant& a,
                                          const Constant& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    switch (a.kind_) {
      case Kind::number:
        return a.num_ <=> b.num_;
      case Kind::text: {
        int c = a.text_.compare(b.text_);
        return c < 0   ? std::strong_ordering::less
               : c > 0 ? std::strong_ordering::greater
                       : std::strong_ordering::equal;
      }
      case Kind::tuple: {
        std::size_t n = std::min(a.items_.size(), b.items_.size());
        for (std::size_t i = 0; i < n; ++i) {
          auto c = a.items_[i] <=> b.items_[i];
          if (c != 0) return c;
        }
        return a.items_.size() <=> b.items_.size();
      }
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ULL;
    switch (kind_) {
      case Kind::number:
        h ^= std::hash<std::int64_t>{}(num_) + (h << 6) + (h >> 2);
        break;
      case Kind::text:
        h ^= std::hash<std::string>{}(text_) + (h << 6) + (h >> 2);
        break;
      case Kind::tuple:
        for (const auto& c : items_) h ^= c.hash() + (h << 6) + (h >> 2);
        break;
    }
    return h;
  }

 private:
  Kind kind_ = Kind::number;
  std::int64_t num_ = 0;
  std::string text_;
  std::vector<Constant> items_;
};

// Direction of the constant order used by min-aggregation and identifier
// choice. Answers of pipeline programs must not depend on it.
enum class ConstantOrder { ascending, descending };

inline bool constant_less(const Constant& a, const Constant& b,
                          ConstantOrder order) {
  return order == ConstantOrder::ascending ? a < b : b < a;
}

// Lexicographic comparison of equal-length constant sequences.
inline bool tuple_less(const std::vector<Constant>& a,
                       const std::vector<Constant>& b, ConstantOrder order) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == b[i]) continue;
    return constant_less(a[i], b[i], order);
  }
  return a.size() < b.size();
}

struct ConstantHash {
  std::size_t operator()(const Constant& c) const { return c.hash(); }
};

struct ConstantVectorHash {
  std::size_t operator()(const std::vector<Constant>& v) const {
    std::size_t h = v.size();
    for (const auto& c : v) h ^= c.hash() + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};

}  // namespace cqa
