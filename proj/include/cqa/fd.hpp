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

#include <optional>
#include <string>
#include <vector>

#include "cqa/model.hpp"

namespace cqa {

struct FunctionalDependency {
  VarSet lhs;
  VarSet rhs;

  friend bool operator==(const FunctionalDependency&,
                         const FunctionalDependency&) = default;
};

using FdSet = std::vector<FunctionalDependency>;

// key(F) -> vars(F) for every atom F of q.
inline FdSet fds_of(const Query& q) {
  FdSet out;
  for (const auto& a : q.atoms()) out.push_back({a.key_vars(), a.vars()});
  return out;
}

inline Query catoms(const Query& q) {
  Query out;
  for (const auto& a : q.atoms())
    if (a.consistent()) out.add(a);
  return out;
}

inline VarSet fd_closure(const VarSet& x, const FdSet& sigma) {
  VarSet out = x;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& fd : sigma) {
      if (!is_subset(fd.lhs, out)) continue;
      for (const auto& y : fd.rhs) changed |= out.insert(y).second;
    }
  }
  return out;
}

inline bool entails(const FdSet& sigma, const FunctionalDependency& fd) {
  return is_subset(fd.rhs, fd_closure(fd.lhs, sigma));
}

struct SequentialProof {
  std::vector<Atom> atoms;
};

// A sequential proof for Z -> w using only atoms whose relation names are in
// allowed. Empty when w ∈ Z.
inline std::optional<SequentialProof> sequential_proof(
    const Query& q, const VarSet& z, const std::string& w,
    const std::vector<std::string>& allowed) {
  SequentialProof proof;
  if (z.count(w)) return proof;
  VarSet derived = z;
  std::vector<bool> used(q.size(), false);
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (used[i]) continue;
      const Atom& a = q[i];
      bool ok = false;
      for (const auto& n : allowed) ok = ok || n == a.name();
      if (!ok || !is_subset(a.key_vars(), derived)) continue;
      used[i] = true;
      progress = true;
      proof.atoms.push_back(a);
      auto v = a.vars();
      derived.insert(v.begin(), v.end());
      if (derived.count(w)) return proof;
    }
  }
  return std::nullopt;
}

}  // namespace cqa
