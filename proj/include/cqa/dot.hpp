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

// Graphviz export of the analysis graphs.

#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "cqa/attack.hpp"
#include "cqa/graph.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/text.hpp"

namespace cqa {

namespace dot_detail {

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

inline std::string render(
    const std::string& name, const std::vector<std::string>& labels,
    const Digraph& g,
    const std::function<std::string(std::size_t, std::size_t)>& edge_attrs = {}) {
  std::string out = "digraph " + name + " {\n";
  for (std::size_t v = 0; v < labels.size(); ++v)
    out += "  n" + std::to_string(v) + " [label=\"" + escape(labels[v]) + "\"];\n";
  for (auto [u, v] : g.edges()) {
    out += "  n" + std::to_string(u) + " -> n" + std::to_string(v);
    std::string attrs = edge_attrs ? edge_attrs(u, v) : "";
    if (!attrs.empty()) out += " [" + attrs + "]";
    out += ";\n";
  }
  return out + "}\n";
}

inline std::vector<std::string> atom_labels(const Query& q) {
  std::vector<std::string> out;
  for (const auto& a : q.atoms()) out.push_back(to_string(a));
  return out;
}

inline std::vector<std::string> fact_labels(const std::vector<Fact>& facts) {
  std::vector<std::string> out;
  for (const auto& f : facts) out.push_back(to_string(f));
  return out;
}

}  // namespace dot_detail

// Weak attacks dashed, strong attacks solid; labels name the witness.
inline std::string attack_graph_dot(const AttackGraph& g) {
  return dot_detail::render(
      "attack", dot_detail::atom_labels(g.query), g.graph,
      [&](std::size_t u, std::size_t v) {
        const AttackEdge* e = g.edge(u, v);
        std::string label;
        for (const auto& l : e->witness.labels) label += (label.empty() ? "" : ",") + l;
        return std::string(e->strength == Strength::weak ? "style=dashed"
                                                         : "style=solid") +
               ", label=\"" + dot_detail::escape(label) + "\"";
      });
}

inline std::string m_graph_dot(const MGraph& m) {
  return dot_detail::render("mgraph", dot_detail::atom_labels(m.query), m.graph);
}

inline std::string hook_graph_dot(const HookGraph& h) {
  return dot_detail::render("hook", dot_detail::fact_labels(h.facts), h.graph);
}

inline std::string chook_graph_dot(const CHookGraph& h) {
  return dot_detail::render("chook", dot_detail::fact_labels(h.facts), h.graph);
}

// Block vertices are labelled by their key values.
inline std::string block_quotient_dot(const BlockQuotientGraph& b) {
  std::vector<std::string> labels;
  for (const auto& k : b.blocks) {
    std::string l;
    for (const auto& c : k.key) l += (l.empty() ? "" : ",") + to_string(c, true);
    labels.push_back(l);
  }
  return dot_detail::render("quotient", labels, b.graph);
}

}  // namespace cqa
