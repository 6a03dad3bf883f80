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

// The cqa command line. Exit codes: classify returns 0/1/2 for FO, L and
// coNP; diff returns 1 on a mismatch; every error returns 3.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cqa/attack.hpp"
#include "cqa/codegen.hpp"
#include "cqa/datalog/engine.hpp"
#include "cqa/datalog/text.hpp"
#include "cqa/datalog/validate.hpp"
#include "cqa/dot.hpp"
#include "cqa/generator.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/pipeline.hpp"
#include "cqa/plan.hpp"
#include "cqa/saturation.hpp"
#include "cqa/text.hpp"

namespace cqa {

inline constexpr int kExitError = 3;

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void write_output(const std::string& path, const std::string& text,
                         std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

inline datalog::RelationStore raw_edb(const std::string& src) {
  datalog::RelationStore out;
  for (auto& f : parse_raw_facts(src)) {
    std::vector<Constant> t = f.key;
    t.insert(t.end(), f.value.begin(), f.value.end());
    out[f.relation].insert(std::move(t));
  }
  return out;
}

inline std::string classify_report(const Query& q) {
  std::ostringstream out;
  AttackGraph g = attack_graph(q);
  out << "class: " << to_string(classify_complexity(g)) << "\n";
  out << "key-join: " << (has_key_join_property(q) ? "true" : "false") << "\n";
  out << "attacks:\n";
  for (const auto& e : g.edges) {
    out << "  " << q[e.from].name() << " => " << q[e.to].name() << " "
        << (e.strength == Strength::weak ? "weak" : "strong") << " via ";
    for (std::size_t i = 0; i < e.witness.atoms.size(); ++i) {
      if (i) out << " -" << e.witness.labels[i - 1] << "-> ";
      out << q[e.witness.atoms[i]].name();
    }
    out << "\n";
  }
  if (classify_complexity(g) != ComplexityClass::CONP_COMPLETE) {
    auto s = saturate(q);
    out << "saturation:";
    if (s.added.empty()) out << " none";
    out << "\n";
    for (const auto& st : s.added)
      out << "  " << to_string(st.atom) << " from " << st.host << "\n";
  }
  return out.str();
}

struct Verdicts {
  bool direct = false, datalog = false, oracle = false;
  bool agree() const { return direct == datalog && datalog == oracle; }
};

inline Verdicts three_way(const Query& q, const Database& db, const EmitOptions& eo,
                          ConstantOrder order, std::uint64_t cap) {
  Verdicts v;
  DirectOptions d;
  d.order = order;
  d.oracle_cap = cap;
  v.direct = certain_answer_direct(q, db, d).answer;
  auto p = compose_pipeline(q, eo);
  v.datalog = datalog::holds(datalog::evaluate(p, datalog::edb_from(db), {order}), p.goal);
  v.oracle = certain_answer_oracle(q, db, cap);
  return v;
}

// Greedily drops facts while the three verdicts still disagree.
inline Database minimize(const Query& q, Database db, const EmitOptions& eo,
                         ConstantOrder order, std::uint64_t cap) {
  bool shrunk = true;
  while (shrunk) {
    shrunk = false;
    for (const auto& f : std::vector<Fact>(db.facts().begin(), db.facts().end())) {
      Database smaller = db;
      smaller.erase(f);
      if (!three_way(q, smaller, eo, order, cap).agree()) {
        db = std::move(smaller);
        shrunk = true;
      }
    }
  }
  return db;
}

inline std::string verdict(bool b) { return b ? "true" : "false"; }

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  using namespace cli_detail;
  CLI::App app{"Consistent query answering for primary keys"};
  app.require_subcommand(1);

  std::string qfile, dfile, ofile, pfile, kind = "attack", program = "pipeline";
  std::uint64_t seed = 1, cap = kDefaultRepairCap;
  std::size_t count = 1;
  bool faithful = false, descending = false, trace = false;
  GenOptions gen;

  auto order = [&] {
    return descending ? ConstantOrder::descending : ConstantOrder::ascending;
  };
  auto add_query = [&](CLI::App* c) {
    c->add_option("-q,--query", qfile, "query file")->required();
  };
  auto add_db = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("-d,--db", dfile, "facts file");
    if (required) o->required();
  };

  auto* classify = app.add_subcommand("classify", "complexity class and attack graph");
  add_query(classify);

  auto* rewrite = app.add_subcommand("rewrite", "emit Datalog for a query");
  add_query(rewrite);
  rewrite->add_option("-o,--out", ofile, "output file");
  rewrite->add_option("--program", program, "pipeline, garbage or reduction")
      ->check(CLI::IsMember({"pipeline", "garbage", "reduction"}));
  rewrite->add_flag("--faithful", faithful, "eq_R/diseq_R predicates instead of built-ins");

  auto* eval = app.add_subcommand("eval", "certain answer by the direct pipeline");
  add_query(eval);
  add_db(eval, true);
  eval->add_flag("--trace", trace, "print the stage trace");
  eval->add_flag("--descending", descending, "reverse the constant order");
  eval->add_option("--cap", cap, "repair cap for the coNP fallback");

  auto* oracle = app.add_subcommand("oracle", "certain answer by repair enumeration");
  add_query(oracle);
  add_db(oracle, true);
  oracle->add_option("--cap", cap, "repair cap");

  auto* run = app.add_subcommand("run", "evaluate a .dl program on a .facts file");
  run->add_option("-p,--program", pfile, ".dl file")->required();
  add_db(run, true);
  run->add_flag("--descending", descending, "reverse the constant order");

  auto* graph = app.add_subcommand("graph", "DOT export");
  add_query(graph);
  add_db(graph, false);
  graph->add_option("--kind", kind, "attack, mgraph, hook, chook or quotient")
      ->check(CLI::IsMember({"attack", "mgraph", "hook", "chook", "quotient"}));
  graph->add_option("-o,--out", ofile, "output file");

  auto* genc = app.add_subcommand("gen", "seeded random instances");
  genc->add_option("--seed", seed, "first seed");
  genc->add_option("--count", count, "number of instances");
  genc->add_option("-o,--out", ofile, "output directory (stdout if absent)");
  genc->add_option("--atoms", gen.max_atoms, "maximum atoms per query");
  genc->add_option("--arity", gen.max_arity, "maximum arity");
  genc->add_option("--block", gen.max_block, "maximum block size");
  genc->add_option("--key-join-bias", gen.key_join_bias, "share of key-join queries");
  genc->add_option("--cycle-bias", gen.cycle_bias, "share of planted M-cycles");
  genc->add_option("--cap", gen.repair_cap, "repair cap per database");

  auto* diff = app.add_subcommand("diff", "direct vs Datalog vs oracle");
  diff->add_option("-q,--query", qfile, "query file (else a generated corpus)");
  add_db(diff, false);
  diff->add_option("--seed", seed, "first seed");
  diff->add_option("--count", count, "number of generated instances");
  diff->add_option("--cap", cap, "repair cap");
  diff->add_flag("--faithful", faithful, "eq_R/diseq_R predicates instead of built-ins");
  diff->add_flag("--descending", descending, "reverse the constant order");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitError;
  }

  try {
    EmitOptions eo{faithful};
    if (*classify) {
      Query q = parse_query(read_file(qfile));
      out << classify_report(q);
      switch (classify_complexity(q)) {
        case ComplexityClass::FO: return 0;
        case ComplexityClass::LSPACE_NOT_FO: return 1;
        case ComplexityClass::CONP_COMPLETE: return 2;
      }
    }
    if (*rewrite) {
      Query q = parse_query(read_file(qfile));
      datalog::Program p;
      if (program == "pipeline") {
        p = compose_pipeline(q, eo);
      } else {
        StagePlan plan = plan_stage(q, 0);
        if (plan.kind != StageKind::reduce || !plan.saturation.added.empty())
          throw Error("--program " + program +
                      " needs a saturated query whose first stage is an M-cycle reduction");
        p = program == "garbage"
                ? emit_garbage_program(q, plan.reduction.cycle, eo)
                : emit_reduction_program(q, plan.reduction.cycle, 0, eo);
      }
      write_output(ofile, datalog::print_program(p), out);
      return 0;
    }
    if (*eval) {
      Query q = parse_query(read_file(qfile));
      Database db = parse_database(read_file(dfile), q);
      DirectOptions d;
      d.order = order();
      d.oracle_cap = cap;
      auto r = certain_answer_direct(q, db, d);
      if (trace) out << r.trace_text();
      if (r.used_oracle) err << "warning: coNP-complete query, answered by the oracle\n";
      out << verdict(r.answer) << "\n";
      return 0;
    }
    if (*oracle) {
      Query q = parse_query(read_file(qfile));
      Database db = parse_database(read_file(dfile), q);
      out << verdict(certain_answer_oracle(q, db, cap)) << "\n";
      return 0;
    }
    if (*run) {
      datalog::Program p = datalog::parse_program(read_file(pfile));
      auto store = datalog::evaluate(p, raw_edb(read_file(dfile)), {order()});
      if (!p.goal.empty()) {
        out << verdict(datalog::holds(store, p.goal)) << "\n";
        return 0;
      }
      for (const auto& name : p.idb())
        for (const auto& t : store[name]) {
          out << name << "(";
          for (std::size_t i = 0; i < t.size(); ++i)
            out << (i ? ", " : "") << to_string(t[i], true);
          out << ").\n";
        }
      return 0;
    }
    if (*graph) {
      Query q = parse_query(read_file(qfile));
      std::string dot;
      if (kind == "attack") {
        dot = attack_graph_dot(attack_graph(q));
      } else if (kind == "mgraph") {
        dot = m_graph_dot(m_graph(q));
      } else {
        if (dfile.empty()) throw Error("--kind " + kind + " needs -d");
        Database db = parse_database(read_file(dfile), q);
        if (kind == "hook") {
          dot = hook_graph_dot(hook_graph(q, db));
        } else {
          if (!is_saturated(q)) throw Error("--kind " + kind + " needs a saturated query");
          CHookGraph h = chook_graph(q, find_mcycle(q), db);
          dot = kind == "chook" ? chook_graph_dot(h) : block_quotient_dot(block_quotient(h));
        }
      }
      write_output(ofile, dot, out);
      return 0;
    }
    if (*genc) {
      if (!ofile.empty()) std::filesystem::create_directories(ofile);
      for (std::size_t i = 0; i < count; ++i) {
        Instance inst = generate_instance(seed + i, gen);
        std::string qtext = "# seed " + std::to_string(inst.seed) + ", " +
                            to_string(inst.shape) + "\n" + to_string(inst.query) + "\n";
        std::string dtext = to_string(inst.db);
        if (ofile.empty()) {
          out << qtext << dtext << "\n";
        } else {
          std::string base = ofile + "/inst_" + std::to_string(inst.seed);
          write_output(base + ".cqa", qtext, out);
          write_output(base + ".facts", dtext, out);
        }
      }
      return 0;
    }
    if (*diff) {
      std::vector<Instance> corpus;
      if (!qfile.empty()) {
        if (dfile.empty()) throw Error("diff -q needs -d");
        Instance inst;
        inst.query = parse_query(read_file(qfile));
        inst.db = parse_database(read_file(dfile), inst.query);
        corpus.push_back(std::move(inst));
      } else {
        corpus = generate_corpus(seed, count);
      }
      std::size_t mismatches = 0;
      for (const auto& inst : corpus) {
        Verdicts v = three_way(inst.query, inst.db, eo, order(), cap);
        if (v.agree()) continue;
        ++mismatches;
        Database small = minimize(inst.query, inst.db, eo, order(), cap);
        Verdicts sv = three_way(inst.query, small, eo, order(), cap);
        out << "mismatch (seed " << inst.seed << "): direct=" << verdict(sv.direct)
            << " datalog=" << verdict(sv.datalog) << " oracle=" << verdict(sv.oracle)
            << "\n" << to_string(inst.query) << "\n" << to_string(small);
      }
      out << corpus.size() - mismatches << "/" << corpus.size() << " instances agree\n";
      return mismatches ? 1 : 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace cqa
