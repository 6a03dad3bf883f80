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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cqa/cli.hpp"
#include "cqa/cqa.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cqa::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const char* name) { return oracle::fixture_path(name); }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("cqa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    std::string path = (dir_ / name).string();
    std::ofstream(path) << text;
    return path;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ClassifyExitCodes) {
  auto fo = write("fo.cqa", "q :- A(x|y), B(y|z).\n");
  auto r = cli({"classify", "-q", fo});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("class: FO"), std::string::npos) << r.out;

  r = cli({"classify", "-q", fx("q1.cqa")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("R => U weak via R -y-> U"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("saturation: none"), std::string::npos);

  // The internal-FD fixture itself has a strong cycle.
  EXPECT_EQ(cli({"classify", "-q", fx("qsat.cqa")}).code, 2);

  // A generated query that saturation extends.
  cqa::GenOptions o;
  o.logspace_only = false;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    cqa::Query q = cqa::generate_instance(seed, o).query;
    if (cqa::classify_complexity(q) == cqa::ComplexityClass::CONP_COMPLETE) continue;
    auto sat = cqa::saturate(q);
    if (sat.added.empty()) continue;
    r = cli({"classify", "-q", write("sat.cqa", cqa::to_string(q) + "\n")});
    EXPECT_EQ(r.code, cqa::classify_complexity(q) == cqa::ComplexityClass::FO ? 0 : 1);
    const auto& st = sat.added.front();
    EXPECT_NE(r.out.find(cqa::to_string(st.atom) + " from " + st.host), std::string::npos)
        << r.out;
    break;
  }

  r = cli({"classify", "-q", fx("strong_pair.cqa")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("strong"), std::string::npos);
}

TEST_F(CliTest, Errors) {
  EXPECT_EQ(cli({"classify", "-q", path("missing.cqa")}).code, cqa::kExitError);
  auto bad = write("bad.cqa", "q :- R(x|y), R(y|x).\n");
  auto r = cli({"classify", "-q", bad});
  EXPECT_EQ(r.code, cqa::kExitError);
  EXPECT_NE(r.err.find("self-join"), std::string::npos) << r.err;
  EXPECT_EQ(cli({}).code, cqa::kExitError);
  EXPECT_EQ(cli({"bogus"}).code, cqa::kExitError);
  EXPECT_EQ(cli({"--help"}).code, 0);
}

TEST_F(CliTest, RewriteRefusesCoNP) {
  auto r = cli({"rewrite", "-q", fx("strong_pair.cqa")});
  EXPECT_EQ(r.code, cqa::kExitError);
  EXPECT_NE(r.err.find("strong cycle"), std::string::npos) << r.err;
}

TEST_F(CliTest, RewriteAndRun) {
  auto dl = path("c3.dl");
  ASSERT_EQ(cli({"rewrite", "-q", fx("c3.cqa"), "-o", dl, "--faithful"}).code, 0);
  auto p = cqa::datalog::parse_program(oracle::read_file(dl));
  EXPECT_EQ(p.manifest_value("mode"), "faithful");
  EXPECT_TRUE(cqa::datalog::validate(p).ok());
  auto r = cli({"run", "-p", dl, "-d", fx("dbgt.facts")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "false\n");

  auto g = cli({"rewrite", "-q", fx("rs.cqa"), "--program", "garbage"});
  EXPECT_EQ(g.code, 0) << g.err;
  EXPECT_NE(g.out.find("# kind: garbage"), std::string::npos);
  EXPECT_EQ(cli({"rewrite", "-q", fx("qsat.cqa"), "--program", "reduction"}).code,
            cqa::kExitError);
  EXPECT_EQ(cli({"rewrite", "-q", fx("rs.cqa"), "--program", "nope"}).code, cqa::kExitError);
}

TEST_F(CliTest, EvalAndOracle) {
  auto r = cli({"eval", "-q", fx("c3.cqa"), "-d", fx("dbgt.facts")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "false\n");
  r = cli({"eval", "-q", fx("c3.cqa"), "-d", fx("dbgt.facts"), "--trace", "--descending"});
  EXPECT_NE(r.out.find("garbage: R -> S -> T, 9 facts in 6 blocks"), std::string::npos) << r.out;
  EXPECT_EQ(cli({"oracle", "-q", fx("c3.cqa"), "-d", fx("dbgt.facts")}).out, "false\n");

  auto hard = write("hard.facts", "R(a|1).\nR(a|2).\nS(b|1).\nS(c|2).\n");
  r = cli({"eval", "-q", fx("strong_pair.cqa"), "-d", hard});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  EXPECT_EQ(cli({"eval", "-q", fx("c3.cqa")}).code, cqa::kExitError);
}

TEST_F(CliTest, GraphExport) {
  auto r = cli({"graph", "-q", fx("c3.cqa"), "-d", fx("dbgt.facts"), "--kind", "quotient"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u) << r.out;
  std::size_t arrows = 0;
  for (std::size_t p = r.out.find("->"); p != std::string::npos; p = r.out.find("->", p + 2))
    ++arrows;
  EXPECT_EQ(arrows, 9u);
  for (const char* kind : {"attack", "mgraph"})
    EXPECT_EQ(cli({"graph", "-q", fx("q1.cqa"), "--kind", kind}).code, 0) << kind;
  for (const char* kind : {"hook", "chook"})
    EXPECT_EQ(cli({"graph", "-q", fx("q1.cqa"), "-d", fx("dbq1.facts"), "--kind", kind}).code, 0)
        << kind;
  EXPECT_EQ(cli({"graph", "-q", fx("c3.cqa"), "--kind", "chook"}).code, cqa::kExitError);
  EXPECT_EQ(cli({"graph", "-q", fx("c3.cqa"), "--kind", "bogus"}).code, cqa::kExitError);
}

TEST_F(CliTest, GenAndDiff) {
  auto out = path("corpus");
  ASSERT_EQ(cli({"gen", "--seed", "3", "--count", "4", "-o", out}).code, 0);
  for (int s = 3; s < 7; ++s) {
    auto base = out + "/inst_" + std::to_string(s);
    ASSERT_TRUE(fs::exists(base + ".cqa"));
    cqa::Query q = cqa::parse_query(oracle::read_file(base + ".cqa"));
    cqa::Database db = cqa::parse_database(oracle::read_file(base + ".facts"), q);
    EXPECT_EQ(q, cqa::generate_instance(s).query);
    EXPECT_EQ(db, cqa::generate_instance(s).db);
  }
  auto r = cli({"diff", "--seed", "1", "--count", "25"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("25/25 instances agree"), std::string::npos) << r.out;
  r = cli({"diff", "-q", fx("c3.cqa"), "-d", fx("dbgt.facts"), "--faithful", "--descending"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("1/1 instances agree"), std::string::npos);
}

}  // namespace
