/* Copyright 2026 The replimerge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace replimerge;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("replimerge_wf_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

/// Runs the two-author scenario and returns the workspace.
workflow::Workspace run_scenario(const fs::path& dir) {
  workflow::Workspace ws(dir);
  ws.init(reference::kGrammarText, {{"a1", "A,B"}, {"a2", "A,C"}}, "(? A)");
  ws.checkout("a1");
  ws.checkout("a2");
  ws.edit("a2", "e", "P1");
  ws.edit("a2", "1", "P5");
  ws.sync();
  ws.edit("a1", "1", "P1");
  ws.edit("a2", "1.1", "P2");
  ws.sync();
  return ws;
}

}  // namespace

TEST_CASE("workflow scenario", "[workflow]") {
  auto dir = fresh_dir("scenario");
  workflow::Workspace ws(dir);
  ws.init(reference::kGrammarText, {{"a1", "A,B"}, {"a2", "A,C"}}, "(? A)");
  auto eg = ws.grammar();
  CHECK(ws.checkout("a1") == "(? A)\n");
  CHECK(ws.checkout("a2") == "(? A)\n");
  CHECK(ws.edit("a2", "e", "P1") == "(A (? C))");
  CHECK(ws.edit("a2", "1", "P5") == "(A (C (? A) (? C)))");
  auto first = ws.sync();
  CHECK(to_sexpr(first.global) == "(P1 (P5 (? A) (? C)) (? B))");
  CHECK(to_sexpr(ws.replica(eg, {"a1", "A,B"})) == "(A (? A) (? B))");

  CHECK(ws.edit("a1", "1", "P1") == "(A (A (? B)) (? B))");
  CHECK(ws.edit("a2", "1.1", "P2") == "(A (C (A) (? C)))");
  auto second = ws.sync();
  const auto& g = second.global;
  CHECK(conforms(eg, g, "A").status != Conformance::invalid);
  auto w = NodeAddress::parse("1.1");
  REQUIRE(g.contains(w));
  CHECK(g.at(w) == DocTree::bud("A"));
  auto m = ws.load();
  for (const auto& a : m.authors)
    CHECK(ws.replica(eg, a) == project(eg, g, parse_view(eg, a.view)));
  CHECK(m.history.back().event == "sync");
  CHECK(m.history.back().alternatives == second.alternatives.size());
  CHECK(second.alternatives.front() == g);
}

TEST_CASE("workflow replay is byte identical", "[workflow]") {
  auto d1 = fresh_dir("replay1"), d2 = fresh_dir("replay2");
  run_scenario(d1);
  run_scenario(d2);
  for (const auto& rel : {"manifest.json", "grammar.txt", "global.txt", "replicas/a1.txt",
                          "replicas/a2.txt"})
    CHECK(slurp(d1 / rel) == slurp(d2 / rel));
  CHECK_FALSE(fs::exists(d1 / ".lock"));
}

TEST_CASE("workflow rejects bad input", "[workflow]") {
  auto dir = fresh_dir("errors");
  workflow::Workspace ws(dir);
  CHECK_THROWS_AS(ws.status(), ValidationError);
  CHECK_THROWS_AS(ws.init(reference::kGrammarText, {{"a1", "B"}}, "(? A)"), ValidationError);
  CHECK_THROWS_AS(ws.init(reference::kGrammarText, {{"a1", "A"}, {"a1", "A,B"}}, "(? A)"),
                  ValidationError);
  CHECK_THROWS_AS(ws.init(reference::kGrammarText, {}, "(? A)"), ValidationError);
  ws.init(reference::kGrammarText, {{"a1", "A,B"}}, "(? A)");
  CHECK_THROWS_AS(ws.checkout("nobody"), ValidationError);
  CHECK_THROWS_AS(ws.edit("a1", "e", "P7"), TypeMismatch);
  CHECK_THROWS_AS(ws.edit("a1", "2", "P2"), AddressError);
  ws.edit("a1", "e", "P2");
  CHECK_THROWS_AS(ws.edit("a1", "e", "P2"), NotABud);
}

TEST_CASE("workflow refuses unrealizable edits", "[workflow]") {
  auto dir = fresh_dir("unrealizable");
  workflow::Workspace ws(dir);
  ws.init(reference::kGrammarText, {{"a1", "A,B"}}, "(? A)");
  // A replica no global document projects onto once its bud is closed.
  write_file(ws.replica_path("a1").string(), "(A (? A) (B))\n");
  auto before = slurp(ws.manifest_path());
  CHECK_THROWS_AS(ws.edit("a1", "1", "P2"), UnrealizableEdit);
  CHECK(slurp(ws.replica_path("a1")) == "(A (? A) (B))\n");
  CHECK(slurp(ws.manifest_path()) == before);
}

TEST_CASE("workspace lock", "[workflow]") {
  auto dir = fresh_dir("lock");
  workflow::Workspace ws(dir);
  ws.init(reference::kGrammarText, {{"a1", "A,B"}}, "(? A)");
  {
    workflow::WorkspaceLock held(dir);
    CHECK_THROWS_AS(ws.sync(), ValidationError);
  }
  CHECK_NOTHROW(ws.sync());
}

TEST_CASE("cli exit codes", "[workflow][cli]") {
  const char* cli = std::getenv("REPLIMERGE_CLI");
  if (!cli) SKIP("REPLIMERGE_CLI not set");
  auto dir = fresh_dir("cli");
  fs::create_directories(dir);
  write_file((dir / "g8.txt").string(), reference::kGrammarText);
  write_file((dir / "bad.txt").string(), "axiom A\nP1 A -> B\n");
  write_file((dir / "doc.txt").string(), "(P1 (P7) (P3 (P7) (P2)))\n");
  write_file((dir / "tv1.txt").string(), std::string(reference::kTv1) + "\n");
  write_file((dir / "tv2.txt").string(), std::string(reference::kTv2) + "\n");
  auto run = [&](const std::string& args) {
    std::string cmd = std::string(cli) + " " + args + " > " + (dir / "out.txt").string() +
                      " 2> " + (dir / "err.txt").string();
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  auto g = (dir / "g8.txt").string();
  CHECK(run("validate --grammar " + g) == 0);
  CHECK(run("no-such-command") == 1);
  CHECK(run("validate --grammar " + (dir / "bad.txt").string()) == 2);
  CHECK(run("project --grammar " + g + " --doc " + (dir / "doc.txt").string() +
            " --view B,C") == 3);
  CHECK(run("project --grammar " + g + " --doc " + (dir / "doc.txt").string() +
            " --view A,C --dyck") == 0);
  CHECK(slurp(dir / "out.txt") == "([][]())\n");
  CHECK(run("expand --grammar " + g + " --replica " + (dir / "tv2.txt").string() +
            ":A,C --budget 3") == 5);
  CHECK(run("merge --grammar " + g + " --replica " + (dir / "tv1.txt").string() +
            ":A,B --replica " + (dir / "tv2.txt").string() + ":A,C --simplest") == 0);
  auto out = slurp(dir / "out.txt");
  CHECK(out.rfind("# 19 states, 4 exit states\n", 0) == 0);
}
