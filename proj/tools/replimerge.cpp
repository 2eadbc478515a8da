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

// Command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 parse error, 3 validation error (also
// used when oracle-check finds a disagreement), 4 root-type conflict,
// 5 budget exceeded.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "replimerge/replimerge.hpp"

namespace rm = replimerge;

namespace {

struct Common {
  std::string grammar;
  std::string view;
  std::string doc;
  std::vector<std::string> replicas;
  std::size_t max_nodes = 12;
  bool simplest = false;
  bool dyck = false;
  bool no_trim = false;
  std::string dot;
  std::size_t budget = 100000;
};

rm::ExtendedGrammar load_grammar(const std::string& path) {
  if (path.empty()) throw rm::ValidationError("--grammar is required");
  return rm::ExtendedGrammar(rm::parse_grammar(rm::read_file(path)));
}

/// FILE:VIEW, split at the first ':'.
rm::Replica load_replica(const rm::ExtendedGrammar& eg, const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw rm::ParseError("--replica expects FILE:VIEW, got '" + spec + "'", 0);
  rm::View v = rm::parse_view(eg, spec.substr(colon + 1));
  auto r = rm::parse_view_tree(v, rm::read_file(spec.substr(0, colon)), eg.axiom());
  return {v, r};
}

void print_trees(const std::vector<rm::DocTree>& ts) {
  for (const auto& t : ts) std::cout << rm::to_sexpr(t) << "\n";
}

void maybe_dot(const Common& c, const rm::Rooted& a) {
  if (c.dot.empty()) return;
  std::ofstream out(c.dot);
  if (!out) throw rm::ValidationError("cannot write " + c.dot);
  rm::write_dot(*a, a.initial, out, c.budget);
}

std::size_t count_exits(const rm::Rooted& a, const std::vector<rm::StateId>& states) {
  std::size_t n = 0;
  for (auto q : states) n += a->is_exit(q) ? 1 : 0;
  return n;
}

int cmd_validate(const Common& c) {
  auto eg = load_grammar(c.grammar);
  std::cout << "grammar ok: " << eg.base().sorts().size() << " sorts, "
            << eg.base().productions().size() << " productions, axiom "
            << eg.axiom() << "\n";
  if (!c.doc.empty()) {
    auto t = rm::parse_doc_tree(rm::read_file(c.doc));
    auto r = rm::conforms(eg, t, eg.axiom());
    if (r.status == rm::Conformance::invalid)
      throw rm::ValidationError("document invalid at " + r.where.str() + ": " + r.reason);
    std::cout << "document ok: "
              << (r.status == rm::Conformance::closed ? "closed" : "open") << ", "
              << t.size() << " nodes\n";
  }
  for (const auto& spec : c.replicas) {
    auto rep = load_replica(eg, spec);
    std::cout << "replica ok: " << rm::to_sexpr(rep.tree) << "\n";
  }
  return 0;
}

int cmd_project(const Common& c) {
  auto eg = load_grammar(c.grammar);
  if (c.doc.empty() || c.view.empty())
    throw rm::ValidationError("project needs --doc and --view");
  auto v = rm::parse_view(eg, c.view);
  auto t = rm::parse_doc_tree(eg, rm::read_file(c.doc), eg.axiom());
  auto r = rm::project(eg, t, v);
  std::cout << (c.dyck ? rm::render_dyck({r}, v) : rm::to_sexpr(r)) << "\n";
  return 0;
}

int cmd_expand(const Common& c) {
  auto eg = load_grammar(c.grammar);
  if (c.replicas.size() != 1) throw rm::ValidationError("expand needs one --replica");
  auto rep = load_replica(eg, c.replicas.front());
  auto a = rm::expansion_automaton(eg, rep.view, rep.tree);
  auto states = rm::reachable_states(a, c.budget);
  std::cout << "# " << states.size() << " states, " << count_exits(a, states)
            << " exit states\n";
  maybe_dot(c, a);
  if (!c.no_trim) a = rm::trim(a, c.budget);
  print_trees(c.simplest ? rm::simplest_asts(a, c.budget) : rm::enumerate(a, c.max_nodes));
  return 0;
}

int cmd_merge(const Common& c) {
  auto eg = load_grammar(c.grammar);
  if (c.replicas.empty()) throw rm::ValidationError("merge needs at least one --replica");
  std::vector<rm::Replica> reps;
  for (const auto& s : c.replicas) reps.push_back(load_replica(eg, s));
  rm::MergeOptions opt;
  opt.mode = c.simplest ? rm::MergeMode::simplest : rm::MergeMode::enumerate;
  opt.bound = c.max_nodes;
  opt.budget = c.budget;
  opt.trim_expansions = !c.no_trim;
  auto sc = rm::consensus_automaton(eg, reps, opt);
  auto states = rm::reachable_states(sc, c.budget);
  std::cout << "# " << states.size() << " states, " << count_exits(sc, states)
            << " exit states\n";
  maybe_dot(c, sc);
  print_trees(c.simplest ? rm::simplest_asts(sc, c.budget) : rm::enumerate(sc, c.max_nodes));
  return 0;
}

int cmd_oracle(const Common& c, std::size_t random_count, std::uint64_t seed) {
  rm::EquivalenceOptions opt;
  opt.bound = c.max_nodes;
  opt.trim_expansions = !c.no_trim;
  opt.budget = c.budget;
  bool all_ok = true;
  if (random_count > 0) {
    for (std::size_t i = 0; i < random_count; ++i) {
      auto inst = rm::random_instance(seed + i);
      auto rep = rm::check_equivalence(inst.eg, inst.replicas, opt);
      auto j = rm::to_json(rep);
      j["seed"] = seed + i;
      j["grammar"] = rm::grammar_to_text(inst.grammar);
      j["replicas"] = nlohmann::json::array();
      for (const auto& r : inst.replicas)
        j["replicas"].push_back({{"view", r.view.str()}, {"tree", rm::to_sexpr(r.tree)}});
      std::cout << j.dump() << "\n";
      all_ok = all_ok && rep.ok();
    }
  } else {
    auto eg = load_grammar(c.grammar);
    std::vector<rm::Replica> reps;
    for (const auto& s : c.replicas) reps.push_back(load_replica(eg, s));
    if (reps.empty()) throw rm::ValidationError("oracle-check needs --replica or --random");
    auto rep = rm::check_equivalence(eg, reps, opt);
    std::cout << rm::to_json(rep).dump() << "\n";
    all_ok = rep.ok();
  }
  return all_ok ? 0 : 3;
}

void print_automaton(const rm::Rooted& a, const std::vector<rm::StateId>& states) {
  std::map<rm::StateId, std::size_t> number;
  for (std::size_t i = 0; i < states.size(); ++i) number[states[i]] = i;
  for (auto q : states) {
    std::cout << "  q" << number[q] << " = <" << a->key(q) << ">"
              << (a->is_exit(q) ? "  [exit]" : "") << "\n";
    for (const auto& tr : a->next(q)) {
      std::cout << "      -> (" << tr.label.str() << ", [";
      for (std::size_t i = 0; i < tr.children.size(); ++i)
        std::cout << (i ? ", " : "") << "q" << number[tr.children[i]];
      std::cout << "])\n";
    }
  }
}

int cmd_demo(const Common& c) {
  auto eg = rm::reference::extended();
  auto reps = rm::reference::replicas(eg);
  std::cout << "grammar:\n" << rm::reference::kGrammarText << "\n";
  const char* names[] = {"tv1", "tv2"};
  for (std::size_t i = 0; i < reps.size(); ++i) {
    auto a = rm::expansion_automaton(eg, reps[i].view, reps[i].tree);
    auto states = rm::reachable_states(a, c.budget);
    std::cout << names[i] << " over {" << reps[i].view.str()
              << "}: " << rm::render_dyck({reps[i].tree}, reps[i].view) << "\n"
              << "expansion automaton: " << states.size() << " states, "
              << count_exits(a, states) << " exit states\n";
    print_automaton(a, states);
    std::cout << "\n";
  }
  for (bool trimmed : {false, true}) {
    rm::MergeOptions opt;
    opt.trim_expansions = trimmed;
    opt.budget = c.budget;
    auto sc = rm::consensus_automaton(eg, reps, opt);
    auto states = rm::reachable_states(sc, c.budget);
    std::cout << "consensus product (" << (trimmed ? "trimmed" : "raw")
              << " expansions): " << states.size() << " states, "
              << count_exits(sc, states) << " exit states\n";
    if (!trimmed) print_automaton(sc, states);
    auto simplest = rm::simplest_asts(sc, c.budget);
    std::cout << "simplest consensus documents: " << simplest.size() << "\n";
    print_trees(simplest);
    std::cout << "\n";
  }
  return 0;
}

/// NAME=VIEW, split at the first '='.
rm::workflow::Author parse_author(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw rm::ParseError("--author expects NAME=VIEW, got '" + spec + "'", 0);
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consensual merging of partial replicas of structured documents"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--grammar", c.grammar, "Grammar file");
    sub->add_option("--view", c.view, "View, e.g. A,B or A=(),B=[]");
    sub->add_option("--doc", c.doc, "Document file (AST form)");
    sub->add_option("--replica", c.replicas, "Replica FILE:VIEW (repeatable)");
    sub->add_option("--max-nodes", c.max_nodes, "Enumeration bound")->capture_default_str();
    sub->add_flag("--simplest", c.simplest, "List simplest documents instead of enumerating");
    sub->add_flag("--dyck", c.dyck, "Print replicas as Dyck words");
    sub->add_flag("--no-trim", c.no_trim,
                  "Keep states with an empty language in the expansions");
    sub->add_option("--dot", c.dot, "Write the automaton as Graphviz");
    sub->add_option("--budget", c.budget, "State budget")->capture_default_str();
  };

  auto* validate = app.add_subcommand("validate", "Check a grammar, document or replicas");
  add_common(validate);
  auto* project = app.add_subcommand("project", "Project a document onto a view");
  add_common(project);
  auto* expand = app.add_subcommand("expand", "Expansion of a replica");
  add_common(expand);
  auto* merge = app.add_subcommand("merge", "Consensual merge of replicas");
  add_common(merge);
  auto* oracle = app.add_subcommand("oracle-check", "Compare automata with brute force");
  add_common(oracle);
  std::size_t random_count = 0;
  std::uint64_t seed = 1;
  oracle->add_option("--random", random_count, "Number of random instances");
  oracle->add_option("--seed", seed, "First random seed")->capture_default_str();
  auto* demo = app.add_subcommand("demo-appendix-a", "Two-author reference instance");
  add_common(demo);

  auto* wf = app.add_subcommand("workflow", "Scripted editing workflow");
  wf->require_subcommand(1);
  std::string dir = ".", author, address, production, initial = "";
  std::vector<std::string> authors;
  auto* wf_init = wf->add_subcommand("init", "Create a workspace");
  wf_init->add_option("--dir", dir, "Workspace directory")->required();
  wf_init->add_option("--grammar", c.grammar, "Grammar file")->required();
  wf_init->add_option("--author", authors, "Author NAME=VIEW (repeatable)")->required();
  wf_init->add_option("--doc", c.doc, "Initial document file (default: axiom bud)");
  wf_init->add_flag("--no-trim", c.no_trim, "Merge without trimming expansions");
  auto* wf_checkout = wf->add_subcommand("checkout", "Refresh an author's replica");
  wf_checkout->add_option("--dir", dir, "Workspace directory")->required();
  wf_checkout->add_option("--author", author, "Author name")->required();
  auto* wf_edit = wf->add_subcommand("edit", "Develop a bud of a replica");
  wf_edit->add_option("--dir", dir, "Workspace directory")->required();
  wf_edit->add_option("--author", author, "Author name")->required();
  wf_edit->add_option("--address", address, "Bud address, e.g. 1.2 or e")->required();
  wf_edit->add_option("--production", production, "Production name")->required();
  auto* wf_sync = wf->add_subcommand("sync", "Merge replicas and redistribute");
  wf_sync->add_option("--dir", dir, "Workspace directory")->required();
  auto* wf_status = wf->add_subcommand("status", "Show the workspace");
  wf_status->add_option("--dir", dir, "Workspace directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (validate->parsed()) return cmd_validate(c);
    if (project->parsed()) return cmd_project(c);
    if (expand->parsed()) return cmd_expand(c);
    if (merge->parsed()) return cmd_merge(c);
    if (oracle->parsed()) return cmd_oracle(c, random_count, seed);
    if (demo->parsed()) return cmd_demo(c);
    rm::workflow::Workspace ws(dir);
    if (wf_init->parsed()) {
      std::vector<rm::workflow::Author> list;
      for (const auto& a : authors) list.push_back(parse_author(a));
      std::string grammar_text = rm::read_file(c.grammar);
      std::string doc;
      if (c.doc.empty())
        doc = "(? " + rm::parse_grammar(grammar_text).axiom() + ")";
      else
        doc = rm::read_file(c.doc);
      ws.init(grammar_text, list, doc, !c.no_trim);
      std::cout << ws.status();
    } else if (wf_checkout->parsed()) {
      std::cout << ws.checkout(author);
    } else if (wf_edit->parsed()) {
      std::cout << ws.edit(author, address, production) << "\n";
    } else if (wf_sync->parsed()) {
      auto res = ws.sync(c.budget);
      std::cout << "chose " << rm::to_sexpr(res.global) << " (1 of "
                << res.alternatives.size() << ")\n";
    } else if (wf_status->parsed()) {
      std::cout << ws.status();
    }
    return 0;
  } catch (const rm::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const rm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const rm::RootTypeConflict& e) {
    std::cerr << "no consensus: " << e.what() << "\n";
    return 4;
  } catch (const rm::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 5;
  } catch (const rm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
