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
#pragma once

/** \file
 * On-disk replay of the asynchronous editing workflow.
 *
 * Workspace layout:
 *
 *     manifest.json        authors, views, history
 *     grammar.txt          copy of the document model
 *     global.txt           current global document (AST form)
 *     replicas/<name>.txt  partial replica of each author
 *
 * History entries carry a sequence number instead of a wall-clock time so
 * that replaying the same commands produces identical files.
 */

#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "replimerge/consensus.hpp"
#include "replimerge/error.hpp"
#include "replimerge/text_format.hpp"

namespace replimerge::workflow {

namespace fs = std::filesystem;

struct Author {
  std::string name;
  std::string view;  // view text, e.g. "A,B"
};

struct HistoryEntry {
  std::uint64_t sequence = 0;
  std::string event;
  std::size_t chosen = 0;
  std::size_t alternatives = 0;
};

struct Manifest {
  std::vector<Author> authors;
  std::vector<HistoryEntry> history;
  std::uint64_t sequence = 0;
  bool trim_expansions = true;
};

/// Exclusive lock on a workspace, released on destruction.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const fs::path& dir) : path_(dir / ".lock") {
    std::FILE* f = std::fopen(path_.string().c_str(), "wx");
    if (!f)
      throw ValidationError("workspace " + dir.string() +
                            " is locked by another command (remove " +
                            path_.string() + " if stale)");
    std::fclose(f);
  }
  ~WorkspaceLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  fs::path path_;
};

class Workspace {
 public:
  explicit Workspace(fs::path dir) : dir_(std::move(dir)) {}

  const fs::path& dir() const { return dir_; }
  fs::path manifest_path() const { return dir_ / "manifest.json"; }
  fs::path grammar_path() const { return dir_ / "grammar.txt"; }
  fs::path global_path() const { return dir_ / "global.txt"; }
  fs::path replica_path(const std::string& author) const {
    return dir_ / "replicas" / (author + ".txt");
  }

  /// Creates the workspace and projects the initial document for everyone.
  void init(const std::string& grammar_text, const std::vector<Author>& authors,
            const std::string& initial_doc, bool trim_expansions = true) {
    ExtendedGrammar eg(parse_grammar(grammar_text));
    DocTree global = parse_doc_tree(eg, initial_doc, eg.axiom());
    if (authors.empty()) throw ValidationError("a workflow needs at least one author");
    for (std::size_t i = 0; i < authors.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j)
        if (authors[i].name == authors[j].name)
          throw ValidationError("author '" + authors[i].name + "' listed twice");
      if (authors[i].name.empty() ||
          authors[i].name.find_first_of("/\\. ") != std::string::npos)
        throw ValidationError("invalid author name '" + authors[i].name + "'");
      parse_view(eg, authors[i].view);
    }
    fs::create_directories(dir_ / "replicas");
    WorkspaceLock lock(dir_);
    write_file(grammar_path().string(), grammar_text);
    write_file(global_path().string(), to_sexpr(global) + "\n");
    Manifest m;
    m.authors = authors;
    m.trim_expansions = trim_expansions;
    record(m, "init", 0, 1);
    for (const auto& a : authors) write_replica(eg, m, a, global);
    save(m);
  }

  /// Re-projects the global document for one author and returns the replica.
  std::string checkout(const std::string& author) {
    WorkspaceLock lock(dir_);
    auto m = load();
    auto eg = grammar();
    const Author& a = find(m, author);
    write_replica(eg, m, a, global(eg));
    record(m, "checkout " + author, 0, 1);
    save(m);
    return read_file(replica_path(author).string());
  }

  /// Develops the bud at `address` of the author's replica. The edit is
  /// rejected when no global document projects onto the new replica.
  std::string edit(const std::string& author, const std::string& address,
                   const std::string& production) {
    WorkspaceLock lock(dir_);
    auto m = load();
    auto eg = grammar();
    const Author& a = find(m, author);
    View v = parse_view(eg, a.view);
    ViewTree r = replica(eg, a);
    ViewTree edited = edit_view_tree(eg, v, r, NodeAddress::parse(address), production);
    auto e = expansion_automaton(eg, v, edited);
    if (!nonempty(e))
      throw UnrealizableEdit("no global document projects onto the edited replica of " +
                             author);
    write_file(replica_path(author).string(), to_sexpr(edited) + "\n");
    record(m, "edit " + author + " " + NodeAddress::parse(address).str() + " " + production,
           0, 1);
    save(m);
    return to_sexpr(edited);
  }

  struct SyncResult {
    DocTree global;
    std::vector<DocTree> alternatives;
  };

  /// Merges every replica, keeps the least consensus document and
  /// redistributes its projections.
  SyncResult sync(std::size_t budget = kDefaultStateBudget) {
    WorkspaceLock lock(dir_);
    auto m = load();
    auto eg = grammar();
    std::vector<Replica> reps;
    for (const auto& a : m.authors) reps.push_back({parse_view(eg, a.view), replica(eg, a)});
    MergeOptions opt;
    opt.budget = budget;
    opt.trim_expansions = m.trim_expansions;
    auto results = consensual_merge(eg, reps, opt);
    if (results.empty())
      throw Error("consensual merge produced no document; this contradicts the "
                  "axiom-bud fallback and indicates a bug");
    DocTree chosen = results.front();
    require_valid(eg, chosen, eg.axiom());
    write_file(global_path().string(), to_sexpr(chosen) + "\n");
    for (const auto& a : m.authors) write_replica(eg, m, a, chosen);
    record(m, "sync", 0, results.size());
    save(m);
    return {chosen, results};
  }

  std::string status() {
    auto m = load();
    auto eg = grammar();
    std::string out = "global: " + to_sexpr(global(eg)) + "\n";
    for (const auto& a : m.authors)
      out += "replica " + a.name + " [" + a.view + "]: " + to_sexpr(replica(eg, a)) + "\n";
    out += "history:\n";
    for (const auto& h : m.history) {
      out += "  #" + std::to_string(h.sequence) + " " + h.event;
      if (h.event == "sync")
        out += " (chose " + std::to_string(h.chosen + 1) + " of " +
               std::to_string(h.alternatives) + ")";
      out += "\n";
    }
    return out;
  }

  ExtendedGrammar grammar() const {
    return ExtendedGrammar(parse_grammar(read_file(grammar_path().string())));
  }
  DocTree global(const ExtendedGrammar& eg) const {
    return parse_doc_tree(eg, read_file(global_path().string()), eg.axiom());
  }
  ViewTree replica(const ExtendedGrammar& eg, const Author& a) const {
    return parse_view_tree(parse_view(eg, a.view), read_file(replica_path(a.name).string()),
                           eg.axiom());
  }

  Manifest load() const {
    if (!fs::exists(manifest_path()))
      throw ValidationError(dir_.string() + " is not a workspace (no manifest.json)");
    auto j = nlohmann::json::parse(read_file(manifest_path().string()));
    Manifest m;
    for (const auto& a : j.at("authors"))
      m.authors.push_back({a.at("name").get<std::string>(), a.at("view").get<std::string>()});
    for (const auto& h : j.at("history"))
      m.history.push_back({h.at("sequence").get<std::uint64_t>(),
                           h.at("event").get<std::string>(), h.at("chosen").get<std::size_t>(),
                           h.at("alternatives").get<std::size_t>()});
    m.sequence = j.at("sequence").get<std::uint64_t>();
    m.trim_expansions = j.value("trim_expansions", true);
    return m;
  }

  const Author& find(const Manifest& m, const std::string& author) const {
    for (const auto& a : m.authors)
      if (a.name == author) return a;
    throw ValidationError("unknown author '" + author + "'");
  }

 private:
  void record(Manifest& m, std::string event, std::size_t chosen,
              std::size_t alternatives) const {
    m.history.push_back({++m.sequence, std::move(event), chosen, alternatives});
  }

  void write_replica(const ExtendedGrammar& eg, const Manifest&, const Author& a,
                     const DocTree& global) const {
    ViewTree r = project(eg, global, parse_view(eg, a.view));
    write_file(replica_path(a.name).string(), to_sexpr(r) + "\n");
  }

  void save(const Manifest& m) const {
    nlohmann::ordered_json j;
    j["grammar"] = "grammar.txt";
    j["global"] = "global.txt";
    j["trim_expansions"] = m.trim_expansions;
    j["authors"] = nlohmann::ordered_json::array();
    for (const auto& a : m.authors)
      j["authors"].push_back(
          {{"name", a.name}, {"view", a.view}, {"replica", "replicas/" + a.name + ".txt"}});
    j["history"] = nlohmann::ordered_json::array();
    for (const auto& h : m.history)
      j["history"].push_back({{"sequence", h.sequence},
                              {"event", h.event},
                              {"chosen", h.chosen},
                              {"alternatives", h.alternatives}});
    j["sequence"] = m.sequence;
    write_file(manifest_path().string(), j.dump(2) + "\n");
  }

  fs::path dir_;
};

}  // namespace replimerge::workflow
