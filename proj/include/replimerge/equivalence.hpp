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
 * Cross-check of the automata against the brute-force oracle, with a
 * JSON report (one object per instance).
 */

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "replimerge/automaton.hpp"
#include "replimerge/consensus.hpp"
#include "replimerge/expansion.hpp"
#include "replimerge/oracle.hpp"

namespace replimerge {

/// Symmetric difference of two canonical tree lists.
struct SetDiff {
  std::size_t automaton_size = 0;
  std::size_t oracle_size = 0;
  std::vector<DocTree> only_automaton;
  std::vector<DocTree> only_oracle;

  bool equal() const { return only_automaton.empty() && only_oracle.empty(); }
};

inline SetDiff diff_sets(const std::vector<DocTree>& automaton,
                         const std::vector<DocTree>& oracle) {
  SetDiff d;
  d.automaton_size = automaton.size();
  d.oracle_size = oracle.size();
  TreeSet a(automaton.begin(), automaton.end()), o(oracle.begin(), oracle.end());
  for (const auto& t : automaton)
    if (!o.count(t)) d.only_automaton.push_back(t);
  for (const auto& t : oracle)
    if (!a.count(t)) d.only_oracle.push_back(t);
  return d;
}

struct EquivalenceOptions {
  std::size_t bound = 14;
  /// Size bound of the expansion members fed to the brute-force consensus.
  /// Defaults to `bound`.
  std::optional<std::size_t> input_bound;
  bool trim_expansions = true;
  std::size_t budget = kDefaultStateBudget;
};

struct EquivalenceReport {
  std::size_t bound = 0;
  std::size_t input_bound = 0;
  std::vector<SetDiff> expansions;
  SetDiff consensus;
  /// Every automaton tree is some brute-force consensus.
  bool language_within_oracle = false;
  /// Every brute-force consensus missing from the automaton language is a
  /// strict prefix (under the update order) of some automaton tree.
  bool oracle_extras_dominated = false;

  bool ok() const {
    return consensus.equal() &&
           std::all_of(expansions.begin(), expansions.end(),
                       [](const SetDiff& d) { return d.equal(); });
  }
};

/// Automaton expansion at `bound` against the oracle's minimal expansion.
inline SetDiff compare_expansion(const ExtendedGrammar& eg, const View& v,
                                 const ViewTree& r, const Rooted& a,
                                 std::size_t bound) {
  return diff_sets(enumerate(a, bound), oracle::minimal_expansion(eg, v, r, bound));
}

inline EquivalenceReport check_equivalence(const ExtendedGrammar& eg,
                                           const std::vector<Replica>& replicas,
                                           const EquivalenceOptions& opt = {}) {
  EquivalenceReport rep;
  rep.bound = opt.bound;
  rep.input_bound = opt.input_bound.value_or(opt.bound);
  std::vector<std::vector<DocTree>> inputs;
  for (const auto& r : replicas) {
    auto a = expansion_automaton(eg, r.view, r.tree);
    rep.expansions.push_back(compare_expansion(eg, r.view, r.tree, a, opt.bound));
    inputs.push_back(oracle::minimal_expansion(eg, r.view, r.tree, rep.input_bound));
  }
  MergeOptions mo;
  mo.mode = MergeMode::enumerate;
  mo.bound = opt.bound;
  mo.budget = opt.budget;
  mo.trim_expansions = opt.trim_expansions;
  auto language = consensual_merge(eg, replicas, mo);
  std::vector<DocTree> brute;
  for (auto& t : oracle::brute_consensus(eg, inputs))
    if (t.size() <= opt.bound) brute.push_back(std::move(t));
  rep.consensus = diff_sets(language, brute);
  rep.language_within_oracle = rep.consensus.only_automaton.empty();
  rep.oracle_extras_dominated = std::all_of(
      rep.consensus.only_oracle.begin(), rep.consensus.only_oracle.end(),
      [&](const DocTree& t) {
        return std::any_of(language.begin(), language.end(), [&](const DocTree& u) {
          return is_update(eg, t, u);
        });
      });
  return rep;
}

namespace detail {
inline nlohmann::json trees_json(const std::vector<DocTree>& ts, std::size_t limit) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < ts.size() && i < limit; ++i) out.push_back(to_sexpr(ts[i]));
  return out;
}
inline nlohmann::json diff_json(const SetDiff& d, std::size_t limit) {
  return {{"automaton", d.automaton_size},
          {"oracle", d.oracle_size},
          {"equal", d.equal()},
          {"only_automaton_count", d.only_automaton.size()},
          {"only_oracle_count", d.only_oracle.size()},
          {"only_automaton", trees_json(d.only_automaton, limit)},
          {"only_oracle", trees_json(d.only_oracle, limit)}};
}
}  // namespace detail

/// At most `witnesses` trees are listed per difference.
inline nlohmann::json to_json(const EquivalenceReport& rep, std::size_t witnesses = 5) {
  nlohmann::json j;
  j["bound"] = rep.bound;
  j["input_bound"] = rep.input_bound;
  j["ok"] = rep.ok();
  j["expansions"] = nlohmann::json::array();
  for (const auto& d : rep.expansions) j["expansions"].push_back(detail::diff_json(d, witnesses));
  j["consensus"] = detail::diff_json(rep.consensus, witnesses);
  j["language_within_oracle"] = rep.language_within_oracle;
  j["oracle_extras_dominated"] = rep.oracle_extras_dominated;
  return j;
}

}  // namespace replimerge
