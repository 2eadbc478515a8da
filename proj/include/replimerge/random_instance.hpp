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
 * Seeded generator of small merge instances: a grammar, a global document,
 * views containing the axiom, and replicas obtained by projecting the
 * document and applying a few concurrent edits on each view.
 *
 * Only `std::mt19937_64` output is used (modulo reduction instead of the
 * library distributions), so an instance depends on the seed alone.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "replimerge/consensus.hpp"
#include "replimerge/doc_tree.hpp"
#include "replimerge/grammar.hpp"
#include "replimerge/view.hpp"

namespace replimerge {

struct RandomParams {
  std::size_t max_sorts = 4;
  std::size_t max_productions = 8;
  std::size_t max_rhs = 3;
  std::size_t max_tree_nodes = 12;
  std::size_t views = 2;
  std::size_t max_edits = 2;
  /// Chance, in percent, that a node of the global document is left as a bud.
  unsigned bud_percent = 20;
};

struct RandomInstance {
  std::uint64_t seed = 0;
  Grammar grammar;
  ExtendedGrammar eg;
  DocTree global;
  std::vector<Replica> replicas;
};

namespace detail {

inline std::size_t pick(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

/// Smallest closed tree size per sort (absent = unproductive).
inline std::map<Sort, std::size_t> min_closed_sizes(const Grammar& g) {
  std::map<Sort, std::size_t> best;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& p : g.productions()) {
      std::size_t total = 1;
      bool ok = true;
      for (const auto& s : p.rhs) {
        auto it = best.find(s);
        if (it == best.end()) {
          ok = false;
          break;
        }
        total += it->second;
      }
      if (!ok) continue;
      auto it = best.find(p.lhs);
      if (it == best.end() || total < it->second) {
        best[p.lhs] = total;
        changed = true;
      }
    }
  }
  return best;
}

inline Grammar random_grammar(std::mt19937_64& rng, const RandomParams& prm) {
  static const char* kNames[] = {"A", "B", "C", "D", "E", "F"};
  for (;;) {
    std::size_t n_sorts = std::min(prm.max_sorts, 2 + pick(rng, prm.max_sorts));
    std::vector<Sort> sorts(kNames, kNames + n_sorts);
    std::size_t n_prods = n_sorts + pick(rng, prm.max_productions - n_sorts + 1);
    std::vector<Production> prods;
    for (std::size_t i = 0; i < n_prods; ++i) {
      Production p;
      p.name = "P" + std::to_string(i + 1);
      p.lhs = i < n_sorts ? sorts[i] : sorts[pick(rng, n_sorts)];
      std::size_t arity = pick(rng, prm.max_rhs + 1);
      for (std::size_t k = 0; k < arity; ++k) p.rhs.push_back(sorts[pick(rng, n_sorts)]);
      prods.push_back(std::move(p));
    }
    Grammar g(sorts, prods, "A");
    if (min_closed_sizes(g).size() == n_sorts) return g;
  }
}

/// Random document of type `sort` with at most `budget` nodes.
inline DocTree random_tree(std::mt19937_64& rng, const Grammar& g,
                           const Sort& sort, std::size_t budget,
                           unsigned bud_percent) {
  if (budget <= 1 || rng() % 100 < bud_percent) {
    std::vector<const Production*> leaves;
    for (const auto* p : g.productions_of(sort))
      if (p->arity() == 0) leaves.push_back(p);
    if (!leaves.empty() && rng() % 2)
      return DocTree::node(leaves[pick(rng, leaves.size())]->name);
    return DocTree::bud(sort);
  }
  std::vector<const Production*> fits;
  for (const auto* p : g.productions_of(sort))
    if (1 + p->arity() <= budget) fits.push_back(p);
  if (fits.empty()) return DocTree::bud(sort);
  const Production& p = *fits[pick(rng, fits.size())];
  DocTree out = DocTree::node(p.name);
  std::size_t left = budget - 1;
  for (std::size_t i = 0; i < p.rhs.size(); ++i) {
    std::size_t reserve = p.rhs.size() - i - 1;
    std::size_t mine = 1 + pick(rng, left - reserve);
    out.children.push_back(random_tree(rng, g, p.rhs[i], mine, bud_percent));
    left -= out.children.back().size();
  }
  return out;
}

inline void collect_buds(const ViewTree& r, const NodeAddress& here,
                         std::vector<std::pair<NodeAddress, Sort>>& out) {
  if (r.bud) out.push_back({here, r.sort});
  for (std::uint32_t i = 0; i < r.children.size(); ++i)
    collect_buds(r.children[i], here.child(i + 1), out);
}

}  // namespace detail

using detail::random_tree;

/// Buds of a replica with their addresses, in pre-order.
inline std::vector<std::pair<NodeAddress, Sort>> replica_buds(const ViewTree& r) {
  std::vector<std::pair<NodeAddress, Sort>> out;
  detail::collect_buds(r, NodeAddress::root(), out);
  return out;
}

/// Random view containing the axiom.
inline View random_view(std::mt19937_64& rng, const ExtendedGrammar& eg) {
  std::vector<Sort> vis{eg.axiom()};
  for (const auto& s : eg.base().sorts())
    if (s != eg.axiom() && rng() % 2) vis.push_back(s);
  return View(eg, vis);
}

inline RandomInstance random_instance(std::uint64_t seed,
                                      const RandomParams& prm = {}) {
  std::mt19937_64 rng(seed);
  Grammar g = detail::random_grammar(rng, prm);
  ExtendedGrammar eg(g);
  // Retry a few times so the global document is rarely a lone bud or leaf.
  DocTree global = DocTree::bud(g.axiom());
  for (int attempt = 0; attempt < 8 && global.size() < 3; ++attempt)
    global = detail::random_tree(rng, g, g.axiom(),
                                 1 + detail::pick(rng, prm.max_tree_nodes),
                                 prm.bud_percent);
  std::vector<Replica> replicas;
  for (std::size_t k = 0; k < prm.views; ++k) {
    View v = random_view(rng, eg);
    ViewTree r = project(eg, global, v);
    std::size_t edits = detail::pick(rng, prm.max_edits + 1);
    for (std::size_t e = 0; e < edits; ++e) {
      auto buds = replica_buds(r);
      std::vector<std::pair<NodeAddress, const Production*>> options;
      for (const auto& [w, s] : buds)
        for (const auto* p : g.productions_of(s)) options.push_back({w, p});
      if (options.empty()) break;
      auto [w, p] = options[detail::pick(rng, options.size())];
      ViewTree edited = edit_view_tree(eg, v, r, w, p->name);
      if (nonempty(expansion_automaton(eg, v, edited))) r = std::move(edited);
    }
    replicas.push_back({std::move(v), std::move(r)});
  }
  return {seed, std::move(g), std::move(eg), std::move(global), std::move(replicas)};
}

}  // namespace replimerge
