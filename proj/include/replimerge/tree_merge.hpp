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

#include <set>
#include <string>

#include "replimerge/doc_tree.hpp"
#include "replimerge/error.hpp"
#include "replimerge/grammar.hpp"

namespace replimerge {

/// t1 and t2 admit a consensus iff their roots have the same type.
inline bool have_consensus_trees(const ExtendedGrammar& eg, const DocTree& t1,
                                 const DocTree& t2) {
  return root_type(eg, t1) == root_type(eg, t2);
}

namespace detail {

inline void require_consensus(const ExtendedGrammar& eg, const DocTree& t1,
                              const DocTree& t2) {
  if (!have_consensus_trees(eg, t1, t2))
    throw RootTypeConflict("root types differ: " + root_type(eg, t1) + " vs " +
                           root_type(eg, t2));
}

inline void conflicts_rec(const DocTree& a, const DocTree& b,
                          const NodeAddress& here, std::set<NodeAddress>& out) {
  if (a.is_bud() || b.is_bud()) return;
  if (a.label != b.label) {
    out.insert(here);
    return;
  }
  for (std::uint32_t i = 0; i < a.children.size(); ++i)
    conflicts_rec(a.children[i], b.children[i], here.child(i + 1), out);
}

}  // namespace detail

/// Minimal addresses present in both trees where two non-bud nodes of the
/// same type carry different productions. Empty iff the trees merge fully.
inline std::set<NodeAddress> trees_in_conflict(const ExtendedGrammar& eg,
                                               const DocTree& t1,
                                               const DocTree& t2) {
  detail::require_consensus(eg, t1, t2);
  std::set<NodeAddress> out;
  detail::conflicts_rec(t1, t2, NodeAddress::root(), out);
  return out;
}

/// Union of both trees, a developed node winning over a bud, pruned to a
/// bud of the common type wherever the trees conflict.
inline DocTree tree_consensus(const ExtendedGrammar& eg, const DocTree& t1,
                              const DocTree& t2) {
  detail::require_consensus(eg, t1, t2);
  struct Rec {
    const ExtendedGrammar& eg;
    DocTree operator()(const DocTree& a, const DocTree& b) const {
      if (a.is_bud()) return b;
      if (b.is_bud()) return a;
      if (a.label != b.label) return DocTree::bud(eg.label_type(a.label));
      DocTree out{a.label, {}};
      for (std::size_t i = 0; i < a.children.size(); ++i)
        out.children.push_back((*this)(a.children[i], b.children[i]));
      return out;
    }
  };
  return Rec{eg}(t1, t2);
}

/// Literal "updates each for other": some common address is a bud in t1 and
/// developed in t2, and some other is a bud in t2 and developed in t1.
/// Identical trees are therefore not mutual updates.
inline bool mutual_updates(const ExtendedGrammar& eg, const DocTree& t1,
                           const DocTree& t2) {
  if (!trees_in_conflict(eg, t1, t2).empty())
    throw ValidationError("mutual_updates needs trees without conflicts");
  bool bud_in_1 = false, bud_in_2 = false;
  struct Rec {
    bool& bud_in_1;
    bool& bud_in_2;
    void operator()(const DocTree& a, const DocTree& b) const {
      if (a.is_bud() && !b.is_bud()) bud_in_1 = true;
      if (b.is_bud() && !a.is_bud()) bud_in_2 = true;
      if (a.is_bud() || b.is_bud()) return;
      for (std::size_t i = 0; i < a.children.size(); ++i)
        (*this)(a.children[i], b.children[i]);
    }
  };
  Rec{bud_in_1, bud_in_2}(t1, t2);
  return bud_in_1 && bud_in_2;
}

}  // namespace replimerge
