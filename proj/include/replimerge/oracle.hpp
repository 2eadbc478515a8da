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
 * Brute-force reference implementations.
 *
 * Everything here is generate-and-filter over explicit trees. It depends on
 * the document, view and tree-merge code only, never on the automata, so it
 * can be used to cross-check them.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "replimerge/doc_tree.hpp"
#include "replimerge/grammar.hpp"
#include "replimerge/tree_merge.hpp"
#include "replimerge/view.hpp"

namespace replimerge::oracle {

namespace detail {

/// Per visible sort: number of projected nodes and projected buds.
using Counts = std::vector<std::uint8_t>;

struct Item {
  DocTree tree;
  Counts counts;
};

/// Size-indexed generation of typed trees with a local admission filter.
/// `admit(tree, counts)` is asked for every candidate node; rejected
/// candidates are not used as subtrees either, so the filter must be
/// inherited by subtrees (true for count bounds and the minimality rule).
class Generator {
 public:
  using Admit = std::function<bool(const DocTree&, const Counts&)>;
  using Weigh = std::function<void(const DocTree&, Counts&)>;

  Generator(const ExtendedGrammar& eg, bool with_buds, std::size_t width,
            Weigh weigh, Admit admit)
      : eg_(eg),
        with_buds_(with_buds),
        width_(width),
        weigh_(std::move(weigh)),
        admit_(std::move(admit)) {}

  const std::vector<Item>& exact(const Sort& sort, std::size_t size) {
    auto key = std::make_pair(sort, size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Item> out;
    if (size == 1 && with_buds_) offer(DocTree::bud(sort), Counts(width_, 0), out);
    for (const auto* p : eg_.base().productions_of(sort)) {
      if (p->arity() == 0) {
        if (size == 1) offer(DocTree::node(p->name), Counts(width_, 0), out);
        continue;
      }
      if (size < 1 + p->arity()) continue;
      Item partial{DocTree::node(p->name), Counts(width_, 0)};
      fill(*p, 0, size - 1, partial, out);
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

 private:
  void offer(DocTree t, Counts c, std::vector<Item>& out) {
    weigh_(t, c);
    if (admit_(t, c)) out.push_back({std::move(t), std::move(c)});
  }

  void fill(const Production& p, std::size_t i, std::size_t remaining,
            Item& partial, std::vector<Item>& out) {
    auto n = p.arity();
    auto lo = i + 1 == n ? remaining : 1;
    auto hi = i + 1 == n ? remaining : remaining - (n - i - 1);
    for (std::size_t sz = lo; sz <= hi; ++sz) {
      const auto& options = exact(p.rhs[i], sz);
      for (const auto& o : options) {
        Counts saved = partial.counts;
        for (std::size_t k = 0; k < width_; ++k) partial.counts[k] += o.counts[k];
        partial.tree.children.push_back(o.tree);
        if (i + 1 == n)
          offer(partial.tree, partial.counts, out);
        else
          fill(p, i + 1, remaining - sz, partial, out);
        partial.tree.children.pop_back();
        partial.counts = std::move(saved);
      }
    }
  }

  const ExtendedGrammar& eg_;
  bool with_buds_;
  std::size_t width_;
  Weigh weigh_;
  Admit admit_;
  std::map<std::pair<Sort, std::size_t>, std::vector<Item>> memo_;
};

inline std::string forest_text(const ViewForest& f) {
  std::string out;
  for (const auto& t : f) out += to_sexpr(t);
  return out;
}

inline std::map<Sort, std::size_t> visible_index(const View& v) {
  std::map<Sort, std::size_t> idx;
  for (std::size_t i = 0; i < v.sorts().size(); ++i) idx[v.sorts()[i]] = i;
  return idx;
}

inline void count_view_tree(const ViewTree& r, const std::map<Sort, std::size_t>& idx,
                            Counts& c) {
  c[2 * idx.at(r.sort) + (r.bud ? 1 : 0)] += 1;
  for (const auto& ch : r.children) count_view_tree(ch, idx, c);
}

inline std::vector<DocTree> collect(Generator& g, const Sort& sort,
                                    std::size_t max_nodes) {
  std::vector<DocTree> out;
  for (std::size_t s = 1; s <= max_nodes; ++s)
    for (const auto& item : g.exact(sort, s)) out.push_back(item.tree);
  return canonical_sorted(std::move(out));
}

inline void collect_slices(const ViewForest& kids, std::set<std::string>& out) {
  for (std::size_t b = 0; b < kids.size(); ++b)
    for (std::size_t e = b + 1; e <= kids.size(); ++e)
      out.insert(forest_text(ViewForest(kids.begin() + static_cast<std::ptrdiff_t>(b),
                                        kids.begin() + static_cast<std::ptrdiff_t>(e))));
  for (const auto& k : kids) collect_slices(k.children, out);
}

/// Generator restricted to trees whose projection is a run of consecutive
/// siblings of r (or empty), a necessary condition inherited by subtrees.
/// Projected node/bud counts are also bounded by those of r.
inline Generator projection_generator(const ExtendedGrammar& eg, const View& v,
                                      const ViewTree& r, bool minimal) {
  auto idx = visible_index(v);
  Counts target(2 * idx.size(), 0);
  count_view_tree(r, idx, target);
  std::set<std::string> slices{""};
  collect_slices(ViewForest{r}, slices);
  auto weigh = [&eg, idx](const DocTree& t, Counts& c) {
    const Sort& type = eg.label_type(t.label);
    if (auto it = idx.find(type); it != idx.end())
      c[2 * it->second + (t.is_bud() ? 1 : 0)] += 1;
  };
  auto admit = [&eg, &v, idx, target, minimal, slices](const DocTree& t,
                                                       const Counts& c) {
    for (std::size_t k = 0; k < c.size(); ++k)
      if (c[k] > target[k]) return false;
    bool empty = true;
    for (auto x : c) empty = empty && x == 0;
    if (minimal && empty && !t.is_bud() && !idx.count(eg.label_type(t.label)))
      return false;
    return empty || slices.count(forest_text(project_forest(eg, t, v))) > 0;
  };
  return Generator(eg, true, target.size(), weigh, admit);
}

}  // namespace detail

/// All trees of root sort `sort` with at most `max_nodes` nodes, with or
/// without buds, in canonical order.
inline std::vector<DocTree> enumerate_conforming(const ExtendedGrammar& eg,
                                                 const Sort& sort,
                                                 std::size_t max_nodes,
                                                 bool closed_only) {
  detail::Generator g(
      eg, !closed_only, 0, [](const DocTree&, detail::Counts&) {},
      [](const DocTree&, const detail::Counts&) { return true; });
  return detail::collect(g, sort, max_nodes);
}

/// Number of such trees, by a counting recurrence that never builds them.
inline std::uint64_t count_conforming(const ExtendedGrammar& eg, const Sort& sort,
                                      std::size_t max_nodes, bool closed_only) {
  std::map<std::pair<Sort, std::size_t>, std::uint64_t> memo;
  std::function<std::uint64_t(const Sort&, std::size_t)> exact;
  std::function<std::uint64_t(const Production&, std::size_t, std::size_t)> ways;
  exact = [&](const Sort& s, std::size_t size) -> std::uint64_t {
    auto key = std::make_pair(s, size);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::uint64_t n = (size == 1 && !closed_only) ? 1 : 0;
    for (const auto* p : eg.base().productions_of(s)) {
      if (p->arity() == 0)
        n += size == 1 ? 1 : 0;
      else if (size >= 1 + p->arity())
        n += ways(*p, 0, size - 1);
    }
    return memo[key] = n;
  };
  ways = [&](const Production& p, std::size_t i, std::size_t remaining) -> std::uint64_t {
    if (i + 1 == p.arity()) return exact(p.rhs[i], remaining);
    std::uint64_t n = 0;
    for (std::size_t sz = 1; sz + (p.arity() - i - 1) <= remaining; ++sz)
      n += exact(p.rhs[i], sz) * ways(p, i + 1, remaining - sz);
    return n;
  };
  std::uint64_t total = 0;
  for (std::size_t s = 1; s <= max_nodes; ++s) total += exact(sort, s);
  return total;
}

/// Trees (with buds) of the axiom sort projecting exactly onto r.
inline std::vector<DocTree> brute_expansion(const ExtendedGrammar& eg,
                                            const View& v, const ViewTree& r,
                                            std::size_t max_nodes) {
  auto g = detail::projection_generator(eg, v, r, false);
  std::vector<DocTree> out;
  for (auto& t : detail::collect(g, eg.axiom(), max_nodes))
    if (project(eg, t, v) == r) out.push_back(std::move(t));
  return out;
}

/// Same as brute_expansion but never develops an invisible node whose
/// projection is empty. Equals minimal_elements(brute_expansion(...)).
inline std::vector<DocTree> minimal_expansion(const ExtendedGrammar& eg,
                                              const View& v, const ViewTree& r,
                                              std::size_t max_nodes) {
  auto g = detail::projection_generator(eg, v, r, true);
  std::vector<DocTree> out;
  for (auto& t : detail::collect(g, eg.axiom(), max_nodes))
    if (project(eg, t, v) == r) out.push_back(std::move(t));
  return out;
}

/// Members of `trees` with no strictly smaller member under the update order.
inline std::vector<DocTree> minimal_elements(const ExtendedGrammar& eg,
                                             const std::vector<DocTree>& trees) {
  std::vector<DocTree> out;
  for (const auto& t : trees) {
    bool minimal = true;
    for (const auto& u : trees)
      if (!(u == t) && u.size() <= t.size() && is_update(eg, u, t)) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(t);
  }
  return canonical_sorted(std::move(out));
}

/// Members of `trees` with no strictly larger member under the update order.
inline std::vector<DocTree> maximal_elements(const ExtendedGrammar& eg,
                                             const std::vector<DocTree>& trees) {
  std::vector<DocTree> out;
  for (const auto& t : trees) {
    bool maximal = true;
    for (const auto& u : trees)
      if (!(u == t) && u.size() >= t.size() && is_update(eg, t, u)) {
        maximal = false;
        break;
      }
    if (maximal) out.push_back(t);
  }
  return canonical_sorted(std::move(out));
}

/// Left fold of tree_consensus over every tuple of the cartesian product.
inline std::vector<DocTree> brute_consensus(const ExtendedGrammar& eg,
                                            const std::vector<std::vector<DocTree>>& sets) {
  if (sets.empty()) return {};
  TreeSet acc(sets.front().begin(), sets.front().end());
  for (std::size_t i = 1; i < sets.size(); ++i) {
    TreeSet next;
    for (const auto& a : acc)
      for (const auto& b : sets[i]) next.insert(tree_consensus(eg, a, b));
    acc = std::move(next);
  }
  return canonical_sorted(acc);
}

}  // namespace replimerge::oracle
