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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "replimerge/error.hpp"
#include "replimerge/grammar.hpp"

namespace replimerge {

/// Dewey address: 1-based child indices from the root; empty = root.
class NodeAddress {
 public:
  NodeAddress() = default;
  explicit NodeAddress(std::vector<std::uint32_t> path) : path_(std::move(path)) {
    for (auto i : path_)
      if (i == 0) throw AddressError("address components are 1-based");
  }

  static NodeAddress root() { return {}; }

  /// Accepts "", "e", "ε" or "root" for the root, otherwise "2.1.3".
  static NodeAddress parse(std::string_view text) {
    if (text.empty() || text == "e" || text == "ε" || text == "root") return {};
    std::vector<std::uint32_t> path;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto dot = text.find('.', pos);
      auto part = text.substr(pos, dot == std::string_view::npos ? text.npos
                                                                 : dot - pos);
      if (part.empty() ||
          !std::all_of(part.begin(), part.end(),
                       [](char c) { return c >= '0' && c <= '9'; }))
        throw ParseError("malformed address '" + std::string(text) + "'", 0);
      auto i = std::stoul(std::string(part));
      if (i == 0)
        throw ParseError("addresses are 1-based: '" + std::string(text) + "'", 0);
      path.push_back(static_cast<std::uint32_t>(i));
      if (dot == std::string_view::npos) break;
      pos = dot + 1;
    }
    return NodeAddress(std::move(path));
  }

  const std::vector<std::uint32_t>& path() const { return path_; }
  bool is_root() const { return path_.empty(); }
  std::size_t depth() const { return path_.size(); }

  NodeAddress child(std::uint32_t i) const {
    auto p = path_;
    p.push_back(i);
    return NodeAddress(std::move(p));
  }

  bool is_prefix_of(const NodeAddress& other) const {
    return path_.size() <= other.path_.size() &&
           std::equal(path_.begin(), path_.end(), other.path_.begin());
  }

  std::string str() const {
    if (path_.empty()) return "ε";
    std::string out;
    for (std::size_t i = 0; i < path_.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(path_[i]);
    }
    return out;
  }

  auto operator<=>(const NodeAddress&) const = default;

 private:
  std::vector<std::uint32_t> path_;
};

/// Production-labelled tree (AST form). A bud is a leaf whose label is the
/// bud label of its sort.
struct DocTree {
  Label label;
  std::vector<DocTree> children;

  static DocTree bud(Sort sort) { return {Label::bud_of(std::move(sort)), {}}; }
  static DocTree node(std::string production, std::vector<DocTree> kids = {}) {
    return {Label::production(std::move(production)), std::move(kids)};
  }

  bool is_bud() const { return label.bud; }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  bool contains(const NodeAddress& w) const {
    const DocTree* cur = this;
    for (auto i : w.path()) {
      if (i > cur->children.size()) return false;
      cur = &cur->children[i - 1];
    }
    return true;
  }

  const DocTree& at(const NodeAddress& w) const {
    const DocTree* cur = this;
    for (auto i : w.path()) {
      if (i > cur->children.size())
        throw AddressError("address " + w.str() + " is not in the tree domain");
      cur = &cur->children[i - 1];
    }
    return *cur;
  }

  /// Every address of the domain in depth-first pre-order.
  std::vector<NodeAddress> domain() const {
    std::vector<NodeAddress> out;
    collect(NodeAddress::root(), out);
    return out;
  }

  friend bool operator==(const DocTree& a, const DocTree& b) {
    return a.label == b.label && a.children == b.children;
  }
  friend bool operator<(const DocTree& a, const DocTree& b) {
    if (a.label != b.label) return a.label < b.label;
    return std::lexicographical_compare(a.children.begin(), a.children.end(),
                                        b.children.begin(), b.children.end());
  }

 private:
  void collect(const NodeAddress& here, std::vector<NodeAddress>& out) const {
    out.push_back(here);
    for (std::uint32_t i = 0; i < children.size(); ++i)
      children[i].collect(here.child(i + 1), out);
  }
};

using TreeSet = std::set<DocTree>;

/// Canonical parenthesized text: `(P1 (P7) (P3 (P7) (P2)))`, buds `(? C)`.
inline std::string to_sexpr(const DocTree& t) {
  std::string out = "(";
  out += t.is_bud() ? "? " + t.label.name : t.label.name;
  for (const auto& c : t.children) out += " " + to_sexpr(c);
  out += ")";
  return out;
}

/// Total order used for every user-visible listing: node count first, then
/// canonical text.
inline bool canonical_less(const DocTree& a, const DocTree& b) {
  auto sa = a.size(), sb = b.size();
  if (sa != sb) return sa < sb;
  return to_sexpr(a) < to_sexpr(b);
}

inline std::vector<DocTree> canonical_sorted(std::vector<DocTree> trees) {
  std::sort(trees.begin(), trees.end(), canonical_less);
  trees.erase(std::unique(trees.begin(), trees.end()), trees.end());
  return trees;
}

inline std::vector<DocTree> canonical_sorted(const TreeSet& trees) {
  return canonical_sorted(std::vector<DocTree>(trees.begin(), trees.end()));
}

inline std::size_t count_buds(const DocTree& t) {
  std::size_t n = t.is_bud() ? 1 : 0;
  for (const auto& c : t.children) n += count_buds(c);
  return n;
}

// ---------------------------------------------------------------------------
// Conformance and typing

enum class Conformance { closed, open, invalid };

struct ConformResult {
  Conformance status = Conformance::invalid;
  NodeAddress where;   // first offending address when invalid
  std::string reason;  // empty unless invalid
};

namespace detail {

inline bool conforms_rec(const ExtendedGrammar& eg, const DocTree& t,
                         const Sort& expected, const NodeAddress& here,
                         bool& has_bud, ConformResult& err) {
  if (t.is_bud()) {
    if (!eg.has_sort(t.label.name)) {
      err = {Conformance::invalid, here, "bud of unknown sort " + t.label.name};
      return false;
    }
    if (t.label.name != expected) {
      err = {Conformance::invalid, here,
             "bud of sort " + t.label.name + " where " + expected + " expected"};
      return false;
    }
    if (!t.children.empty()) {
      err = {Conformance::invalid, here, "bud with children"};
      return false;
    }
    has_bud = true;
    return true;
  }
  const auto* p = eg.base().find(t.label.name);
  if (!p) {
    err = {Conformance::invalid, here, "unknown production " + t.label.name};
    return false;
  }
  if (p->lhs != expected) {
    err = {Conformance::invalid, here,
           "production " + p->name + " has type " + p->lhs + " where " +
               expected + " expected"};
    return false;
  }
  if (p->arity() != t.children.size()) {
    err = {Conformance::invalid, here,
           "production " + p->name + " has arity " + std::to_string(p->arity()) +
               " but node has " + std::to_string(t.children.size()) +
               " children"};
    return false;
  }
  for (std::uint32_t i = 0; i < t.children.size(); ++i)
    if (!conforms_rec(eg, t.children[i], p->rhs[i], here.child(i + 1), has_bud,
                      err))
      return false;
  return true;
}

}  // namespace detail

inline ConformResult conforms(const ExtendedGrammar& eg, const DocTree& t,
                              const Sort& root_sort) {
  bool has_bud = false;
  ConformResult err;
  if (!detail::conforms_rec(eg, t, root_sort, NodeAddress::root(), has_bud, err))
    return err;
  return {has_bud ? Conformance::open : Conformance::closed, {}, {}};
}

inline void require_valid(const ExtendedGrammar& eg, const DocTree& t,
                          const Sort& root_sort) {
  auto r = conforms(eg, t, root_sort);
  if (r.status == Conformance::invalid)
    throw ValidationError("document invalid at " + r.where.str() + ": " +
                          r.reason);
}

inline const Sort& root_type(const ExtendedGrammar& eg, const DocTree& t) {
  return eg.label_type(t.label);
}

inline const Sort& node_type(const ExtendedGrammar& eg, const DocTree& t,
                             const NodeAddress& w) {
  return eg.label_type(t.at(w).label);
}

// ---------------------------------------------------------------------------
// Editing and the update order

namespace detail {

template <class F>
DocTree rebuild_at(const DocTree& t, const NodeAddress& w, std::size_t depth,
                   F&& replace) {
  if (depth == w.depth()) return replace(t);
  auto i = w.path()[depth];
  if (i > t.children.size())
    throw AddressError("address " + w.str() + " is not in the tree domain");
  DocTree out = t;
  out.children[i - 1] = rebuild_at(t.children[i - 1], w, depth + 1, replace);
  return out;
}

}  // namespace detail

/// Replaces the bud at `w` by a node labelled `production` whose children
/// are buds of the production's rhs sorts.
inline DocTree apply_production(const ExtendedGrammar& eg, const DocTree& t,
                                const NodeAddress& w,
                                std::string_view production) {
  const Production& p = eg.base().production(production);
  return detail::rebuild_at(t, w, 0, [&](const DocTree& node) {
    if (!node.is_bud())
      throw NotABud("node at " + w.str() + " is labelled " + node.label.name +
                    ", not a bud");
    if (node.label.name != p.lhs)
      throw TypeMismatch("bud at " + w.str() + " has type " + node.label.name +
                         " but " + p.name + " rewrites " + p.lhs);
    DocTree out = DocTree::node(p.name);
    for (const auto& s : p.rhs) out.children.push_back(DocTree::bud(s));
    return out;
  });
}

/// t <= t2: t2 is obtained from t by developing some of its buds.
inline bool is_update(const ExtendedGrammar& eg, const DocTree& t,
                      const DocTree& t2) {
  if (t.is_bud()) return t.label.name == eg.label_type(t2.label);
  if (t.label != t2.label || t.children.size() != t2.children.size())
    return false;
  for (std::size_t i = 0; i < t.children.size(); ++i)
    if (!is_update(eg, t.children[i], t2.children[i])) return false;
  return true;
}

/// Replaces every subtree rooted at one of `addrs` by a bud of its type.
inline DocTree prune_at(const ExtendedGrammar& eg, const DocTree& t,
                        const std::set<NodeAddress>& addrs) {
  for (const auto& w : addrs)
    if (!t.contains(w))
      throw AddressError("address " + w.str() + " is not in the tree domain");
  struct Rec {
    const ExtendedGrammar& eg;
    const std::set<NodeAddress>& addrs;
    DocTree operator()(const DocTree& n, const NodeAddress& here) const {
      if (addrs.count(here)) return DocTree::bud(eg.label_type(n.label));
      DocTree out{n.label, {}};
      for (std::uint32_t i = 0; i < n.children.size(); ++i)
        out.children.push_back((*this)(n.children[i], here.child(i + 1)));
      return out;
    }
  };
  return Rec{eg, addrs}(t, NodeAddress::root());
}

namespace detail {

inline void prefixes_rec(const ExtendedGrammar& eg, const DocTree& t,
                         std::vector<DocTree>& out) {
  out.push_back(DocTree::bud(eg.label_type(t.label)));
  if (t.is_bud()) return;
  std::vector<std::vector<DocTree>> per_child;
  for (const auto& c : t.children) {
    per_child.emplace_back();
    prefixes_rec(eg, c, per_child.back());
  }
  // Cartesian product of the children's downsets.
  std::vector<DocTree> acc{DocTree{t.label, {}}};
  for (const auto& options : per_child) {
    std::vector<DocTree> next;
    next.reserve(acc.size() * options.size());
    for (const auto& partial : acc)
      for (const auto& o : options) {
        DocTree d = partial;
        d.children.push_back(o);
        next.push_back(std::move(d));
      }
    acc = std::move(next);
  }
  for (auto& d : acc) out.push_back(std::move(d));
}

}  // namespace detail

/// The <=-downset of t, without t itself.
inline TreeSet all_proper_prefixes(const ExtendedGrammar& eg, const DocTree& t) {
  std::vector<DocTree> all;
  detail::prefixes_rec(eg, t, all);
  TreeSet out(all.begin(), all.end());
  out.erase(t);
  return out;
}

// ---------------------------------------------------------------------------
// Derivation-tree (sort-labelled) representation

/// Sort-labelled tree. `production` annotates non-bud nodes; it may be left
/// empty on input when the (lhs, child sorts) signature is unambiguous.
struct SortTree {
  Sort sort;
  bool bud = false;
  std::string production;
  std::vector<SortTree> children;

  bool operator==(const SortTree&) const = default;
};

inline SortTree to_sort_tree(const ExtendedGrammar& eg, const DocTree& t) {
  SortTree out{eg.label_type(t.label), t.is_bud(),
               t.is_bud() ? std::string() : t.label.name, {}};
  for (const auto& c : t.children) out.children.push_back(to_sort_tree(eg, c));
  return out;
}

inline DocTree from_sort_tree(const ExtendedGrammar& eg, const SortTree& st) {
  if (st.bud) {
    if (!st.children.empty()) throw ValidationError("bud with children");
    if (!eg.has_sort(st.sort))
      throw ValidationError("bud of unknown sort " + st.sort);
    return DocTree::bud(st.sort);
  }
  const Production* chosen = nullptr;
  if (!st.production.empty()) {
    chosen = &eg.base().production(st.production);
  } else {
    std::vector<Sort> kids;
    for (const auto& c : st.children) kids.push_back(c.sort);
    for (const auto* p : eg.base().productions_of(st.sort)) {
      if (p->rhs != kids) continue;
      if (chosen)
        throw ValidationError("sort tree node " + st.sort +
                              " matches several productions; annotate it");
      chosen = p;
    }
    if (!chosen)
      throw ValidationError("no production " + st.sort +
                            " -> (child sorts) matches the sort tree");
  }
  if (chosen->lhs != st.sort || chosen->arity() != st.children.size())
    throw ValidationError("production " + chosen->name +
                          " does not match its sort tree node");
  DocTree out = DocTree::node(chosen->name);
  for (std::size_t i = 0; i < st.children.size(); ++i) {
    if (st.children[i].sort != chosen->rhs[i])
      throw ValidationError("child sort mismatch under " + chosen->name);
    out.children.push_back(from_sort_tree(eg, st.children[i]));
  }
  return out;
}

}  // namespace replimerge
