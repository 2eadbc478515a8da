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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "replimerge/doc_tree.hpp"
#include "replimerge/error.hpp"
#include "replimerge/grammar.hpp"

namespace replimerge {

/// Pair of strings rendering the opening and closing Dyck symbol of a sort.
struct Brackets {
  std::string open;
  std::string close;
  bool operator==(const Brackets&) const = default;
};

/// Subset of sorts a co-author may access. The axiom is always visible so a
/// partial replica is a single tree.
class View {
 public:
  View() = default;

  /// `brackets` may be partial; missing sorts get a default pair.
  View(const ExtendedGrammar& eg, std::vector<Sort> visible,
       std::map<Sort, Brackets> brackets = {})
      : visible_(std::move(visible)) {
    std::vector<std::string> errors;
    for (const auto& s : visible_)
      if (!eg.has_sort(s)) errors.push_back("view names unknown sort '" + s + "'");
    for (std::size_t i = 0; i < visible_.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (visible_[i] == visible_[j])
          errors.push_back("view lists sort '" + visible_[i] + "' twice");
    if (!contains(eg.axiom()))
      errors.push_back("view must contain the axiom '" + eg.axiom() + "'");
    for (const auto& [s, b] : brackets)
      if (!contains(s)) errors.push_back("brackets given for invisible sort '" + s + "'");
    if (!errors.empty()) {
      std::string msg = "invalid view:";
      for (const auto& e : errors) msg += "\n  - " + e;
      throw ValidationError(msg);
    }
    static const Brackets defaults[] = {{"(", ")"}, {"[", "]"}, {"{", "}"}};
    std::size_t next_default = 0;
    for (const auto& s : visible_) {
      if (auto it = brackets.find(s); it != brackets.end()) {
        brackets_[s] = it->second;
        continue;
      }
      while (next_default < 3 &&
             std::any_of(brackets.begin(), brackets.end(), [&](const auto& kv) {
               return kv.second == defaults[next_default];
             }))
        ++next_default;
      brackets_[s] = next_default < 3 ? defaults[next_default++]
                                      : Brackets{s + "(", ")" + s};
    }
  }

  /// Every sort of the grammar.
  static View full(const ExtendedGrammar& eg) {
    return View(eg, eg.base().sorts());
  }

  bool contains(const Sort& s) const {
    return std::find(visible_.begin(), visible_.end(), s) != visible_.end();
  }
  const std::vector<Sort>& sorts() const { return visible_; }
  const Brackets& brackets(const Sort& s) const { return brackets_.at(s); }

  /// `A,B` when no custom brackets, else `A=(),B=[]`.
  std::string str() const {
    std::string out;
    for (const auto& s : visible_) {
      if (!out.empty()) out += ',';
      out += s;
    }
    return out;
  }

 private:
  std::vector<Sort> visible_;
  std::map<Sort, Brackets> brackets_;
};

/// Sort-labelled node of a partial replica. Buds are leaves.
struct ViewTree {
  Sort sort;
  bool bud = false;
  std::vector<ViewTree> children;

  static ViewTree bud_of(Sort s) { return {std::move(s), true, {}}; }
  static ViewTree node(Sort s, std::vector<ViewTree> kids = {}) {
    return {std::move(s), false, std::move(kids)};
  }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }

  friend bool operator==(const ViewTree& a, const ViewTree& b) {
    return a.sort == b.sort && a.bud == b.bud && a.children == b.children;
  }
  friend bool operator<(const ViewTree& a, const ViewTree& b) {
    if (a.sort != b.sort) return a.sort < b.sort;
    if (a.bud != b.bud) return a.bud < b.bud;
    return std::lexicographical_compare(a.children.begin(), a.children.end(),
                                        b.children.begin(), b.children.end());
  }
};

using ViewForest = std::vector<ViewTree>;

inline std::size_t forest_size(const ViewForest& f) {
  std::size_t n = 0;
  for (const auto& t : f) n += t.size();
  return n;
}

/// `(A (B (A)))`, buds `(? B)`.
inline std::string to_sexpr(const ViewTree& t) {
  std::string out = "(";
  out += t.bud ? "? " + t.sort : t.sort;
  for (const auto& c : t.children) out += " " + to_sexpr(c);
  out += ")";
  return out;
}

inline ViewTree to_view_tree(const SortTree& st) {
  ViewTree out{st.sort, st.bud, {}};
  for (const auto& c : st.children) out.children.push_back(to_view_tree(c));
  return out;
}

namespace detail {

inline void project_into(const ExtendedGrammar& eg, const DocTree& t,
                         const View& v, ViewForest& out) {
  const Sort& type = eg.label_type(t.label);
  if (t.is_bud()) {
    if (v.contains(type)) out.push_back(ViewTree::bud_of(type));
    return;
  }
  if (v.contains(type)) {
    ViewTree node = ViewTree::node(type);
    for (const auto& c : t.children) project_into(eg, c, v, node.children);
    out.push_back(std::move(node));
    return;
  }
  for (const auto& c : t.children) project_into(eg, c, v, out);
}

}  // namespace detail

/// Projected forest of t: invisible nodes are replaced in place by the
/// projection of their children, invisible buds vanish.
inline ViewForest project_forest(const ExtendedGrammar& eg, const DocTree& t,
                                 const View& v) {
  ViewForest out;
  detail::project_into(eg, t, v, out);
  return out;
}

/// Partial replica of t for view v. The root must be of a visible sort.
inline ViewTree project(const ExtendedGrammar& eg, const DocTree& t,
                        const View& v) {
  const Sort& type = eg.label_type(t.label);
  if (!v.contains(type))
    throw ValidationError("root sort " + type + " is not visible in view " +
                          v.str());
  ViewForest f = project_forest(eg, t, v);
  return std::move(f.front());
}

/// Checks that r only uses visible sorts, buds are leaves, and the root has
/// sort `root_sort`.
inline void validate_view_tree(const View& v, const ViewTree& r,
                               const Sort& root_sort) {
  if (r.sort != root_sort)
    throw ValidationError("replica root has sort " + r.sort + ", expected " +
                          root_sort);
  struct Rec {
    const View& v;
    void operator()(const ViewTree& n) const {
      if (!v.contains(n.sort))
        throw ValidationError("replica uses sort " + n.sort +
                              " which is not in view " + v.str());
      if (n.bud && !n.children.empty())
        throw ValidationError("replica bud " + n.sort + " has children");
      for (const auto& c : n.children) (*this)(c);
    }
  };
  Rec{v}(r);
}

/// Node of a view tree by 1-based Dewey address.
inline const ViewTree& view_tree_at(const ViewTree& r, const NodeAddress& w) {
  const ViewTree* cur = &r;
  for (auto i : w.path()) {
    if (i > cur->children.size())
      throw AddressError("address " + w.str() + " is not in the replica");
    cur = &cur->children[i - 1];
  }
  return *cur;
}

/// Develops the replica bud at `w` with `production`: the bud becomes a node
/// of its sort whose children are buds for the visible rhs sorts. This is
/// exactly the projection of the same edit on the global document.
inline ViewTree edit_view_tree(const ExtendedGrammar& eg, const View& v,
                               const ViewTree& r, const NodeAddress& w,
                               std::string_view production) {
  const Production& p = eg.base().production(production);
  if (!v.contains(p.lhs))
    throw TypeMismatch("production " + p.name + " rewrites invisible sort " +
                       p.lhs);
  struct Rec {
    const Production& p;
    const View& v;
    const NodeAddress& w;
    ViewTree operator()(const ViewTree& n, std::size_t depth) const {
      if (depth == w.depth()) {
        if (!n.bud)
          throw NotABud("replica node at " + w.str() + " (" + n.sort +
                        ") is not a bud");
        if (n.sort != p.lhs)
          throw TypeMismatch("bud at " + w.str() + " has type " + n.sort +
                             " but " + p.name + " rewrites " + p.lhs);
        ViewTree out = ViewTree::node(n.sort);
        for (const auto& s : p.rhs)
          if (v.contains(s)) out.children.push_back(ViewTree::bud_of(s));
        return out;
      }
      auto i = w.path()[depth];
      if (i > n.children.size())
        throw AddressError("address " + w.str() + " is not in the replica");
      ViewTree out = n;
      out.children[i - 1] = (*this)(n.children[i - 1], depth + 1);
      return out;
    }
  };
  return Rec{p, v, w}(r, 0);
}

/// Update order on view trees: `a` develops into `b` by expanding buds.
inline bool is_view_update(const ViewTree& a, const ViewTree& b) {
  if (a.bud) return a.sort == b.sort;
  if (b.bud || a.sort != b.sort || a.children.size() != b.children.size())
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!is_view_update(a.children[i], b.children[i])) return false;
  return true;
}

}  // namespace replimerge
