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
#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "replimerge/error.hpp"

namespace replimerge {

using Sort = std::string;

/// A structuring rule `name: lhs -> rhs...`.
struct Production {
  std::string name;
  Sort lhs;
  std::vector<Sort> rhs;

  std::size_t arity() const { return rhs.size(); }
  bool operator==(const Production&) const = default;
};

/// Node label of an AST: either a production name or, for a bud, the sort
/// of the bud. Bud labels double as the label of the nullary bud production
/// X_Omega, so automata use the same type for transition labels.
struct Label {
  std::string name;
  bool bud = false;

  static Label production(std::string name) { return {std::move(name), false}; }
  static Label bud_of(Sort sort) { return {std::move(sort), true}; }

  std::string str() const { return bud ? "?" + name : name; }
  auto operator<=>(const Label&) const = default;
};

/// Abstract context-free grammar (sorts, productions, axiom). Validated
/// eagerly on construction; everything downstream assumes the invariants.
class Grammar {
 public:
  Grammar(std::vector<Sort> sorts, std::vector<Production> productions,
          Sort axiom)
      : sorts_(std::move(sorts)),
        productions_(std::move(productions)),
        axiom_(std::move(axiom)) {
    validate();
    for (std::size_t i = 0; i < productions_.size(); ++i) {
      by_name_.emplace(productions_[i].name, i);
      by_lhs_[productions_[i].lhs].push_back(i);
    }
  }

  /// Builds a grammar whose sort set is the axiom plus every sort mentioned
  /// by a production, in order of first appearance.
  static Grammar from_productions(std::vector<Production> productions,
                                  Sort axiom) {
    std::vector<Sort> sorts;
    auto add = [&](const Sort& s) {
      if (std::find(sorts.begin(), sorts.end(), s) == sorts.end())
        sorts.push_back(s);
    };
    add(axiom);
    for (const auto& p : productions) {
      add(p.lhs);
      for (const auto& s : p.rhs) add(s);
    }
    return Grammar(std::move(sorts), std::move(productions), std::move(axiom));
  }

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<Production>& productions() const { return productions_; }
  const Sort& axiom() const { return axiom_; }

  bool has_sort(std::string_view s) const {
    return std::find(sorts_.begin(), sorts_.end(), s) != sorts_.end();
  }

  const Production* find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &productions_[it->second];
  }

  const Production& production(std::string_view name) const {
    if (const auto* p = find(name)) return *p;
    throw GrammarError({"unknown production '" + std::string(name) + "'"});
  }

  /// X-productions in declaration order.
  std::vector<const Production*> productions_of(const Sort& sort) const {
    std::vector<const Production*> out;
    if (auto it = by_lhs_.find(sort); it != by_lhs_.end())
      for (auto i : it->second) out.push_back(&productions_[i]);
    return out;
  }

 private:
  void validate() const {
    std::vector<std::string> errors;
    std::set<Sort> seen;
    for (const auto& s : sorts_) {
      if (s.empty()) errors.push_back("empty sort name");
      if (!seen.insert(s).second) errors.push_back("duplicate sort '" + s + "'");
    }
    if (!seen.count(axiom_))
      errors.push_back("axiom '" + axiom_ + "' is not a declared sort");
    std::set<std::string> names;
    for (const auto& p : productions_) {
      if (p.name.empty()) errors.push_back("production with empty name");
      if (!names.insert(p.name).second)
        errors.push_back("duplicate production name '" + p.name + "'");
      if (!seen.count(p.lhs))
        errors.push_back("production '" + p.name + "' has undeclared lhs '" +
                         p.lhs + "'");
      for (const auto& s : p.rhs)
        if (!seen.count(s))
          errors.push_back("production '" + p.name +
                           "' has undeclared rhs sort '" + s + "'");
    }
    if (!errors.empty()) throw GrammarError(std::move(errors));
  }

  std::vector<Sort> sorts_;
  std::vector<Production> productions_;
  Sort axiom_;
  std::map<std::string, std::size_t> by_name_;
  std::map<Sort, std::vector<std::size_t>> by_lhs_;
};

/// Grammar enriched with one bud sort X_omega and one nullary bud
/// production X_Omega per base sort. Documents under edition conform to it.
class ExtendedGrammar {
 public:
  explicit ExtendedGrammar(Grammar base) : base_(std::move(base)) {
    for (const auto& s : base_.sorts()) {
      bud_sorts_.emplace(s, s + "_ω");
      bud_productions_.emplace(s, s + "_Ω");
    }
  }

  const Grammar& base() const { return base_; }
  const Sort& axiom() const { return base_.axiom(); }
  bool has_sort(std::string_view s) const { return base_.has_sort(s); }

  const std::map<Sort, std::string>& bud_sorts() const { return bud_sorts_; }
  const std::map<Sort, std::string>& bud_productions() const {
    return bud_productions_;
  }

  /// Label of the bud (and of its nullary production) for a base sort.
  Label sort_to_bud_label(const Sort& s) const { return Label::bud_of(s); }

  std::size_t sort_count() const { return 2 * base_.sorts().size(); }
  std::size_t production_count() const {
    return base_.productions().size() + base_.sorts().size();
  }

  /// Sort of a node carrying `label`: lhs of a production, or the sort a
  /// bud stands for.
  const Sort& label_type(const Label& label) const {
    if (label.bud) {
      if (!has_sort(label.name))
        throw ValidationError("bud of unknown sort '" + label.name + "'");
      return *std::find(base_.sorts().begin(), base_.sorts().end(), label.name);
    }
    return base_.production(label.name).lhs;
  }

 private:
  Grammar base_;
  std::map<Sort, std::string> bud_sorts_;
  std::map<Sort, std::string> bud_productions_;
};

inline ExtendedGrammar extend_grammar(const Grammar& g) {
  return ExtendedGrammar(g);
}

}  // namespace replimerge
