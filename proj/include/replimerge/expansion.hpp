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
 * Expansion (reverse projection) of a partial replica as a lazy automaton.
 *
 * A state `(Close X, f)` generates the ASTs of type X whose projection is
 * `f` (X invisible) or `X[f]` (X visible); `(Open X, [])` generates the bud
 * of type X. Transitions come from the grammar productions by splitting the
 * forest among the children of each production.
 */

#include <memory>
#include <string>
#include <vector>

#include "replimerge/automaton.hpp"
#include "replimerge/dyck.hpp"
#include "replimerge/error.hpp"
#include "replimerge/grammar.hpp"
#include "replimerge/view.hpp"

namespace replimerge {

enum class Tag { open, close };

struct ForestState {
  Tag tag = Tag::close;
  Sort sort;
  ViewForest forest;

  static ForestState open(Sort s) { return {Tag::open, std::move(s), {}}; }
  static ForestState close(Sort s, ViewForest f) {
    return {Tag::close, std::move(s), std::move(f)};
  }
};

class ExpansionSpec {
 public:
  using State = ForestState;

  ExpansionSpec(ExtendedGrammar eg, View v) : eg_(std::move(eg)), v_(std::move(v)) {}

  const ExtendedGrammar& grammar() const { return eg_; }
  const View& view() const { return v_; }

  std::string index_key(const State& s) const {
    return (s.tag == Tag::open ? "O " : "C ") + s.sort + " | " + dyck_key(s.forest);
  }
  std::string display_key(const State& s) const {
    return (s.tag == Tag::open ? "Open " : "Close ") + s.sort + ", " +
           (s.forest.empty() ? std::string("ε") : render_dyck(s.forest, v_));
  }
  bool is_exit(const State& s) const {
    return s.tag == Tag::open || (!v_.contains(s.sort) && s.forest.empty());
  }
  Sort type_of(const State& s) const { return s.sort; }
  State asleep(const Sort& sort) const { return State::open(sort); }

  template <class Intern>
  std::vector<Transition> next(const State& s, Intern&& intern) const {
    std::vector<Transition> out;
    std::vector<StateId> kids;
    for (const auto* p : eg_.base().productions_of(s.sort)) {
      kids.clear();
      split(*p, s.forest, 0, 0, kids, out, intern);
    }
    return out;
  }

 private:
  // Assigns forest[pos..] to rhs[i..]: a visible child takes exactly one
  // tree rooted at its sort, an invisible child any contiguous run.
  template <class Intern>
  void split(const Production& p, const ViewForest& f, std::size_t i,
             std::size_t pos, std::vector<StateId>& kids,
             std::vector<Transition>& out, Intern& intern) const {
    if (i == p.rhs.size()) {
      if (pos == f.size()) out.push_back({Label::production(p.name), kids});
      return;
    }
    const Sort& x = p.rhs[i];
    if (v_.contains(x)) {
      if (pos >= f.size() || f[pos].sort != x) return;
      const ViewTree& t = f[pos];
      kids.push_back(intern(t.bud ? State::open(x) : State::close(x, t.children)));
      split(p, f, i + 1, pos + 1, kids, out, intern);
      kids.pop_back();
      return;
    }
    for (std::size_t end = pos; end <= f.size(); ++end) {
      ViewForest slice(f.begin() + static_cast<std::ptrdiff_t>(pos),
                       f.begin() + static_cast<std::ptrdiff_t>(end));
      kids.push_back(intern(State::close(x, std::move(slice))));
      split(p, f, i + 1, end, kids, out, intern);
      kids.pop_back();
    }
  }

  ExtendedGrammar eg_;
  View v_;
};

using ExpansionAutomaton = LazyAutomaton<ExpansionSpec>;

/// Automaton whose language is the set of minimal global documents (with
/// buds for unedited regions) projecting onto `r` under view `v`.
inline Rooted expansion_automaton(const ExtendedGrammar& eg, const View& v,
                                  const ViewTree& r) {
  validate_view_tree(v, r, eg.axiom());
  auto a = std::make_shared<ExpansionAutomaton>(ExpansionSpec(eg, v));
  auto q0 = a->intern(r.bud ? ForestState::open(r.sort)
                            : ForestState::close(r.sort, r.children));
  return {a, q0};
}

/// The ForestState behind an id of an expansion automaton.
inline const ForestState& expansion_state(const Rooted& r, StateId q) {
  const auto* a = dynamic_cast<const ExpansionAutomaton*>(r.automaton.get());
  if (!a) throw ValidationError("not an expansion automaton");
  return a->state(q);
}

}  // namespace replimerge
