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
 * Consensus product of automata with exit states and the merge pipeline.
 *
 * A product state is a pair of component states of the same type. A
 * component that reaches an exit state falls asleep: it is replaced by the
 * Open state of each child type and lets the other component drive. Two
 * live components without a common transition are in conflict and the
 * product state exits with a bud.
 */

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "replimerge/automaton.hpp"
#include "replimerge/error.hpp"
#include "replimerge/expansion.hpp"
#include "replimerge/tree_merge.hpp"
#include "replimerge/view.hpp"

namespace replimerge {

/// No label/arity is shared by the transitions of q1 and q2.
inline bool states_in_conflict(const TreeAutomaton& a1, StateId q1,
                               const TreeAutomaton& a2, StateId q2) {
  if (a1.type_of(q1) != a2.type_of(q2))
    throw TypeMismatch("states of type " + a1.type_of(q1) + " and " +
                       a2.type_of(q2) + " cannot be compared");
  for (const auto& t1 : a1.next(q1))
    for (const auto& t2 : a2.next(q2))
      if (t1.label == t2.label && t1.children.size() == t2.children.size())
        return false;
  return true;
}

class ConsensusSpec {
 public:
  using State = std::pair<StateId, StateId>;

  ConsensusSpec(AutomatonPtr left, AutomatonPtr right)
      : left_(std::move(left)), right_(std::move(right)) {}

  const TreeAutomaton& left() const { return *left_; }
  const TreeAutomaton& right() const { return *right_; }

  std::string index_key(const State& s) const {
    return std::to_string(s.first) + "," + std::to_string(s.second);
  }
  std::string display_key(const State& s) const {
    return "(" + left_->key(s.first) + " ; " + right_->key(s.second) + ")";
  }

  bool is_exit(const State& s) const {
    if (left_->type_of(s.first) != right_->type_of(s.second))
      throw RootTypeConflict("product state pairs types " +
                             left_->type_of(s.first) + " and " +
                             right_->type_of(s.second));
    bool e1 = left_->is_exit(s.first), e2 = right_->is_exit(s.second);
    if (e1 && e2) return true;
    if (e1 || e2) return false;
    return states_in_conflict(*left_, s.first, *right_, s.second);
  }
  Sort type_of(const State& s) const { return left_->type_of(s.first); }
  State asleep(const Sort& sort) const {
    return {left_->asleep(sort), right_->asleep(sort)};
  }

  template <class Intern>
  std::vector<Transition> next(const State& s, Intern&& intern) const {
    std::vector<Transition> out;
    bool e1 = left_->is_exit(s.first), e2 = right_->is_exit(s.second);
    if (!e1 && !e2) {
      for (const auto& t1 : left_->next(s.first))
        for (const auto& t2 : right_->next(s.second)) {
          if (t1.label != t2.label || t1.children.size() != t2.children.size())
            continue;
          Transition t{t1.label, {}};
          for (std::size_t j = 0; j < t1.children.size(); ++j)
            t.children.push_back(intern({t1.children[j], t2.children[j]}));
          out.push_back(std::move(t));
        }
    } else if (!e1) {
      for (const auto& t1 : left_->next(s.first)) {
        Transition t{t1.label, {}};
        for (auto c : t1.children)
          t.children.push_back(intern({c, right_->asleep(left_->type_of(c))}));
        out.push_back(std::move(t));
      }
    } else {
      for (const auto& t2 : right_->next(s.second)) {
        Transition t{t2.label, {}};
        for (auto c : t2.children)
          t.children.push_back(intern({left_->asleep(right_->type_of(c)), c}));
        out.push_back(std::move(t));
      }
    }
    return out;
  }

 private:
  AutomatonPtr left_;
  AutomatonPtr right_;
};

using ConsensusAutomaton = LazyAutomaton<ConsensusSpec>;

inline Rooted consensus_product(const Rooted& a1, const Rooted& a2) {
  if (a1->type_of(a1.initial) != a2->type_of(a2.initial))
    throw RootTypeConflict("initial states have types " +
                           a1->type_of(a1.initial) + " and " +
                           a2->type_of(a2.initial));
  auto a = std::make_shared<ConsensusAutomaton>(
      ConsensusSpec(a1.automaton, a2.automaton));
  auto q0 = a->intern({a1.initial, a2.initial});
  return {a, q0};
}

/// Left fold: ((a1 x a2) x a3) x ...; a single automaton is returned as is.
inline Rooted consensus_product_k(const std::vector<Rooted>& parts) {
  if (parts.empty()) throw ValidationError("consensus of zero automata");
  Rooted acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i)
    acc = consensus_product(acc, parts[i]);
  return acc;
}

/// Trees obtained by unfolding the automaton from q0 without ever revisiting
/// a state on a root-to-node path.
inline std::vector<DocTree> simplest_asts(const TreeAutomaton& a, StateId q0,
                                          std::size_t budget = kDefaultStateBudget) {
  reachable_states(a, q0, budget);
  std::size_t work = 0;
  struct Rec {
    const TreeAutomaton& a;
    std::size_t budget;
    std::size_t& work;
    std::vector<StateId> path;

    std::vector<DocTree> operator()(StateId q) {
      if (++work > budget * 16)
        throw BudgetExceeded("simplest unfolding exceeds the work budget");
      for (auto p : path)
        if (p == q) return {};
      path.push_back(q);
      std::set<DocTree> acc;
      for (const auto& tr : a.next(q)) {
        std::vector<DocTree> partial{DocTree{tr.label, {}}};
        for (auto c : tr.children) {
          auto options = (*this)(c);
          std::vector<DocTree> grown;
          for (const auto& base : partial)
            for (const auto& o : options) {
              DocTree d = base;
              d.children.push_back(o);
              grown.push_back(std::move(d));
            }
          partial = std::move(grown);
          if (partial.empty()) break;
        }
        acc.insert(partial.begin(), partial.end());
      }
      path.pop_back();
      return std::vector<DocTree>(acc.begin(), acc.end());
    }
  };
  return canonical_sorted(Rec{a, budget, work, {}}(q0));
}

inline std::vector<DocTree> simplest_asts(const Rooted& r,
                                          std::size_t budget = kDefaultStateBudget) {
  return simplest_asts(*r, r.initial, budget);
}

/// A partial replica together with the view it was projected on.
struct Replica {
  View view;
  ViewTree tree;
};

enum class MergeMode { simplest, enumerate };

struct MergeOptions {
  MergeMode mode = MergeMode::simplest;
  std::size_t bound = 12;
  std::size_t budget = kDefaultStateBudget;
  /// Remove states with an empty language from each expansion before the
  /// product, so a dead branch cannot mask a conflict.
  bool trim_expansions = true;
};

inline Rooted consensus_automaton(const ExtendedGrammar& eg,
                                  const std::vector<Replica>& replicas,
                                  const MergeOptions& opt = {}) {
  std::vector<Rooted> parts;
  for (const auto& r : replicas) {
    auto e = expansion_automaton(eg, r.view, r.tree);
    parts.push_back(opt.trim_expansions ? trim(e, opt.budget) : e);
  }
  return consensus_product_k(parts);
}

/// Expands every replica, folds the consensus product and reads the result
/// back as a set of documents ordered by (node count, canonical text).
inline std::vector<DocTree> consensual_merge(const ExtendedGrammar& eg,
                                             const std::vector<Replica>& replicas,
                                             const MergeOptions& opt = {}) {
  auto sc = consensus_automaton(eg, replicas, opt);
  if (opt.mode == MergeMode::simplest) return simplest_asts(sc, opt.budget);
  reachable_states(sc, opt.budget);
  return enumerate(sc, opt.bound);
}

}  // namespace replimerge
