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
 * Descending tree automata with exit states.
 *
 * An automaton is given behaviourally: `is_exit` and `next` on opaque state
 * ids. Concrete families (grammar, expansion, products) are instances of
 * `LazyAutomaton<Spec>`, which interns states on first sight and memoizes
 * their transitions. Construction is single-writer: an automaton may be read
 * concurrently only once every state of interest has been explored (e.g. by
 * `reachable_states`).
 */

#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "replimerge/doc_tree.hpp"
#include "replimerge/error.hpp"
#include "replimerge/grammar.hpp"

namespace replimerge {

using StateId = std::uint32_t;

/// `q -> (label, [children...])`.
struct Transition {
  Label label;
  std::vector<StateId> children;
  auto operator<=>(const Transition&) const = default;
};

class TreeAutomaton {
 public:
  virtual ~TreeAutomaton() = default;

  /// Exit states generate exactly one tree: the bud of their type.
  virtual bool is_exit(StateId q) const = 0;
  virtual const std::vector<Transition>& next(StateId q) const = 0;
  virtual const Sort& type_of(StateId q) const = 0;
  /// Canonical key; equal keys iff equal states.
  virtual std::string key(StateId q) const = 0;
  /// An exit state of the given type, used to put a product component to
  /// sleep once its own automaton has exited.
  virtual StateId asleep(const Sort& sort) const = 0;
  /// Number of states interned so far.
  virtual std::size_t materialized_states() const = 0;
};

using AutomatonPtr = std::shared_ptr<const TreeAutomaton>;

/// An automaton together with its initial state.
struct Rooted {
  AutomatonPtr automaton;
  StateId initial = 0;

  const TreeAutomaton& operator*() const { return *automaton; }
  const TreeAutomaton* operator->() const { return automaton.get(); }
};

constexpr std::size_t kDefaultStateBudget = 200000;

/// Memoizing automaton driven by a Spec:
///
///   struct Spec {
///     using State = ...;
///     std::string index_key(const State&) const;   // identity
///     std::string display_key(const State&) const; // human readable key
///     bool is_exit(const State&) const;
///     Sort type_of(const State&) const;
///     State asleep(const Sort&) const;
///     template <class Intern>
///     std::vector<Transition> next(const State&, Intern&& intern) const;
///   };
///
/// `next` is never called on exit states; their transition list is the
/// single bud transition.
template <class Spec>
class LazyAutomaton final : public TreeAutomaton {
 public:
  using State = typename Spec::State;

  explicit LazyAutomaton(Spec spec) : spec_(std::move(spec)) {}
  LazyAutomaton(const LazyAutomaton&) = delete;
  LazyAutomaton& operator=(const LazyAutomaton&) = delete;

  const Spec& spec() const { return spec_; }

  StateId intern(const State& s) const {
    auto k = spec_.index_key(s);
    if (auto it = index_.find(k); it != index_.end()) return it->second;
    auto id = static_cast<StateId>(states_.size());
    states_.push_back(s);
    exit_.push_back(spec_.is_exit(s));
    type_.push_back(spec_.type_of(s));
    next_.emplace_back();
    computed_.push_back(false);
    index_.emplace(std::move(k), id);
    return id;
  }

  const State& state(StateId q) const { return states_.at(q); }

  bool is_exit(StateId q) const override { return exit_.at(q); }
  const Sort& type_of(StateId q) const override { return type_.at(q); }
  std::string key(StateId q) const override {
    return spec_.display_key(states_.at(q));
  }
  StateId asleep(const Sort& sort) const override {
    return intern(spec_.asleep(sort));
  }
  std::size_t materialized_states() const override { return states_.size(); }

  const std::vector<Transition>& next(StateId q) const override {
    if (!computed_.at(q)) {
      std::vector<Transition> ts;
      if (exit_[q]) {
        ts.push_back({Label::bud_of(type_[q]), {}});
      } else {
        auto raw = spec_.next(states_[q],
                              [this](const State& s) { return intern(s); });
        std::set<Transition> seen;
        for (auto& t : raw)
          if (seen.insert(t).second) ts.push_back(std::move(t));
      }
      next_[q] = std::move(ts);
      computed_[q] = true;
    }
    return next_[q];
  }

 private:
  Spec spec_;
  mutable std::deque<State> states_;
  mutable std::deque<bool> exit_;
  mutable std::deque<Sort> type_;
  mutable std::deque<std::vector<Transition>> next_;
  mutable std::deque<bool> computed_;
  mutable std::unordered_map<std::string, StateId> index_;
};

// ---------------------------------------------------------------------------
// Grammar automaton

struct GrammarState {
  Sort sort;
  bool bud = false;
};

class GrammarSpec {
 public:
  using State = GrammarState;

  GrammarSpec(ExtendedGrammar eg, bool with_buds)
      : eg_(std::move(eg)), with_buds_(with_buds) {}

  std::string index_key(const State& s) const {
    return s.bud ? s.sort + "_ω" : s.sort;
  }
  std::string display_key(const State& s) const { return index_key(s); }
  bool is_exit(const State& s) const { return s.bud; }
  Sort type_of(const State& s) const { return s.sort; }
  State asleep(const Sort& sort) const { return {sort, true}; }

  template <class Intern>
  std::vector<Transition> next(const State& s, Intern&& intern) const {
    std::vector<Transition> out;
    for (const auto* p : eg_.base().productions_of(s.sort)) {
      Transition t{Label::production(p->name), {}};
      for (const auto& child : p->rhs) t.children.push_back(intern({child, false}));
      out.push_back(std::move(t));
    }
    if (with_buds_) out.push_back({Label::bud_of(s.sort), {}});
    return out;
  }

 private:
  ExtendedGrammar eg_;
  bool with_buds_;
};

using GrammarAutomaton = LazyAutomaton<GrammarSpec>;

/// The grammar read as a descending automaton: state X has one transition
/// per X-production (children = rhs sorts) and, when `with_buds`, the bud
/// transition as well; bud states X_ω are exit states.
inline std::shared_ptr<GrammarAutomaton> from_grammar(const ExtendedGrammar& eg,
                                                      bool with_buds = true) {
  auto a = std::make_shared<GrammarAutomaton>(GrammarSpec(eg, with_buds));
  for (const auto& s : eg.base().sorts()) {
    a->intern({s, false});
    a->intern({s, true});
  }
  return a;
}

inline Rooted grammar_rooted(const std::shared_ptr<GrammarAutomaton>& a,
                             const Sort& sort, bool bud = false) {
  return {a, a->intern({sort, bud})};
}

// ---------------------------------------------------------------------------
// Membership, enumeration, exploration

namespace detail {
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  auto r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}
}  // namespace detail

/// Number of accepting runs of `a` on `t` from `q` (0 = rejected).
inline std::uint64_t accepts(const TreeAutomaton& a, StateId q,
                             const DocTree& t) {
  std::uint64_t total = 0;
  for (const auto& tr : a.next(q)) {
    if (tr.label != t.label || tr.children.size() != t.children.size()) continue;
    std::uint64_t runs = 1;
    for (std::size_t i = 0; i < t.children.size() && runs; ++i)
      runs = detail::sat_mul(runs, accepts(a, tr.children[i], t.children[i]));
    total = detail::sat_add(total, runs);
  }
  return total;
}

inline std::uint64_t accepts(const Rooted& r, const DocTree& t) {
  return accepts(*r, r.initial, t);
}

namespace detail {

/// Size-indexed generation: trees(q, s) = trees with exactly s nodes.
class Enumerator {
 public:
  explicit Enumerator(const TreeAutomaton& a) : a_(a) {}

  const std::vector<DocTree>& exact(StateId q, std::size_t s) {
    auto key = std::make_pair(q, s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::set<DocTree> acc;
    if (s >= 1) {
      for (const auto& tr : a_.next(q)) {
        auto n = tr.children.size();
        if (n == 0) {
          if (s == 1) acc.insert(DocTree{tr.label, {}});
          continue;
        }
        if (s - 1 < n) continue;
        std::vector<DocTree> partial;
        fill(tr, 0, s - 1, partial, acc);
      }
    }
    return memo_.emplace(key, std::vector<DocTree>(acc.begin(), acc.end()))
        .first->second;
  }

 private:
  void fill(const Transition& tr, std::size_t i, std::size_t remaining,
            std::vector<DocTree>& partial, std::set<DocTree>& acc) {
    auto n = tr.children.size();
    if (i + 1 == n) {
      const auto& last = exact(tr.children[i], remaining);
      for (const auto& t : last) {
        partial.push_back(t);
        acc.insert(DocTree{tr.label, partial});
        partial.pop_back();
      }
      return;
    }
    for (std::size_t sz = 1; sz + (n - i - 1) <= remaining; ++sz) {
      // Copy: the recursive call below may insert into memo_, but std::map
      // references stay valid, so iterating the referenced vector is safe.
      const auto& options = exact(tr.children[i], sz);
      for (const auto& t : options) {
        partial.push_back(t);
        fill(tr, i + 1, remaining - sz, partial, acc);
        partial.pop_back();
      }
    }
  }

  const TreeAutomaton& a_;
  std::map<std::pair<StateId, std::size_t>, std::vector<DocTree>> memo_;
};

}  // namespace detail

/// Every accepted tree with at most `max_nodes` nodes, ordered by
/// (node count, canonical text).
inline std::vector<DocTree> enumerate(const TreeAutomaton& a, StateId q0,
                                      std::size_t max_nodes) {
  detail::Enumerator e(a);
  std::vector<DocTree> out;
  for (std::size_t s = 1; s <= max_nodes; ++s) {
    const auto& layer = e.exact(q0, s);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return canonical_sorted(std::move(out));
}

inline std::vector<DocTree> enumerate(const Rooted& r, std::size_t max_nodes) {
  return enumerate(*r, r.initial, max_nodes);
}

/// Breadth-first closure over `next`, in discovery order.
inline std::vector<StateId> reachable_states(
    const TreeAutomaton& a, StateId q0,
    std::size_t budget = kDefaultStateBudget) {
  std::vector<StateId> order{q0};
  std::set<StateId> seen{q0};
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto& tr : a.next(order[i]))
      for (auto c : tr.children)
        if (seen.insert(c).second) {
          if (seen.size() > budget)
            throw BudgetExceeded("more than " + std::to_string(budget) +
                                 " reachable states");
          order.push_back(c);
        }
  }
  return order;
}

inline std::vector<StateId> reachable_states(
    const Rooted& r, std::size_t budget = kDefaultStateBudget) {
  return reachable_states(*r, r.initial, budget);
}

/// Least fixpoint of productive states among those reachable from q0.
inline std::set<StateId> productive_states(
    const TreeAutomaton& a, StateId q0,
    std::size_t budget = kDefaultStateBudget) {
  auto states = reachable_states(a, q0, budget);
  std::set<StateId> productive;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto q : states) {
      if (productive.count(q)) continue;
      for (const auto& tr : a.next(q)) {
        bool ok = true;
        for (auto c : tr.children)
          if (!productive.count(c)) {
            ok = false;
            break;
          }
        if (ok) {
          productive.insert(q);
          changed = true;
          break;
        }
      }
    }
  }
  return productive;
}

/// True iff some tree is generable from q0.
inline bool nonempty(const TreeAutomaton& a, StateId q0,
                     std::size_t budget = kDefaultStateBudget) {
  return productive_states(a, q0, budget).count(q0) > 0;
}

inline bool nonempty(const Rooted& r, std::size_t budget = kDefaultStateBudget) {
  return nonempty(*r, r.initial, budget);
}

// ---------------------------------------------------------------------------
// Trimming

/// Same states as the inner automaton; transitions leading to a state with
/// an empty language are dropped. The language is unchanged.
class TrimmedAutomaton final : public TreeAutomaton {
 public:
  TrimmedAutomaton(AutomatonPtr inner, StateId q0, std::size_t budget)
      : inner_(std::move(inner)),
        productive_(productive_states(*inner_, q0, budget)) {}

  bool is_exit(StateId q) const override { return inner_->is_exit(q); }
  const Sort& type_of(StateId q) const override { return inner_->type_of(q); }
  std::string key(StateId q) const override { return inner_->key(q); }
  StateId asleep(const Sort& sort) const override { return inner_->asleep(sort); }
  std::size_t materialized_states() const override {
    return inner_->materialized_states();
  }

  const std::vector<Transition>& next(StateId q) const override {
    if (auto it = cache_.find(q); it != cache_.end()) return it->second;
    std::vector<Transition> kept;
    for (const auto& tr : inner_->next(q)) {
      bool ok = true;
      for (auto c : tr.children)
        if (!is_productive(c)) {
          ok = false;
          break;
        }
      if (ok) kept.push_back(tr);
    }
    return cache_.emplace(q, std::move(kept)).first->second;
  }

 private:
  bool is_productive(StateId q) const {
    return productive_.count(q) > 0 || inner_->is_exit(q);
  }

  AutomatonPtr inner_;
  std::set<StateId> productive_;
  mutable std::map<StateId, std::vector<Transition>> cache_;
};

inline Rooted trim(const Rooted& r, std::size_t budget = kDefaultStateBudget) {
  return {std::make_shared<TrimmedAutomaton>(r.automaton, r.initial, budget),
          r.initial};
}

// ---------------------------------------------------------------------------
// Classical synchronous product

class SyncProductSpec {
 public:
  using State = std::vector<StateId>;

  explicit SyncProductSpec(std::vector<AutomatonPtr> parts)
      : parts_(std::move(parts)) {}

  std::string index_key(const State& s) const {
    std::string out;
    for (auto q : s) out += std::to_string(q) + ",";
    return out;
  }
  std::string display_key(const State& s) const {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i)
      out += (i ? ", " : "") + parts_[i]->key(s[i]);
    return out + ")";
  }
  bool is_exit(const State& s) const {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!parts_[i]->is_exit(s[i])) return false;
    return true;
  }
  Sort type_of(const State& s) const { return parts_[0]->type_of(s[0]); }
  State asleep(const Sort& sort) const {
    State out;
    for (const auto& p : parts_) out.push_back(p->asleep(sort));
    return out;
  }

  template <class Intern>
  std::vector<Transition> next(const State& s, Intern&& intern) const {
    // Partial matches: label plus per-component child lists.
    struct Partial {
      Label label;
      std::vector<std::vector<StateId>> kids;
    };
    std::vector<Partial> acc;
    for (const auto& tr : parts_[0]->next(s[0])) acc.push_back({tr.label, {tr.children}});
    for (std::size_t i = 1; i < s.size(); ++i) {
      std::vector<Partial> grown;
      for (const auto& p : acc)
        for (const auto& tr : parts_[i]->next(s[i]))
          if (tr.label == p.label && tr.children.size() == p.kids[0].size()) {
            Partial q = p;
            q.kids.push_back(tr.children);
            grown.push_back(std::move(q));
          }
      acc = std::move(grown);
    }
    std::vector<Transition> out;
    for (const auto& p : acc) {
      Transition t{p.label, {}};
      for (std::size_t j = 0; j < p.kids[0].size(); ++j) {
        State child;
        for (const auto& k : p.kids) child.push_back(k[j]);
        t.children.push_back(intern(child));
      }
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  std::vector<AutomatonPtr> parts_;
};

/// Synchronous product: a transition exists iff every component has one
/// with the same label and arity. Recognizes the intersection.
inline Rooted product_sync(const std::vector<Rooted>& parts) {
  if (parts.empty()) throw ValidationError("product of zero automata");
  std::vector<AutomatonPtr> ptrs;
  std::vector<StateId> init;
  for (const auto& p : parts) {
    ptrs.push_back(p.automaton);
    init.push_back(p.initial);
  }
  auto a = std::make_shared<LazyAutomaton<SyncProductSpec>>(
      SyncProductSpec(std::move(ptrs)));
  auto q0 = a->intern(init);
  return {a, q0};
}

// ---------------------------------------------------------------------------
// Debug output and sampling

/// Graphviz dump of the reachable part.
inline void write_dot(const TreeAutomaton& a, StateId q0, std::ostream& os,
                      std::size_t budget = kDefaultStateBudget) {
  auto states = reachable_states(a, q0, budget);
  auto quote = [](std::string s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  os << "digraph automaton {\n  rankdir=LR;\n";
  for (auto q : states) {
    os << "  q" << q << " [label=" << quote("q" + std::to_string(q) + ": " + a.key(q))
       << (a.is_exit(q) ? ", shape=doubleoctagon" : ", shape=box")
       << (q == q0 ? ", penwidth=2" : "") << "];\n";
  }
  std::size_t hub = 0;
  for (auto q : states) {
    for (const auto& tr : a.next(q)) {
      if (tr.children.empty()) {
        os << "  leaf" << hub << " [shape=point];\n  q" << q << " -> leaf" << hub
           << " [label=" << quote(tr.label.str()) << "];\n";
      } else {
        os << "  t" << hub << " [shape=circle, width=0.15, label=\"\"];\n  q" << q
           << " -> t" << hub << " [label=" << quote(tr.label.str()) << "];\n";
        for (std::size_t i = 0; i < tr.children.size(); ++i)
          os << "  t" << hub << " -> q" << tr.children[i] << " [label=\"" << i + 1
             << "\"];\n";
      }
      ++hub;
    }
  }
  os << "}\n";
}

/// Smallest tree size per reachable state (absent = empty language).
inline std::map<StateId, std::size_t> min_tree_sizes(
    const TreeAutomaton& a, StateId q0,
    std::size_t budget = kDefaultStateBudget) {
  auto states = reachable_states(a, q0, budget);
  std::map<StateId, std::size_t> best;
  for (bool changed = true; changed;) {
    changed = false;
    for (auto q : states) {
      for (const auto& tr : a.next(q)) {
        std::size_t total = 1;
        bool ok = true;
        for (auto c : tr.children) {
          auto it = best.find(c);
          if (it == best.end()) {
            ok = false;
            break;
          }
          total += it->second;
        }
        if (!ok) continue;
        auto it = best.find(q);
        if (it == best.end() || total < it->second) {
          best[q] = total;
          changed = true;
        }
      }
    }
  }
  return best;
}

/// Uniform choice among the transitions that still fit in the node budget,
/// recursively. Returns nullopt when no tree of at most `max_nodes` exists.
template <class Rng>
std::optional<DocTree> sample_tree(const TreeAutomaton& a, StateId q0, Rng& rng,
                                   std::size_t max_nodes,
                                   const std::map<StateId, std::size_t>& min_size) {
  struct Rec {
    const TreeAutomaton& a;
    Rng& rng;
    const std::map<StateId, std::size_t>& min_size;

    std::size_t min_of(StateId q) const {
      auto it = min_size.find(q);
      return it == min_size.end() ? std::numeric_limits<std::size_t>::max() / 4
                                  : it->second;
    }

    DocTree operator()(StateId q, std::size_t budget) {
      std::vector<const Transition*> fits;
      for (const auto& tr : a.next(q)) {
        std::size_t need = 1;
        for (auto c : tr.children) need += min_of(c);
        if (need <= budget) fits.push_back(&tr);
      }
      const Transition& tr = *fits[static_cast<std::size_t>(rng() % fits.size())];
      DocTree out{tr.label, {}};
      std::size_t left = budget - 1;
      std::size_t reserved = 0;
      for (auto c : tr.children) reserved += min_of(c);
      for (auto c : tr.children) {
        reserved -= min_of(c);
        out.children.push_back((*this)(c, left - reserved));
        left -= out.children.back().size();
      }
      return out;
    }
  };
  Rec rec{a, rng, min_size};
  if (rec.min_of(q0) > max_nodes) return std::nullopt;
  return rec(q0, max_nodes);
}

}  // namespace replimerge
