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

#include <catch_amalgamated.hpp>

#include <random>

#include "replimerge/oracle.hpp"
#include "test_support.hpp"

using namespace replimerge;

namespace {

DocTree t(const char* text) { return parse_doc_tree(text); }

}  // namespace

TEST_CASE("node addresses", "[doc_tree]") {
  CHECK(NodeAddress::parse("ε").is_root());
  CHECK(NodeAddress::parse("").is_root());
  auto w = NodeAddress::parse("2.1");
  CHECK(w.depth() == 2);
  CHECK(w.str() == "2.1");
  CHECK(NodeAddress::root().str() == "ε");
  CHECK(NodeAddress::parse("2").is_prefix_of(w));
  CHECK_FALSE(w.is_prefix_of(NodeAddress::parse("2")));
  CHECK(NodeAddress::parse("2").child(1) == w);
  CHECK_THROWS_AS(NodeAddress::parse("0"), ParseError);
  CHECK_THROWS_AS(NodeAddress::parse("1..2"), ParseError);
}

TEST_CASE("domain and lookup", "[doc_tree]") {
  auto d = t("(P1 (P7) (P3 (P6 (P7) (P7)) (P2)))");
  CHECK(d.size() == 7);
  std::vector<std::string> dom;
  for (const auto& w : d.domain()) dom.push_back(w.str());
  CHECK(dom == std::vector<std::string>{"ε", "1", "2", "2.1", "2.1.1", "2.1.2", "2.2"});
  CHECK(d.at(NodeAddress::parse("2.1")).label.name == "P6");
  CHECK_FALSE(d.contains(NodeAddress::parse("1.1")));
  CHECK_THROWS_AS(d.at(NodeAddress::parse("3")), AddressError);
}

TEST_CASE("sexpr round trip", "[doc_tree][format]") {
  auto eg = reference::extended();
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    auto d = testing::random_open_tree(rng, eg, "A", 15);
    CHECK(parse_doc_tree(to_sexpr(d)) == d);
    CHECK(parse_doc_tree(eg, to_sexpr(d), "A") == d);
  }
  CHECK(to_sexpr(DocTree::bud("C")) == "(? C)");
  CHECK_THROWS_AS(parse_doc_tree("(P1 (P7)"), ParseError);
  CHECK_THROWS_AS(parse_doc_tree(eg, "(P1 (P7))", "A"), ValidationError);
}

TEST_CASE("conformance", "[doc_tree]") {
  auto eg = reference::extended();
  CHECK(conforms(eg, t("(P1 (P7) (P3 (P7) (P2)))"), "A").status == Conformance::closed);
  CHECK(conforms(eg, t("(P1 (? C) (? B))"), "A").status == Conformance::open);
  auto bad = conforms(eg, t("(P1 (P2) (? B))"), "A");
  CHECK(bad.status == Conformance::invalid);
  CHECK(bad.where.str() == "1");
  CHECK(conforms(eg, t("(P2)"), "C").status == Conformance::invalid);
  CHECK(conforms(eg, t("(P2 (P7))"), "A").status == Conformance::invalid);
  CHECK(conforms(eg, t("(P8)"), "A").status == Conformance::invalid);
  CHECK_THROWS_AS(require_valid(eg, t("(P1 (P2) (? B))"), "A"), ValidationError);
  CHECK(node_type(eg, t("(P1 (P7) (? B))"), NodeAddress::parse("2")) == "B");
}

TEST_CASE("closed documents contain no bud", "[doc_tree][property]") {
  auto eg = reference::extended();
  for (const auto& d : oracle::enumerate_conforming(eg, "A", 7, false)) {
    bool closed = conforms(eg, d, "A").status == Conformance::closed;
    CHECK(closed == (count_buds(d) == 0));
  }
}

TEST_CASE("apply_production grows the domain by the arity", "[doc_tree][property]") {
  auto eg = reference::extended();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    auto chain = testing::random_chain(rng, eg, DocTree::bud("A"), 8);
    for (std::size_t k = 1; k < chain.size(); ++k) {
      auto grown = chain[k].size() - chain[k - 1].size();
      // The developed node keeps its address; its label is a production
      // whose arity is exactly the growth.
      bool found = false;
      for (const auto& w : chain[k - 1].domain()) {
        if (!chain[k - 1].at(w).is_bud() || chain[k].at(w).is_bud()) continue;
        CHECK(eg.base().production(chain[k].at(w).label.name).arity() == grown);
        found = true;
      }
      CHECK(found);
      CHECK(conforms(eg, chain[k], "A").status != Conformance::invalid);
    }
  }
  auto d = t("(P1 (P7) (? B))");
  CHECK_THROWS_AS(apply_production(eg, d, NodeAddress::parse("1"), "P6"), NotABud);
  CHECK_THROWS_AS(apply_production(eg, d, NodeAddress::parse("2"), "P6"), TypeMismatch);
  CHECK_THROWS_AS(apply_production(eg, d, NodeAddress::parse("3"), "P4"), AddressError);
  CHECK(apply_production(eg, d, NodeAddress::parse("2"), "P4") ==
        t("(P1 (P7) (P4 (? B) (? B)))"));
}

TEST_CASE("update order is a partial order", "[doc_tree][property]") {
  auto eg = reference::extended();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    auto chain = testing::random_chain(rng, eg, DocTree::bud("A"), 6);
    for (std::size_t a = 0; a < chain.size(); ++a) {
      CHECK(is_update(eg, chain[a], chain[a]));
      for (std::size_t b = a; b < chain.size(); ++b) {
        CHECK(is_update(eg, chain[a], chain[b]));
        if (b != a) CHECK_FALSE(is_update(eg, chain[b], chain[a]));
      }
    }
  }
  // Antisymmetry and transitivity over every pair/triple of small trees.
  auto small = oracle::enumerate_conforming(eg, "A", 5, false);
  for (const auto& x : small)
    for (const auto& y : small) {
      if (!is_update(eg, x, y)) continue;
      if (is_update(eg, y, x)) CHECK(x == y);
      for (const auto& z : small)
        if (is_update(eg, y, z)) CHECK(is_update(eg, x, z));
    }
}

TEST_CASE("prune_at yields a prefix", "[doc_tree][property]") {
  auto eg = reference::extended();
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    auto d = testing::random_open_tree(rng, eg, "A", 12);
    auto dom = d.domain();
    std::set<NodeAddress> cut;
    for (const auto& w : dom)
      if (rng() % 4 == 0) cut.insert(w);
    auto p = prune_at(eg, d, cut);
    CHECK(is_update(eg, p, d));
    for (const auto& w : cut) {
      bool under_other = false;
      for (const auto& u : cut) under_other |= (u != w && u.is_prefix_of(w));
      if (!under_other) CHECK(p.at(w).is_bud());
    }
  }
  CHECK_THROWS_AS(prune_at(eg, t("(P2)"), {NodeAddress::parse("1")}), AddressError);
}

TEST_CASE("proper prefixes of a document", "[doc_tree]") {
  auto eg = reference::extended();
  auto d = t("(P1 (P7) (P3 (P7) (P2)))");
  CHECK(all_proper_prefixes(eg, d).size() == 10);
  CHECK(all_proper_prefixes(eg, DocTree::bud("A")).empty());
}

TEST_CASE("proper prefixes equal the brute-force downset", "[doc_tree][property]") {
  auto eg = reference::extended();
  auto all = oracle::enumerate_conforming(eg, "A", 7, false);
  for (const auto& d : all) {
    TreeSet expected;
    for (const auto& u : all)
      if (!(u == d) && is_update(eg, u, d)) expected.insert(u);
    CHECK(all_proper_prefixes(eg, d) == expected);
  }
}

TEST_CASE("sort trees", "[doc_tree]") {
  auto eg = reference::extended();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    auto d = testing::random_open_tree(rng, eg, "A", 12);
    auto st = to_sort_tree(eg, d);
    CHECK(from_sort_tree(eg, st) == d);
    // The reference grammar has distinct signatures, so annotations are redundant.
    struct Strip {
      void operator()(SortTree& n) const {
        n.production.clear();
        for (auto& c : n.children) (*this)(c);
      }
    };
    Strip{}(st);
    CHECK(from_sort_tree(eg, st) == d);
  }
  auto ambiguous = ExtendedGrammar(parse_grammar("axiom S\nP: S ->\nQ: S ->\n"));
  CHECK_THROWS_AS(from_sort_tree(ambiguous, SortTree{"S", false, "", {}}), ValidationError);
  CHECK(from_sort_tree(ambiguous, SortTree{"S", false, "Q", {}}) == DocTree::node("Q"));
}

TEST_CASE("canonical order is by size then encoding", "[doc_tree]") {
  std::vector<DocTree> v{t("(P1 (P7) (? B))"), t("(P2)"), t("(? A)")};
  auto s = canonical_sorted(v);
  CHECK(s.front().size() == 1);
  CHECK(s.back() == t("(P1 (P7) (? B))"));
  CHECK(canonical_less(t("(P2)"), t("(P1 (P7) (? B))")));
}
