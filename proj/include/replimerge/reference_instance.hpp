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
 * The sample document model with sorts A, B, C and the two-author instance
 * built on it, used by the demo command and the golden tests.
 */

#include <vector>

#include "replimerge/consensus.hpp"
#include "replimerge/text_format.hpp"

namespace replimerge::reference {

inline constexpr const char* kGrammarText =
    "axiom A\n"
    "P1: A -> C B\n"
    "P2: A ->\n"
    "P3: B -> C A\n"
    "P4: B -> B B\n"
    "P5: C -> A C\n"
    "P6: C -> C C\n"
    "P7: C ->\n";

inline Grammar grammar() { return parse_grammar(kGrammarText); }
inline ExtendedGrammar extended() { return ExtendedGrammar(grammar()); }

inline View view_ab(const ExtendedGrammar& eg) {
  return View(eg, {"A", "B"}, {{"A", {"(", ")"}}, {"B", {"[", "]"}}});
}
inline View view_ac(const ExtendedGrammar& eg) {
  return View(eg, {"A", "C"}, {{"A", {"(", ")"}}, {"C", {"[", "]"}}});
}

/// Replica of the first author, view {A, B}.
inline constexpr const char* kTv1 = "(A (A (B (B (A) (A)) (B (A)))) (B (A)))";
/// Its linearization with A = "()" and B = "[]".
inline constexpr const char* kTv1Dyck = "(([[()()][()]])[()])";

/// Replica of the second author, view {A, C}.
inline constexpr const char* kTv2 =
    "(A (C (A (C) (C) (A) (C) (A)) (C)) (C (C) (C)) (A))";
/// Its linearization with A = "()" and C = "[]".
inline constexpr const char* kTv2Dyck = "([([][]()[]())[]][[][]]())";

inline ViewTree tv1() { return parse_view_tree(kTv1); }
inline ViewTree tv2() { return parse_view_tree(kTv2); }

inline std::vector<Replica> replicas(const ExtendedGrammar& eg) {
  return {{view_ab(eg), tv1()}, {view_ac(eg), tv2()}};
}

/// Two documents that conflict at address 2.1 (C -> C C against C -> A C).
inline DocTree conflict_left() {
  return parse_doc_tree("(P1 (P7) (P3 (P6 (P7) (P7)) (P2)))");
}
inline DocTree conflict_right() {
  return parse_doc_tree("(P1 (P7) (P3 (P5 (P2) (P7)) (P2)))");
}

}  // namespace replimerge::reference
