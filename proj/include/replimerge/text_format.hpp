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
 * Text formats.
 *
 * Grammar files are line based:
 *
 *     # comment
 *     axiom A
 *     P1: A -> C B
 *     P2: A ->
 *
 * Documents are parenthesized expressions: `(P1 (P7) (P3 (P7) (P2)))` for
 * an AST, `(A (B (A)))` for a replica, `(? C)` for a bud in both.
 */

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "replimerge/doc_tree.hpp"
#include "replimerge/error.hpp"
#include "replimerge/grammar.hpp"
#include "replimerge/view.hpp"

namespace replimerge {

namespace detail {

inline std::string trim_ws(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

}  // namespace detail

/// Throws ParseError (position = 1-based line) on syntax errors and
/// GrammarError on semantic ones.
inline Grammar parse_grammar(std::string_view text) {
  std::vector<Production> prods;
  std::string axiom;
  std::vector<Sort> declared;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = detail::trim_ws(raw.substr(0, hash));
    if (line.empty()) continue;
    auto words = detail::split_ws(line);
    if (words[0] == "axiom") {
      if (words.size() != 2)
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected 'axiom <Sort>'",
                         line_no);
      if (!axiom.empty())
        throw ParseError("line " + std::to_string(line_no) + ": axiom declared twice",
                         line_no);
      axiom = words[1];
      continue;
    }
    if (words[0] == "sorts") {
      declared.insert(declared.end(), words.begin() + 1, words.end());
      continue;
    }
    auto colon = line.find(':');
    auto arrow = line.find("->");
    if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected 'Name: Lhs -> Rhs...'",
                       line_no);
    auto name = detail::split_ws(line.substr(0, colon));
    auto lhs = detail::split_ws(line.substr(colon + 1, arrow - colon - 1));
    auto rhs = detail::split_ws(line.substr(arrow + 2));
    if (name.size() != 1 || lhs.size() != 1)
      throw ParseError("line " + std::to_string(line_no) +
                           ": production needs one name and one lhs sort",
                       line_no);
    prods.push_back({name[0], lhs[0], rhs});
  }
  if (axiom.empty()) throw ParseError("missing 'axiom <Sort>' line", line_no);
  if (declared.empty()) return Grammar::from_productions(std::move(prods), axiom);
  return Grammar(std::move(declared), std::move(prods), axiom);
}

/// Canonical text of a grammar, accepted by parse_grammar.
inline std::string grammar_to_text(const Grammar& g) {
  std::string out = "axiom " + g.axiom() + "\nsorts";
  for (const auto& s : g.sorts()) out += " " + s;
  out += "\n";
  for (const auto& p : g.productions()) {
    out += p.name + ": " + p.lhs + " ->";
    for (const auto& s : p.rhs) out += " " + s;
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parenthesized expressions

struct SExpr {
  std::string head;
  bool bud = false;
  std::vector<SExpr> children;
};

namespace detail {

class SExprParser {
 public:
  explicit SExprParser(std::string_view text) : text_(text) {}

  SExpr parse_document() {
    skip();
    SExpr e = parse_node();
    skip();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("offset " + std::to_string(pos_) + ": " + what, pos_);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string word() {
    skip();
    auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  SExpr parse_node() {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != '(') fail("expected '('");
    ++pos_;
    SExpr e;
    e.head = word();
    if (e.head == "?") {
      e.bud = true;
      e.head = word();
    }
    for (;;) {
      skip();
      if (pos_ >= text_.size()) fail("unterminated expression");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      if (e.bud) fail("bud with children");
      e.children.push_back(parse_node());
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline DocTree to_doc_tree(const SExpr& e) {
  DocTree t{e.bud ? Label::bud_of(e.head) : Label::production(e.head), {}};
  for (const auto& c : e.children) t.children.push_back(to_doc_tree(c));
  return t;
}

inline ViewTree to_view(const SExpr& e) {
  ViewTree t{e.head, e.bud, {}};
  for (const auto& c : e.children) t.children.push_back(to_view(c));
  return t;
}

}  // namespace detail

inline SExpr parse_sexpr(std::string_view text) {
  return detail::SExprParser(text).parse_document();
}

/// AST form; checked against the grammar when `eg` is given.
inline DocTree parse_doc_tree(std::string_view text) {
  return detail::to_doc_tree(parse_sexpr(text));
}

inline DocTree parse_doc_tree(const ExtendedGrammar& eg, std::string_view text,
                              const Sort& root_sort) {
  DocTree t = parse_doc_tree(text);
  require_valid(eg, t, root_sort);
  return t;
}

inline ViewTree parse_view_tree(std::string_view text) {
  return detail::to_view(parse_sexpr(text));
}

inline ViewTree parse_view_tree(const View& v, std::string_view text,
                                const Sort& root_sort) {
  ViewTree r = parse_view_tree(text);
  validate_view_tree(v, r, root_sort);
  return r;
}

/// `A,B` or `A=(),B=[]` (the bracket text is split in two halves).
inline View parse_view(const ExtendedGrammar& eg, std::string_view text) {
  std::vector<Sort> sorts;
  std::map<Sort, Brackets> brackets;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    item = detail::trim_ws(item);
    if (item.empty()) throw ParseError("empty sort in view '" + std::string(text) + "'", 0);
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      sorts.push_back(item);
      continue;
    }
    auto sort = detail::trim_ws(item.substr(0, eq));
    auto pair = detail::trim_ws(item.substr(eq + 1));
    if (pair.size() < 2 || pair.size() % 2)
      throw ParseError("bracket pair for " + sort + " must have even length", 0);
    sorts.push_back(sort);
    brackets[sort] = {pair.substr(0, pair.size() / 2), pair.substr(pair.size() / 2)};
  }
  return View(eg, sorts, brackets);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

}  // namespace replimerge
