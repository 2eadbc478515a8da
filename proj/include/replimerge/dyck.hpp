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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "replimerge/error.hpp"
#include "replimerge/view.hpp"

namespace replimerge {

struct DyckToken {
  enum class Kind { open, close, bud };
  Kind kind;
  Sort sort;

  static DyckToken open(Sort s) { return {Kind::open, std::move(s)}; }
  static DyckToken close(Sort s) { return {Kind::close, std::move(s)}; }
  static DyckToken bud(Sort s) { return {Kind::bud, std::move(s)}; }

  bool operator==(const DyckToken&) const = default;
};

namespace detail {
inline void encode_into(const ViewTree& t, std::vector<DyckToken>& out) {
  if (t.bud) {
    out.push_back(DyckToken::bud(t.sort));
    return;
  }
  out.push_back(DyckToken::open(t.sort));
  for (const auto& c : t.children) encode_into(c, out);
  out.push_back(DyckToken::close(t.sort));
}
}  // namespace detail

/// Depth-first, left-to-right linearization of a forest.
inline std::vector<DyckToken> dyck_encode(const ViewForest& f) {
  std::vector<DyckToken> out;
  for (const auto& t : f) detail::encode_into(t, out);
  return out;
}

/// Inverse of dyck_encode. Throws ParseError carrying the offending token
/// index for unbalanced or mismatched streams.
inline ViewForest dyck_decode(std::span<const DyckToken> tokens) {
  ViewForest top;
  std::vector<ViewTree> stack;
  auto sink = [&]() -> ViewForest& {
    return stack.empty() ? top : stack.back().children;
  };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    switch (tok.kind) {
      case DyckToken::Kind::open:
        stack.push_back(ViewTree::node(tok.sort));
        break;
      case DyckToken::Kind::bud:
        sink().push_back(ViewTree::bud_of(tok.sort));
        break;
      case DyckToken::Kind::close: {
        if (stack.empty())
          throw ParseError("unmatched closing symbol for " + tok.sort, i);
        if (stack.back().sort != tok.sort)
          throw ParseError("closing symbol for " + tok.sort + " does not match "
                               "open " + stack.back().sort,
                           i);
        ViewTree done = std::move(stack.back());
        stack.pop_back();
        sink().push_back(std::move(done));
        break;
      }
    }
  }
  if (!stack.empty())
    throw ParseError("unclosed symbol for " + stack.back().sort, tokens.size());
  return top;
}

/// Compact, view-independent text of a token stream, used as canonical state
/// key: `A(` … `)` per node and `?A` per bud, space separated.
inline std::string dyck_key(const ViewForest& f) {
  std::string out;
  for (const auto& tok : dyck_encode(f)) {
    if (!out.empty()) out += ' ';
    switch (tok.kind) {
      case DyckToken::Kind::open: out += tok.sort + "("; break;
      case DyckToken::Kind::close: out += ")"; break;
      case DyckToken::Kind::bud: out += "?" + tok.sort; break;
    }
  }
  return out;
}

/// Renders with the view's bracket pairs; buds as `<X>`.
inline std::string render_dyck(const ViewForest& f, const View& v) {
  std::string out;
  for (const auto& tok : dyck_encode(f)) {
    switch (tok.kind) {
      case DyckToken::Kind::open: out += v.brackets(tok.sort).open; break;
      case DyckToken::Kind::close: out += v.brackets(tok.sort).close; break;
      case DyckToken::Kind::bud: out += "<" + tok.sort + ">"; break;
    }
  }
  return out;
}

/// Tokenizes a rendering produced by render_dyck (longest symbol first).
/// Whitespace is ignored.
inline std::vector<DyckToken> parse_dyck(std::string_view text, const View& v) {
  struct Sym {
    std::string text;
    DyckToken tok;
  };
  std::vector<Sym> syms;
  for (const auto& s : v.sorts()) {
    syms.push_back({v.brackets(s).open, DyckToken::open(s)});
    syms.push_back({v.brackets(s).close, DyckToken::close(s)});
    syms.push_back({"<" + s + ">", DyckToken::bud(s)});
  }
  std::stable_sort(syms.begin(), syms.end(), [](const Sym& a, const Sym& b) {
    return a.text.size() > b.text.size();
  });
  std::vector<DyckToken> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n') {
      ++pos;
      continue;
    }
    bool matched = false;
    for (const auto& sym : syms) {
      if (text.substr(pos, sym.text.size()) == sym.text) {
        out.push_back(sym.tok);
        pos += sym.text.size();
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ParseError("unknown Dyck symbol at offset " + std::to_string(pos),
                       out.size());
  }
  return out;
}

}  // namespace replimerge
