// Copyright 2026 The codeprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Token-level structural analysis of a Java method: a block tree of the
// control structures and the metrics computed from it.
//
// The tree has one node per control structure. Conventions for children:
//   sequence   statements in order
//   if         [then]
//   if-else    [then, else]
//   for/while/do-while   [body]
//   switch     one sequence per case label (default included)
//   try        [body, catch..., finally?]  (has_finally marks the last)
//   statement  ternary nodes found in the statement, possibly none
//   ternary    no children
// Lambda bodies, anonymous classes and local classes are opaque: their
// tokens belong to the enclosing statement and are skipped by every metric.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codeprobe/error.hpp"
#include "codeprobe/lexer.hpp"

namespace codeprobe {

enum class NodeKind {
  kSequence,
  kIf,
  kIfElse,
  kFor,
  kWhile,
  kDoWhile,
  kSwitch,
  kTry,
  kTernary,
  kStatement,
};

constexpr std::string_view node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::kSequence: return "sequence";
    case NodeKind::kIf: return "if";
    case NodeKind::kIfElse: return "if-else";
    case NodeKind::kFor: return "for";
    case NodeKind::kWhile: return "while";
    case NodeKind::kDoWhile: return "do-while";
    case NodeKind::kSwitch: return "switch";
    case NodeKind::kTry: return "try";
    case NodeKind::kTernary: return "ternary";
    case NodeKind::kStatement: return "statement";
  }
  return "unknown";
}

constexpr bool is_structure(NodeKind k) {
  switch (k) {
    case NodeKind::kIf:
    case NodeKind::kIfElse:
    case NodeKind::kFor:
    case NodeKind::kWhile:
    case NodeKind::kDoWhile:
    case NodeKind::kSwitch:
    case NodeKind::kTry:
      return true;
    default:
      return false;
  }
}

// Half-open token index range.
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool contains(std::size_t i) const { return i >= begin && i < end; }
};

struct StructureNode {
  NodeKind kind = NodeKind::kSequence;
  std::vector<StructureNode> children;
  // Number of && and || in the governing condition.
  int condition_logical_ops = 0;
  bool has_default = false;
  bool has_finally = false;
  TokenRange tokens;
};

struct StructureTree {
  StructureNode root;
  std::vector<TokenRange> opaque;

  bool is_opaque(std::size_t token_index) const {
    return std::any_of(opaque.begin(), opaque.end(),
                       [&](const TokenRange& r) { return r.contains(token_index); });
  }
};

// Compact s-expression, e.g. "sequence[if[sequence[statement]]]". Used by
// tests and diagnostics.
inline std::string describe(const StructureNode& node) {
  std::string out(node_kind_name(node.kind));
  if (!node.children.empty()) {
    out += '[';
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      if (i) out += ',';
      out += describe(node.children[i]);
    }
    out += ']';
  }
  return out;
}

namespace detail {

inline bool is_open(std::string_view s) { return s == "(" || s == "[" || s == "{"; }
inline bool is_close(std::string_view s) { return s == ")" || s == "]" || s == "}"; }

inline void check_balanced(std::span<const Token> tokens) {
  std::vector<char> stack;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::kSymbol) continue;
    if (is_open(t.text)) {
      stack.push_back(t.text[0]);
    } else if (is_close(t.text)) {
      const char want = t.text == ")" ? '(' : t.text == "]" ? '[' : '{';
      if (stack.empty() || stack.back() != want) {
        throw Error(ErrorCode::kUnbalancedDelimiters,
                    "unmatched '" + t.text + "' at token " + std::to_string(i));
      }
      stack.pop_back();
    }
  }
  if (!stack.empty()) {
    throw Error(ErrorCode::kUnbalancedDelimiters,
                "unclosed '" + std::string(1, stack.back()) + "'");
  }
}

// A '?' that is a generic wildcard rather than a conditional operator.
inline bool is_wildcard(std::span<const Token> tokens, std::size_t i) {
  if (i > 0 && (tokens[i - 1].is("<") || tokens[i - 1].is(","))) {
    if (i + 1 >= tokens.size()) return true;
    const Token& next = tokens[i + 1];
    return next.is(">") || next.is(">>") || next.is(">>>") || next.is(",") ||
           next.is("extends") || next.is("super");
  }
  return false;
}

inline bool is_logical_or_and(const Token& t) { return t.is("&&") || t.is("||"); }

class BlockParser {
 public:
  BlockParser(std::span<const Token> tokens, std::vector<TokenRange>& opaque)
      : tokens_(tokens), opaque_(opaque) {}

  StructureNode parse_method() {
    if (tokens_.empty()) return make(NodeKind::kSequence, 0, 0);
    std::size_t body = 0;
    if (tokens_[0].is("{")) {
      body = 0;
    } else if (auto open = declaration_body(); open != kNone) {
      body = open;
    } else {
      return parse_sequence_until_end(0);
    }
    pos_ = body;
    StructureNode root = parse_block();
    if (pos_ != tokens_.size()) {
      // Trailing statements after a leading block, e.g. "{ a(); } b();".
      if (body != 0) {
        throw Error(ErrorCode::kUnbalancedDelimiters,
                    "tokens after method body at " + std::to_string(pos_));
      }
      StructureNode seq = make(NodeKind::kSequence, 0, tokens_.size());
      seq.children.push_back(std::move(root));
      while (pos_ < tokens_.size()) seq.children.push_back(parse_statement());
      return seq;
    }
    return root;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  const Token& peek(std::size_t ahead = 0) const {
    static const Token kEnd{};
    return pos_ + ahead < tokens_.size() ? tokens_[pos_ + ahead] : kEnd;
  }
  bool at_end() const { return pos_ >= tokens_.size(); }
  bool peek_is(std::string_view s, std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() && tokens_[pos_ + ahead].text == s;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kUnbalancedDelimiters,
                what + " at token " + std::to_string(pos_));
  }

  void expect(std::string_view s) {
    if (!peek_is(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  static StructureNode make(NodeKind kind, std::size_t begin, std::size_t end) {
    StructureNode n;
    n.kind = kind;
    n.tokens = {begin, end};
    return n;
  }

  // Index of the matching closer for the opener at `open`.
  std::size_t match(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < tokens_.size(); ++i) {
      if (tokens_[i].kind != TokenKind::kSymbol) continue;
      if (is_open(tokens_[i].text)) ++depth;
      if (is_close(tokens_[i].text) && --depth == 0) return i;
    }
    throw Error(ErrorCode::kUnbalancedDelimiters, "no matching closer");
  }

  // When the stream starts with a method signature, the index of the body's
  // opening brace.
  std::size_t declaration_body() const {
    static constexpr std::string_view kStatementStarts[] = {
        "if", "for", "while", "do", "switch", "try", "return", "throw",
        "break", "continue", "new", "this", "super", "assert", "else", "case",
        "default", ";"};
    for (auto s : kStatementStarts) {
      if (tokens_[0].is(s)) return kNone;
    }
    if (tokens_[0].is("synchronized") && tokens_.size() > 1 && tokens_[1].is("(")) {
      return kNone;
    }
    bool saw_params = false;
    int depth = 0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.is("(") || t.is("[")) ++depth;
      if (t.is(")") || t.is("]")) {
        --depth;
        if (t.is(")") && depth == 0) saw_params = true;
      }
      if (depth != 0) continue;
      if (t.is(";") || t.cls == TokenClass::kAssignment) return kNone;
      if (t.is("->")) return kNone;
      if (t.is("{")) return saw_params ? i : kNone;
    }
    return kNone;
  }

  StructureNode parse_sequence_until_end(std::size_t begin) {
    StructureNode seq = make(NodeKind::kSequence, begin, tokens_.size());
    pos_ = begin;
    while (!at_end()) seq.children.push_back(parse_statement());
    return seq;
  }

  StructureNode parse_block() {
    const std::size_t begin = pos_;
    expect("{");
    StructureNode seq = make(NodeKind::kSequence, begin, 0);
    while (!at_end() && !peek_is("}")) seq.children.push_back(parse_statement());
    expect("}");
    seq.tokens.end = pos_;
    return seq;
  }

  // Consumes a parenthesised header and returns the && / || count inside it.
  int parse_condition() {
    if (!peek_is("(")) fail("expected '('");
    const std::size_t open = pos_;
    const std::size_t close = match(open);
    int ops = 0;
    for (std::size_t i = open + 1; i < close; ++i) {
      if (tokens_[i].is("{")) {
        const std::size_t end = match(i);
        opaque_.push_back({i, end + 1});
        i = end;
        continue;
      }
      if (is_logical_or_and(tokens_[i])) ++ops;
    }
    pos_ = close + 1;
    return ops;
  }

  StructureNode parse_statement() {
    if (at_end()) fail("expected statement");
    const std::size_t begin = pos_;
    const Token& t = peek();

    if (t.is("{")) return parse_block();

    if (t.is("if")) {
      ++pos_;
      const int ops = parse_condition();
      StructureNode then_branch = parse_statement();
      StructureNode node = make(NodeKind::kIf, begin, 0);
      node.condition_logical_ops = ops;
      node.children.push_back(std::move(then_branch));
      if (peek_is("else")) {
        ++pos_;
        node.kind = NodeKind::kIfElse;
        node.children.push_back(parse_statement());
      }
      node.tokens.end = pos_;
      return node;
    }

    if (t.is("for") || t.is("while")) {
      ++pos_;
      StructureNode node = make(t.is("for") ? NodeKind::kFor : NodeKind::kWhile, begin, 0);
      node.condition_logical_ops = parse_condition();
      node.children.push_back(parse_statement());
      node.tokens.end = pos_;
      return node;
    }

    if (t.is("do")) {
      ++pos_;
      StructureNode node = make(NodeKind::kDoWhile, begin, 0);
      node.children.push_back(parse_statement());
      expect("while");
      node.condition_logical_ops = parse_condition();
      if (peek_is(";")) ++pos_;
      node.tokens.end = pos_;
      return node;
    }

    if (t.is("switch")) return parse_switch();
    if (t.is("try")) return parse_try();

    if (t.is("synchronized") && peek_is("(", 1)) {
      ++pos_;
      parse_condition();
      return parse_block();
    }

    if (t.is("else") || t.is("catch") || t.is("finally") || t.is("case")) {
      fail("dangling '" + t.text + "'");
    }

    // Labeled statement.
    if (t.kind == TokenKind::kIdentifier && peek_is(":", 1)) {
      pos_ += 2;
      if (at_end() || peek_is("}")) return make(NodeKind::kStatement, begin, pos_);
      return parse_statement();
    }

    if (starts_local_type()) return parse_local_type();
    return parse_simple_statement();
  }

  bool starts_local_type() const {
    for (std::size_t i = pos_; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.is("class") || t.is("interface") || t.is("enum")) return true;
      if (t.cls == TokenClass::kModifier && !(t.is("synchronized") &&
                                              i + 1 < tokens_.size() &&
                                              tokens_[i + 1].is("("))) {
        continue;
      }
      if (t.is("@") && i + 1 < tokens_.size() &&
          tokens_[i + 1].kind == TokenKind::kIdentifier) {
        ++i;
        continue;
      }
      return false;
    }
    return false;
  }

  StructureNode parse_local_type() {
    const std::size_t begin = pos_;
    while (!at_end() && !peek_is("{")) ++pos_;
    if (at_end()) fail("local type without body");
    const std::size_t close = match(pos_);
    opaque_.push_back({pos_, close + 1});
    pos_ = close + 1;
    return make(NodeKind::kStatement, begin, pos_);
  }

  StructureNode parse_switch() {
    const std::size_t begin = pos_;
    ++pos_;
    StructureNode node = make(NodeKind::kSwitch, begin, 0);
    node.condition_logical_ops = parse_condition();
    expect("{");
    while (!at_end() && !peek_is("}")) {
      if (!peek_is("case") && !peek_is("default")) fail("expected case label");
      const bool is_default = peek_is("default");
      const std::size_t label_begin = pos_;
      ++pos_;
      // Label expression ends at ':' or '->' outside parentheses.
      int depth = 0;
      bool arrow = false;
      while (!at_end()) {
        const Token& lt = peek();
        if (lt.is("(") || lt.is("[")) ++depth;
        if (lt.is(")") || lt.is("]")) --depth;
        if (depth == 0 && (lt.is(":") || lt.is("->"))) {
          arrow = lt.is("->");
          break;
        }
        ++pos_;
      }
      if (at_end()) fail("unterminated case label");
      ++pos_;
      if (is_default) node.has_default = true;
      StructureNode body = make(NodeKind::kSequence, label_begin, 0);
      if (arrow) {
        body.children.push_back(parse_statement());
      } else {
        while (!at_end() && !peek_is("}") && !peek_is("case") && !peek_is("default")) {
          body.children.push_back(parse_statement());
        }
      }
      body.tokens.end = pos_;
      node.children.push_back(std::move(body));
    }
    expect("}");
    if (node.children.empty()) {
      // An empty switch has one path through it.
      node.has_default = true;
      node.children.push_back(make(NodeKind::kSequence, pos_ - 1, pos_ - 1));
    }
    // Switch expressions used as statements end with ';'.
    if (peek_is(";")) ++pos_;
    node.tokens.end = pos_;
    return node;
  }

  StructureNode parse_try() {
    const std::size_t begin = pos_;
    ++pos_;
    StructureNode node = make(NodeKind::kTry, begin, 0);
    if (peek_is("(")) parse_condition();
    node.children.push_back(parse_block());
    while (peek_is("catch")) {
      ++pos_;
      parse_condition();
      node.children.push_back(parse_block());
    }
    if (peek_is("finally")) {
      ++pos_;
      node.children.push_back(parse_block());
      node.has_finally = true;
    }
    node.tokens.end = pos_;
    return node;
  }

  StructureNode parse_simple_statement() {
    const std::size_t begin = pos_;
    StructureNode node = make(NodeKind::kStatement, begin, 0);
    int depth = 0;
    while (!at_end()) {
      const Token& t = peek();
      if (t.is("{")) {
        const std::size_t close = match(pos_);
        opaque_.push_back({pos_, close + 1});
        pos_ = close + 1;
        continue;
      }
      if (t.is("(") || t.is("[")) ++depth;
      if (t.is(")") || t.is("]")) --depth;
      if (depth == 0 && t.is("}")) break;  // tolerate a missing ';'
      if (depth == 0 && t.is(";")) {
        ++pos_;
        break;
      }
      if (t.is("?") && !is_wildcard(tokens_, pos_)) {
        StructureNode ternary = make(NodeKind::kTernary, pos_, pos_ + 1);
        ternary.condition_logical_ops = ternary_condition_ops(begin, pos_);
        node.children.push_back(std::move(ternary));
      }
      ++pos_;
    }
    node.tokens.end = pos_;
    return node;
  }

  // Counts && / || in the operand to the left of the '?' at `question`,
  // scanning back to the nearest enclosing delimiter at the same depth.
  int ternary_condition_ops(std::size_t stmt_begin, std::size_t question) const {
    int ops = 0;
    int depth = 0;
    for (std::size_t i = question; i-- > stmt_begin;) {
      const Token& t = tokens_[i];
      if (t.is(")") || t.is("]")) ++depth;
      if (t.is("(") || t.is("[")) {
        if (depth == 0) break;
        --depth;
      }
      if (t.is("}")) {
        // Skip an opaque block wholesale.
        int braces = 1;
        while (i-- > stmt_begin && braces > 0) {
          if (tokens_[i].is("}")) ++braces;
          if (tokens_[i].is("{")) --braces;
        }
        ++i;
        continue;
      }
      if (depth == 0 && (t.cls == TokenClass::kAssignment || t.is(",") || t.is("?") ||
                         t.is(":") || t.is("->") || t.is("return") || t.is(";"))) {
        break;
      }
      if (is_logical_or_and(t)) ++ops;
    }
    return ops;
  }

  std::span<const Token> tokens_;
  std::vector<TokenRange>& opaque_;
  std::size_t pos_ = 0;
};

inline bool checked_add(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return !__builtin_add_overflow(a, b, &out);
}
inline bool checked_mul(std::uint64_t a, std::uint64_t b, std::uint64_t& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

inline std::uint64_t npath(const StructureNode& node) {
  auto add = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (!checked_add(a, b, r)) throw Error(ErrorCode::kOverflow, "npath exceeds 2^64");
    return r;
  };
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t r;
    if (!checked_mul(a, b, r)) throw Error(ErrorCode::kOverflow, "npath exceeds 2^64");
    return r;
  };
  const std::uint64_t ops = static_cast<std::uint64_t>(node.condition_logical_ops);
  switch (node.kind) {
    case NodeKind::kSequence:
    case NodeKind::kStatement: {
      std::uint64_t p = 1;
      for (const auto& c : node.children) p = mul(p, npath(c));
      return p;
    }
    case NodeKind::kIf:
      return add(add(ops, npath(node.children[0])), 1);
    case NodeKind::kIfElse:
      return add(add(ops, npath(node.children[0])), npath(node.children[1]));
    case NodeKind::kFor:
    case NodeKind::kWhile:
    case NodeKind::kDoWhile:
      return add(add(ops, npath(node.children[0])), 1);
    case NodeKind::kSwitch: {
      std::uint64_t p = node.has_default ? 0 : 1;
      for (const auto& c : node.children) p = add(p, npath(c));
      return p;
    }
    case NodeKind::kTry: {
      // (body + catches) * finally
      const std::size_t branches = node.children.size() - (node.has_finally ? 1 : 0);
      std::uint64_t p = 0;
      for (std::size_t i = 0; i < branches; ++i) p = add(p, npath(node.children[i]));
      if (node.has_finally) p = mul(p, npath(node.children.back()));
      return p;
    }
    case NodeKind::kTernary:
      return add(ops, 2);
  }
  return 1;
}

inline int body_depth(const StructureNode& body, int level);

inline int nesting_depth(const StructureNode& node, int level) {
  int best = level;
  switch (node.kind) {
    case NodeKind::kSequence:
    case NodeKind::kStatement:
    case NodeKind::kTernary:
      for (const auto& c : node.children) {
        // A bare block nested directly in a sequence is one level deeper.
        const int child_level =
            node.kind == NodeKind::kSequence && c.kind == NodeKind::kSequence ? level + 1
                                                                              : level;
        best = std::max(best, nesting_depth(c, child_level));
      }
      break;
    case NodeKind::kIfElse: {
      best = std::max(best, body_depth(node.children[0], level + 1));
      const StructureNode& alt = node.children[1];
      // "else if" continues the chain at the same level.
      const bool chain = alt.kind == NodeKind::kIf || alt.kind == NodeKind::kIfElse;
      best = std::max(best, chain ? nesting_depth(alt, level)
                                  : body_depth(alt, level + 1));
      break;
    }
    default:
      for (const auto& c : node.children) best = std::max(best, body_depth(c, level + 1));
      break;
  }
  return best;
}

// Body of a structure at `level`: a braced body does not add a level of
// its own.
inline int body_depth(const StructureNode& body, int level) {
  if (body.kind == NodeKind::kSequence) {
    int best = level;
    for (const auto& c : body.children) {
      const int child_level = c.kind == NodeKind::kSequence ? level + 1 : level;
      best = std::max(best, nesting_depth(c, child_level));
    }
    return best;
  }
  return std::max(level, nesting_depth(body, level));
}

}  // namespace detail

// Builds the block tree for a method (signature plus body), a bare block,
// or a plain statement sequence. Throws Error{kUnbalancedDelimiters} on
// malformed input.
inline StructureTree parse_blocks(std::span<const Token> tokens) {
  detail::check_balanced(tokens);
  StructureTree tree;
  detail::BlockParser parser(tokens, tree.opaque);
  tree.root = parser.parse_method();
  return tree;
}

// if, if-else, for, while, do-while, switch and try nodes.
inline int count_structures(const StructureNode& node) {
  int n = is_structure(node.kind) ? 1 : 0;
  for (const auto& c : node.children) n += count_structures(c);
  return n;
}
inline int count_structures(const StructureTree& tree) { return count_structures(tree.root); }

// 1 + decision points (if, for, while, case, catch, ternary, &&, ||).
// A do-while contributes through its trailing `while`. Tokens inside opaque
// regions are skipped.
inline int cyclomatic_complexity(std::span<const Token> tokens, const StructureTree& tree) {
  int decisions = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tree.is_opaque(i)) continue;
    const Token& t = tokens[i];
    if (t.is("if") || t.is("for") || t.is("while") || t.is("case") || t.is("catch") ||
        t.is("&&") || t.is("||")) {
      ++decisions;
    } else if (t.is("?") && !detail::is_wildcard(tokens, i)) {
      ++decisions;
    }
  }
  return 1 + decisions;
}

// Acyclic path count. Throws Error{kOverflow} past 2^64 - 1.
inline std::uint64_t npath_complexity(const StructureTree& tree) {
  return detail::npath(tree.root);
}

// Deepest structure nesting; the method body is level 0.
inline int max_indentation(const StructureTree& tree) {
  return detail::body_depth(tree.root, 0);
}

inline int unique_operators(std::span<const Token> tokens) {
  std::set<std::string_view> seen;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kOperator) seen.insert(t.text);
  }
  return static_cast<int>(seen.size());
}

// Distinct variable-like identifiers. An identifier is skipped when it is
// a call (followed by "("), a qualified member (preceded by "."), a type
// (followed by another identifier), an annotation (preceded by "@"), or a
// constructor / class name (preceded by "new" or "class").
inline int unique_variables(std::span<const Token> tokens) {
  std::set<std::string_view> seen;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::kIdentifier) continue;
    if (i + 1 < tokens.size()) {
      const Token& next = tokens[i + 1];
      if (next.is("(") || next.kind == TokenKind::kIdentifier) continue;
    }
    if (i > 0) {
      const Token& prev = tokens[i - 1];
      if (prev.is(".") || prev.is("@") || prev.is("new") || prev.is("class")) continue;
    }
    seen.insert(t.text);
  }
  return static_cast<int>(seen.size());
}

struct MetricVector {
  int token_count = 0;
  int unique_operators = 0;
  int unique_variables = 0;
  int structure_count = 0;
  int max_nesting = 0;
  int cyclomatic = 1;
  // Saturates at UINT64_MAX when the exact value overflows.
  std::uint64_t npath = 1;
  bool npath_overflow = false;
};

inline MetricVector compute_metrics(std::span<const Token> tokens) {
  const StructureTree tree = parse_blocks(tokens);
  MetricVector m;
  m.token_count = static_cast<int>(tokens.size());
  m.unique_operators = unique_operators(tokens);
  m.unique_variables = unique_variables(tokens);
  m.structure_count = count_structures(tree);
  m.max_nesting = max_indentation(tree);
  m.cyclomatic = cyclomatic_complexity(tokens, tree);
  try {
    m.npath = npath_complexity(tree);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kOverflow) throw;
    m.npath = std::numeric_limits<std::uint64_t>::max();
    m.npath_overflow = true;
  }
  return m;
}

}  // namespace codeprobe
