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

// Java method tokenizer. Comments and whitespace are dropped; every other
// lexeme is tagged with a kind and a class from the ten-class keyword /
// operator / symbol taxonomy used by the token-type probing task.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "codeprobe/error.hpp"

namespace codeprobe {

enum class TokenKind { kKeyword, kOperator, kSymbol, kIdentifier, kLiteral };

// The first ten values are the taxonomy classes, in label order.
enum class TokenClass : int {
  kModifier = 0,
  kFlowControl,
  kPrimitiveType,
  kErrorHandling,
  kArithmetic,
  kAssignment,
  kRelational,
  kLogical,
  kBitwise,
  kSymbol,
  // Outside the taxonomy.
  kOtherKeyword,
  kIdentifier,
  kLiteral,
};

inline constexpr int kTaxonomyClassCount = 10;

constexpr bool in_taxonomy(TokenClass c) {
  return static_cast<int>(c) < kTaxonomyClassCount;
}

constexpr std::string_view token_class_name(TokenClass c) {
  switch (c) {
    case TokenClass::kModifier: return "keyword:modifier";
    case TokenClass::kFlowControl: return "keyword:flow-control";
    case TokenClass::kPrimitiveType: return "keyword:primitive-type";
    case TokenClass::kErrorHandling: return "keyword:error-handling";
    case TokenClass::kArithmetic: return "operator:arithmetic";
    case TokenClass::kAssignment: return "operator:assignment";
    case TokenClass::kRelational: return "operator:relational";
    case TokenClass::kLogical: return "operator:logical";
    case TokenClass::kBitwise: return "operator:bitwise";
    case TokenClass::kSymbol: return "symbol";
    case TokenClass::kOtherKeyword: return "keyword:other";
    case TokenClass::kIdentifier: return "identifier";
    case TokenClass::kLiteral: return "literal";
  }
  return "unknown";
}

constexpr std::string_view token_kind_name(TokenKind k) {
  switch (k) {
    case TokenKind::kKeyword: return "keyword";
    case TokenKind::kOperator: return "operator";
    case TokenKind::kSymbol: return "symbol";
    case TokenKind::kIdentifier: return "identifier";
    case TokenKind::kLiteral: return "literal";
  }
  return "unknown";
}

// Byte offsets [begin, end) into the original source.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct Token {
  std::string text;
  TokenKind kind = TokenKind::kIdentifier;
  TokenClass cls = TokenClass::kIdentifier;
  Span span;

  bool is(std::string_view lexeme) const { return text == lexeme; }
};

// Equality ignores spans so streams lexed from differently formatted text
// compare equal.
inline bool same_lexemes(std::span<const Token> a, std::span<const Token> b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](const Token& x, const Token& y) {
                      return x.text == y.text && x.kind == y.kind && x.cls == y.cls;
                    });
}

namespace taxonomy {

inline constexpr std::array<std::string_view, 11> kModifiers = {
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "volatile", "transient", "native", "strictfp"};
inline constexpr std::array<std::string_view, 11> kFlowControl = {
    "if", "else", "for", "while", "do", "switch",
    "case", "default", "break", "continue", "return"};
inline constexpr std::array<std::string_view, 9> kPrimitiveTypes = {
    "int", "long", "short", "byte", "char", "float", "double", "boolean", "void"};
inline constexpr std::array<std::string_view, 6> kErrorHandling = {
    "try", "catch", "finally", "throw", "throws", "assert"};
inline constexpr std::array<std::string_view, 13> kOtherKeywords = {
    "class", "new", "instanceof", "this", "super", "import", "package",
    "enum", "interface", "extends", "implements", "const", "goto"};

// ++ and -- have no class of their own and are grouped with arithmetic.
inline constexpr std::array<std::string_view, 7> kArithmetic = {
    "+", "-", "*", "/", "%", "++", "--"};
inline constexpr std::array<std::string_view, 12> kAssignment = {
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="};
inline constexpr std::array<std::string_view, 6> kRelational = {
    "==", "!=", "<", ">", "<=", ">="};
inline constexpr std::array<std::string_view, 3> kLogical = {"&&", "||", "!"};
inline constexpr std::array<std::string_view, 7> kBitwise = {
    "&", "|", "^", "~", "<<", ">>", ">>>"};
inline constexpr std::array<std::string_view, 15> kSymbols = {
    "(", ")", "{", "}", "[", "]", ";", ",", ".", "::", "@", "?", ":", "->", "..."};

inline std::span<const std::string_view> members(TokenClass c) {
  switch (c) {
    case TokenClass::kModifier: return kModifiers;
    case TokenClass::kFlowControl: return kFlowControl;
    case TokenClass::kPrimitiveType: return kPrimitiveTypes;
    case TokenClass::kErrorHandling: return kErrorHandling;
    case TokenClass::kArithmetic: return kArithmetic;
    case TokenClass::kAssignment: return kAssignment;
    case TokenClass::kRelational: return kRelational;
    case TokenClass::kLogical: return kLogical;
    case TokenClass::kBitwise: return kBitwise;
    case TokenClass::kSymbol: return kSymbols;
    case TokenClass::kOtherKeyword: return kOtherKeywords;
    default: return {};
  }
}

inline bool contains(std::span<const std::string_view> set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

inline std::optional<TokenClass> keyword_class(std::string_view word) {
  for (TokenClass c : {TokenClass::kModifier, TokenClass::kFlowControl,
                       TokenClass::kPrimitiveType, TokenClass::kErrorHandling,
                       TokenClass::kOtherKeyword}) {
    if (contains(members(c), word)) return c;
  }
  return std::nullopt;
}

inline std::optional<TokenClass> punctuator_class(std::string_view p) {
  for (TokenClass c : {TokenClass::kArithmetic, TokenClass::kAssignment,
                       TokenClass::kRelational, TokenClass::kLogical,
                       TokenClass::kBitwise, TokenClass::kSymbol}) {
    if (contains(members(c), p)) return c;
  }
  return std::nullopt;
}

inline bool is_keyword(std::string_view word) { return keyword_class(word).has_value(); }

// Every reserved word the lexer tags as a keyword, in a fixed order.
inline const std::vector<std::string_view>& all_keywords() {
  static const std::vector<std::string_view> kAll = [] {
    std::vector<std::string_view> out;
    for (TokenClass c : {TokenClass::kModifier, TokenClass::kFlowControl,
                         TokenClass::kPrimitiveType, TokenClass::kErrorHandling,
                         TokenClass::kOtherKeyword}) {
      for (auto w : members(c)) out.push_back(w);
    }
    return out;
  }();
  return kAll;
}

}  // namespace taxonomy

// Total over lexer output: keywords map to their keyword class, operators
// and symbols to theirs, everything else to identifier or literal.
inline TokenClass classify_token(const Token& token) {
  switch (token.kind) {
    case TokenKind::kKeyword:
      return taxonomy::keyword_class(token.text).value_or(TokenClass::kOtherKeyword);
    case TokenKind::kOperator:
    case TokenKind::kSymbol:
      return taxonomy::punctuator_class(token.text).value_or(TokenClass::kSymbol);
    case TokenKind::kIdentifier:
      return TokenClass::kIdentifier;
    case TokenKind::kLiteral:
      return TokenClass::kLiteral;
  }
  return TokenClass::kLiteral;
}

namespace detail {

// Longest first, so the first prefix match is the maximal munch.
inline constexpr std::array<std::string_view, 50> kPunctuators = {
    ">>>=", "<<=", ">>=", ">>>", "...", "->", "::", "++", "--", "&&",
    "||",   "==",  "!=",  "<=",  ">=",  "+=", "-=", "*=", "/=", "%=",
    "&=",   "|=",  "^=",  "<<",  ">>",  "+",  "-",  "*",  "/",  "%",
    "=",    "<",   ">",   "!",   "~",   "&",  "|",  "^",  "?",  ":",
    ";",    ",",   ".",   "(",   ")",   "{",  "}",  "[",  "]",  "@"};

constexpr bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' ||
         c >= 0x80;
}
constexpr bool is_ident_part(unsigned char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
constexpr bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
constexpr bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline Error unlexable(std::size_t pos, std::string_view what) {
  return Error(ErrorCode::kUnlexableInput,
               std::string(what) + " at byte " + std::to_string(pos));
}

// Returns one past the closing quote of a string or char literal starting
// at `pos`.
inline std::size_t scan_quoted(std::string_view src, std::size_t pos, char quote) {
  std::size_t i = pos + 1;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\\') {
      i += 2;
      continue;
    }
    if (c == '\n' || c == '\r') break;
    if (c == quote) return i + 1;
    ++i;
  }
  throw unlexable(pos, quote == '"' ? "unterminated string literal"
                                    : "unterminated char literal");
}

inline std::size_t scan_text_block(std::string_view src, std::size_t pos) {
  std::size_t i = pos + 3;
  while (i < src.size()) {
    if (src[i] == '\\') {
      i += 2;
      continue;
    }
    if (src.compare(i, 3, "\"\"\"") == 0) return i + 3;
    ++i;
  }
  throw unlexable(pos, "unterminated text block");
}

inline std::size_t scan_number(std::string_view src, std::size_t pos) {
  std::size_t i = pos;
  const bool hex = src.size() > pos + 1 && src[pos] == '0' &&
                   (src[pos + 1] == 'x' || src[pos + 1] == 'X');
  if (hex) i += 2;
  while (i < src.size()) {
    const unsigned char c = src[i];
    if (is_ident_part(c) && c < 0x80) {
      const bool exponent = hex ? (c == 'p' || c == 'P') : (c == 'e' || c == 'E');
      ++i;
      if (exponent && i < src.size() && (src[i] == '+' || src[i] == '-')) ++i;
    } else if (c == '.' && i + 1 < src.size() && is_digit(src[i + 1])) {
      ++i;
    } else if (c == '.' && !(i + 1 < src.size() && (src[i + 1] == '.' ||
                                                       is_ident_start(src[i + 1])))) {
      // Trailing dot as in "1." is part of the literal.
      ++i;
    } else {
      break;
    }
  }
  return i;
}

}  // namespace detail

// Splits Java method text into classified tokens. Throws
// Error{kUnlexableInput} on unterminated literals or comments and on bytes
// that cannot start any token.
inline std::vector<Token> tokenize(std::string_view source) {
  using namespace detail;
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto push = [&](std::size_t begin, std::size_t end, TokenKind kind) {
    Token t;
    t.text = std::string(source.substr(begin, end - begin));
    t.kind = kind;
    t.span = {begin, end};
    t.cls = classify_token(t);
    tokens.push_back(std::move(t));
  };

  while (i < n) {
    const unsigned char c = source[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '/') {
      while (i < n && source[i] != '\n' && source[i] != '\r') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '*') {
      const std::size_t close = source.find("*/", i + 2);
      if (close == std::string_view::npos) throw unlexable(i, "unterminated comment");
      i = close + 2;
      continue;
    }
    if (c == '"') {
      const std::size_t end = source.compare(i, 3, "\"\"\"") == 0
                                  ? scan_text_block(source, i)
                                  : scan_quoted(source, i, '"');
      push(i, end, TokenKind::kLiteral);
      i = end;
      continue;
    }
    if (c == '\'') {
      const std::size_t end = scan_quoted(source, i, '\'');
      push(i, end, TokenKind::kLiteral);
      i = end;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(source[i + 1]))) {
      const std::size_t end = scan_number(source, i);
      push(i, end, TokenKind::kLiteral);
      i = end;
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t end = i + 1;
      while (end < n && is_ident_part(source[end])) ++end;
      const std::string_view word = source.substr(i, end - i);
      TokenKind kind = TokenKind::kIdentifier;
      if (word == "true" || word == "false" || word == "null") {
        kind = TokenKind::kLiteral;
      } else if (taxonomy::is_keyword(word)) {
        kind = TokenKind::kKeyword;
      }
      push(i, end, kind);
      i = end;
      continue;
    }
    bool matched = false;
    for (std::string_view p : kPunctuators) {
      if (source.compare(i, p.size(), p) == 0) {
        const auto cls = taxonomy::punctuator_class(p);
        push(i, i + p.size(),
             cls == TokenClass::kSymbol ? TokenKind::kSymbol : TokenKind::kOperator);
        i += p.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw unlexable(i, "unexpected character");
  }
  return tokens;
}

// Canonical preprocessed form: lexemes joined by single spaces.
inline std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

}  // namespace codeprobe
