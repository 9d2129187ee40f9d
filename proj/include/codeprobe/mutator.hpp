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

// Single-site mutation operators that turn a valid method into an
// incorrect-code sample. Each operator picks its site uniformly among the
// applicable ones and throws Error{kNoApplicableSite} when there is none.

#include <algorithm>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "codeprobe/error.hpp"
#include "codeprobe/lexer.hpp"
#include "codeprobe/rng.hpp"
#include "codeprobe/tasks.hpp"

namespace codeprobe {

struct Mutation {
  Task task = Task::kTYP;
  std::vector<Token> original;
  std::vector<Token> mutated;
  // Changed token positions: one, or two adjacent ones for JBL.
  std::vector<std::size_t> sites;
  std::string replacement;
  std::uint64_t seed = 0;

  std::string mutated_text() const { return join_tokens(mutated); }
};

namespace detail {

inline Error no_site(Task task, std::string_view why) {
  return Error(ErrorCode::kNoApplicableSite,
               std::string(task_name(task)) + ": " + std::string(why));
}

inline std::vector<std::size_t> sites_where(std::span<const Token> tokens, auto&& pred) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (pred(tokens[i])) out.push_back(i);
  }
  return out;
}

inline Mutation start(Task task, std::span<const Token> tokens, const Rng& rng) {
  Mutation m;
  m.task = task;
  m.original.assign(tokens.begin(), tokens.end());
  m.mutated = m.original;
  m.seed = rng.seed();
  return m;
}

inline void replace_at(Mutation& m, std::size_t site, std::string text, TokenKind kind) {
  Token& t = m.mutated[site];
  t.text = std::move(text);
  t.kind = kind;
  t.cls = classify_token(t);
  m.sites = {site};
  m.replacement = t.text;
}

}  // namespace detail

// Misspellings of `word` reachable by one adjacent transposition that are
// neither the word itself nor a keyword, in a fixed order.
inline std::vector<std::string> transposition_misspellings(std::string_view word) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    std::string s(word);
    std::swap(s[i], s[i + 1]);
    if (s == word || taxonomy::is_keyword(s)) continue;
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  }
  return out;
}

// TYP: one primitive type keyword misspelled by transposing two adjacent
// characters, e.g. float -> flaot.
inline Mutation mutate_typ(std::span<const Token> tokens, Rng& rng) {
  const auto sites = detail::sites_where(
      tokens, [](const Token& t) { return t.cls == TokenClass::kPrimitiveType; });
  if (sites.empty()) throw detail::no_site(Task::kTYP, "no primitive type");
  Mutation m = detail::start(Task::kTYP, tokens, rng);
  const std::size_t site = sites[rng.uniform(sites.size())];
  const auto options = transposition_misspellings(tokens[site].text);
  detail::replace_at(m, site, options[rng.uniform(options.size())],
                     TokenKind::kIdentifier);
  return m;
}

// REA pairing; "<" has two seeded alternatives.
inline std::vector<std::string_view> relational_replacements(std::string_view op) {
  if (op == "<=") return {"+="};
  if (op == ">=") return {"-="};
  if (op == "==") return {"="};
  if (op == "!=") return {"/="};
  if (op == "<") return {"&=", "|="};
  if (op == ">") return {"%="};
  return {};
}

// REA: one relational operator swapped for an assignment operator.
inline Mutation mutate_rea(std::span<const Token> tokens, Rng& rng) {
  const auto sites = detail::sites_where(
      tokens, [](const Token& t) { return t.cls == TokenClass::kRelational; });
  if (sites.empty()) throw detail::no_site(Task::kREA, "no relational operator");
  Mutation m = detail::start(Task::kREA, tokens, rng);
  const std::size_t site = sites[rng.uniform(sites.size())];
  const auto options = relational_replacements(tokens[site].text);
  detail::replace_at(m, site, std::string(options[rng.uniform(options.size())]),
                     TokenKind::kOperator);
  return m;
}

// JBL: one adjacent pair of differing lexemes swapped.
inline Mutation mutate_jbl(std::span<const Token> tokens, Rng& rng) {
  std::vector<std::size_t> pairs;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].text != tokens[i + 1].text) pairs.push_back(i);
  }
  if (pairs.empty()) throw detail::no_site(Task::kJBL, "no swappable adjacent pair");
  Mutation m = detail::start(Task::kJBL, tokens, rng);
  const std::size_t i = pairs[rng.uniform(pairs.size())];
  std::swap(m.mutated[i], m.mutated[i + 1]);
  std::swap(m.mutated[i].span, m.mutated[i + 1].span);
  m.sites = {i, i + 1};
  m.replacement = m.mutated[i].text + " " + m.mutated[i + 1].text;
  return m;
}

// SRI: one identifier occurrence replaced by a different identifier that
// occurs elsewhere in the same sample.
inline Mutation mutate_sri(std::span<const Token> tokens, Rng& rng) {
  std::set<std::string> distinct;
  for (const Token& t : tokens) {
    if (t.kind == TokenKind::kIdentifier) distinct.insert(t.text);
  }
  if (distinct.size() < 2) throw detail::no_site(Task::kSRI, "fewer than 2 identifiers");
  const auto sites = detail::sites_where(
      tokens, [](const Token& t) { return t.kind == TokenKind::kIdentifier; });
  Mutation m = detail::start(Task::kSRI, tokens, rng);
  const std::size_t site = sites[rng.uniform(sites.size())];
  std::vector<std::string> options;
  for (const auto& name : distinct) {
    if (name != tokens[site].text) options.push_back(name);
  }
  detail::replace_at(m, site, options[rng.uniform(options.size())],
                     TokenKind::kIdentifier);
  return m;
}

// SRK: one keyword replaced by any other keyword.
inline Mutation mutate_srk(std::span<const Token> tokens, Rng& rng) {
  const auto sites = detail::sites_where(
      tokens, [](const Token& t) { return t.kind == TokenKind::kKeyword; });
  if (sites.empty()) throw detail::no_site(Task::kSRK, "no keyword");
  Mutation m = detail::start(Task::kSRK, tokens, rng);
  const std::size_t site = sites[rng.uniform(sites.size())];
  std::vector<std::string_view> options;
  for (auto kw : taxonomy::all_keywords()) {
    if (kw != tokens[site].text) options.push_back(kw);
  }
  detail::replace_at(m, site, std::string(options[rng.uniform(options.size())]),
                     TokenKind::kKeyword);
  return m;
}

// SCK: one keyword replaced by another keyword of the same category, e.g.
// double -> int, assert -> throws.
inline Mutation mutate_sck(std::span<const Token> tokens, Rng& rng) {
  const auto sites = detail::sites_where(tokens, [](const Token& t) {
    return t.kind == TokenKind::kKeyword && in_taxonomy(t.cls) &&
           taxonomy::members(t.cls).size() >= 2;
  });
  if (sites.empty()) throw detail::no_site(Task::kSCK, "no categorised keyword");
  Mutation m = detail::start(Task::kSCK, tokens, rng);
  const std::size_t site = sites[rng.uniform(sites.size())];
  std::vector<std::string_view> options;
  for (auto kw : taxonomy::members(tokens[site].cls)) {
    if (kw != tokens[site].text) options.push_back(kw);
  }
  detail::replace_at(m, site, std::string(options[rng.uniform(options.size())]),
                     TokenKind::kKeyword);
  return m;
}

inline Mutation mutate(Task task, std::span<const Token> tokens, Rng& rng) {
  switch (task) {
    case Task::kTYP: return mutate_typ(tokens, rng);
    case Task::kREA: return mutate_rea(tokens, rng);
    case Task::kJBL: return mutate_jbl(tokens, rng);
    case Task::kSRI: return mutate_sri(tokens, rng);
    case Task::kSRK: return mutate_srk(tokens, rng);
    case Task::kSCK: return mutate_sck(tokens, rng);
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(task_name(task)) + " is not a mutation task");
  }
}

// Site selection keyed by (task, sample id, dataset seed).
inline Mutation mutate(Task task, std::span<const Token> tokens, std::string_view sample_id,
                       std::uint64_t seed) {
  Rng rng(derive_seed(seed, std::string(task_name(task)) + "\x1f" + std::string(sample_id)));
  return mutate(task, tokens, rng);
}

// Cheap applicability check without drawing randomness.
inline bool mutation_applicable(Task task, std::span<const Token> tokens) {
  switch (task) {
    case Task::kTYP:
      return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
        return t.cls == TokenClass::kPrimitiveType;
      });
    case Task::kREA:
      return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
        return t.cls == TokenClass::kRelational;
      });
    case Task::kJBL:
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i].text != tokens[i + 1].text) return true;
      }
      return false;
    case Task::kSRI: {
      const Token* first = nullptr;
      for (const Token& t : tokens) {
        if (t.kind != TokenKind::kIdentifier) continue;
        if (!first) first = &t;
        else if (t.text != first->text) return true;
      }
      return false;
    }
    case Task::kSRK:
      return std::any_of(tokens.begin(), tokens.end(),
                         [](const Token& t) { return t.kind == TokenKind::kKeyword; });
    case Task::kSCK:
      return std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
        return t.kind == TokenKind::kKeyword && in_taxonomy(t.cls);
      });
    default:
      return false;
  }
}

}  // namespace codeprobe
