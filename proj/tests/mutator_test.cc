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

#include "codeprobe/mutator.hpp"

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "codeprobe/synth.hpp"
#include "mutation_check.hpp"

namespace codeprobe {
namespace {

Mutation run(Task task, const std::string& src, std::uint64_t seed = 1) {
  Rng rng(seed);
  return mutate(task, tokenize(src), rng);
}

void expect_no_site(Task task, const std::string& src) {
  try {
    run(task, src);
    ADD_FAILURE() << task_name(task) << " on " << src;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoApplicableSite);
  }
}

// All outputs reachable over many seeds.
std::set<std::string> outputs(Task task, const std::string& src, int seeds = 200) {
  std::set<std::string> out;
  for (int s = 0; s < seeds; ++s) out.insert(run(task, src, s).mutated_text());
  return out;
}

TEST(MutateTypTest, FloatCanBecomeFlaot) {
  EXPECT_TRUE(outputs(Task::kTYP, "float x;").count("flaot x ;"));
  EXPECT_TRUE(outputs(Task::kTYP, "float x;").count("folat x ;"));
}

TEST(MutateTypTest, VoidIsAPrimitiveSite) {
  const auto m = run(Task::kTYP, "void f(){}");
  EXPECT_EQ(m.sites, std::vector<std::size_t>{0});
  EXPECT_TRUE(mutation_check::transpositions("void").count(m.replacement));
}

TEST(MutateTypTest, ExactlyOneOccurrenceChanges) {
  for (int s = 0; s < 50; ++s) {
    const auto m = run(Task::kTYP, "int a; int b;", s);
    EXPECT_EQ(mutation_check::differing(m).size(), 1u);
  }
}

TEST(MutateTypTest, NoPrimitive) { expect_no_site(Task::kTYP, "x = y;"); }

TEST(MutateTypTest, MisspellingsAvoidKeywords) {
  for (auto w : taxonomy::kPrimitiveTypes) {
    const auto opts = transposition_misspellings(w);
    EXPECT_FALSE(opts.empty()) << w;
    for (const auto& o : opts) EXPECT_FALSE(taxonomy::is_keyword(o)) << o;
  }
}

TEST(MutateReaTest, ReferencePairs) {
  EXPECT_EQ(run(Task::kREA, "a <= b").mutated_text(), "a += b");
  EXPECT_EQ(run(Task::kREA, "x != y").mutated_text(), "x /= y");
  EXPECT_EQ(outputs(Task::kREA, "a < b"), (std::set<std::string>{"a &= b", "a |= b"}));
}

TEST(MutateReaTest, NoRelational) { expect_no_site(Task::kREA, "a = b + c;"); }

TEST(MutateJblTest, ReferenceExampleIsReachable) {
  EXPECT_TRUE(outputs(Task::kJBL, "int foo = 4;").count("int = foo 4 ;"));
}

TEST(MutateJblTest, TwoTokens) { EXPECT_EQ(run(Task::kJBL, "a b").mutated_text(), "b a"); }

TEST(MutateJblTest, EqualPairsAreSkipped) {
  EXPECT_EQ(outputs(Task::kJBL, "a a b"), (std::set<std::string>{"a b a"}));
  expect_no_site(Task::kJBL, "a a a");
  expect_no_site(Task::kJBL, "a");
}

TEST(MutateSriTest, ReplacementComesFromSample) {
  for (const auto& out : outputs(Task::kSRI, "a = b + c;")) {
    const auto m = tokenize(out);
    std::multiset<std::string> ids;
    for (const auto& t : m) {
      if (t.kind == TokenKind::kIdentifier) ids.insert(t.text);
    }
    EXPECT_EQ(ids.size(), 3u);
    EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), 2u) << out;
  }
}

TEST(MutateSriTest, OneDistinctIdentifier) { expect_no_site(Task::kSRI, "x = x;"); }

TEST(MutateSrkTest, AnyKeywordIsReachable) {
  const auto outs = outputs(Task::kSRK, "int x;", 2000);
  EXPECT_TRUE(outs.count("for x ;"));
  EXPECT_EQ(outs.size(), taxonomy::all_keywords().size() - 1);
  EXPECT_FALSE(outs.count("int x ;"));
}

TEST(MutateSckTest, ReferenceExamplesAreReachable) {
  EXPECT_TRUE(outputs(Task::kSCK, "double d;").count("int d ;"));
  EXPECT_TRUE(outputs(Task::kSCK, "assert c;").count("throws c ;"));
}

TEST(MutateSckTest, StaysInCategory) {
  for (const auto& out : outputs(Task::kSCK, "return x;")) {
    EXPECT_EQ(taxonomy::keyword_class(tokenize(out)[0].text), TokenClass::kFlowControl) << out;
  }
  // Keywords outside the taxonomy have no category to stay in.
  expect_no_site(Task::kSCK, "x = new Y();");
}

TEST(MutateTest, RejectsNonMutationTask) {
  Rng rng(0);
  EXPECT_THROW(mutate(Task::kCPX, tokenize("a b"), rng), Error);
}

TEST(MutateTest, ApplicabilityAgreesWithOperators) {
  for (const auto& s : generate_corpus(100, 9)) {
    const auto toks = tokenize(s.source);
    for (Task t : {Task::kTYP, Task::kREA, Task::kJBL, Task::kSRI, Task::kSRK, Task::kSCK}) {
      bool threw = false;
      try {
        mutate(t, toks, s.id, 5);
      } catch (const Error&) {
        threw = true;
      }
      EXPECT_EQ(mutation_applicable(t, toks), !threw) << task_name(t) << " " << s.id;
    }
  }
}

TEST(MutateTest, ContractsHoldOnCorpus) {
  for (const auto& s : generate_corpus(150, 11)) {
    const auto toks = tokenize(s.source);
    for (Task t : {Task::kTYP, Task::kREA, Task::kJBL, Task::kSRI, Task::kSRK, Task::kSCK}) {
      if (!mutation_applicable(t, toks)) continue;
      const auto m = mutate(t, toks, s.id, 17);
      EXPECT_EQ(mutation_check::check(m, toks), "") << task_name(t) << " " << s.id;
      EXPECT_TRUE(mutation_check::same_mutation(m, mutate(t, toks, s.id, 17)));
    }
  }
}

TEST(MutateTest, SeedAndIdSelectTheSite) {
  const auto toks = tokenize("int a = b; int c = d; int e = f; int g = h;");
  std::set<std::vector<std::size_t>> sites;
  for (int k = 0; k < 40; ++k) sites.insert(mutate(Task::kTYP, toks, "s" + std::to_string(k), 1).sites);
  EXPECT_GT(sites.size(), 1u);
}

}  // namespace
}  // namespace codeprobe
