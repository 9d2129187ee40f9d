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

#include "codeprobe/taskgen.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "codeprobe/synth.hpp"
#include "dataset_check.hpp"

namespace codeprobe {
namespace {

const AnalyzedCorpus& small_corpus() {
  static const AnalyzedCorpus c = analyze_corpus(generate_corpus(1000, 21), 2);
  return c;
}

MethodSample method(const std::string& src, std::vector<std::string> imports = {}) {
  return {"m", src, std::move(imports)};
}

TEST(LabelTest, NpathBins) {
  EXPECT_EQ(npath_bin(1), 0);
  EXPECT_EQ(npath_bin(3), 2);
  EXPECT_EQ(npath_bin(5), 3);
  EXPECT_EQ(npath_bin(8), 4);
  EXPECT_EQ(npath_bin(20), 7);
  EXPECT_EQ(npath_bin(100), 9);
  EXPECT_EQ(npath_bin(101), std::nullopt);
}

TEST(LabelTest, BinsAreContiguous) {
  for (std::size_t b = 1; b < kNpathBins.size(); ++b) {
    EXPECT_EQ(kNpathBins[b][0], kNpathBins[b - 1][1] + 1);
  }
}

TEST(LabelTest, SampleLabels) {
  const LabelContext ctx{{20, 30, 40, 50}};
  EXPECT_EQ(label_sample(Task::kCSC, method("void f() { a(); }"), ctx), 0);
  EXPECT_EQ(label_sample(Task::kCPX, method("void f() { a(); }"), ctx), 0);
  EXPECT_EQ(label_sample(Task::kCPX, method("void f() { if (a && b) c(); }"), ctx), 2);
  EXPECT_EQ(label_sample(Task::kMXN, method("void f() { if (a) { if (b) c(); } }"), ctx), 2);
  EXPECT_EQ(label_sample(Task::kNPT, method("void f() { if (a) b(); if (c) d(); }"), ctx), 3);
  EXPECT_EQ(label_sample(Task::kLEN, method("void f() { a(); }"), ctx), 0);
  EXPECT_EQ(label_sample(Task::kLEN, method("void f() { a(); b(); c(); d(); }"), ctx), 1);
  EXPECT_EQ(label_sample(Task::kOCU, method("void f() { a = b + c; }"), ctx), 2);
  EXPECT_EQ(label_sample(Task::kTYP, method("void f() { a(); }"), ctx), 0);
  EXPECT_EQ(label_sample(Task::kREA, method("void f() { a(); }"), ctx), std::nullopt);
  EXPECT_EQ(label_sample(Task::kCSC, method("void f() { \"open }"), ctx), std::nullopt);
}

TEST(LabelTest, OutOfRangeIsUnlabelable) {
  std::string body;
  for (int i = 0; i < 10; ++i) body += "if (x) a(); ";
  const LabelContext ctx;
  EXPECT_EQ(label_sample(Task::kCSC, method("void f() { " + body + "}"), ctx), std::nullopt);
  EXPECT_EQ(label_sample(Task::kCPX, method("void f() { " + body + "}"), ctx), std::nullopt);
  EXPECT_EQ(label_sample(Task::kNPT, method("void f() { " + body + "}"), ctx), std::nullopt);
}

TEST(ExcludeTrivialTest, Examples) {
  EXPECT_TRUE(exclude_trivial(method("int getX(){return x;}")));
  EXPECT_TRUE(exclude_trivial(method("void setX(int v){this.x = v;}")));
  EXPECT_TRUE(exclude_trivial(method("boolean isOpen() { return open; }")));
  EXPECT_FALSE(exclude_trivial(method("int getXandLog(){log(); return x;}")));
  EXPECT_FALSE(exclude_trivial(method("void run(){x=1;}")));
  EXPECT_FALSE(exclude_trivial(method("int getter(){return x;}")));
}

TEST(QuantileTest, EqualFrequencyCuts) {
  std::vector<int> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  EXPECT_EQ(quantile_boundaries(v, 5), (std::vector<int>{21, 41, 61, 81}));
  for (int i = 1; i <= 100; ++i) {
    EXPECT_EQ(*len_bin(i, std::vector<int>{21, 41, 61, 81}), (i - 1) / 20);
  }
}

TEST(KtxSplitTest, PartitionsEveryClass) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto vocab = ktx_generalization_split(seed);
    for (int c = 0; c < kTaxonomyClassCount; ++c) {
      std::multiset<std::string> all;
      for (int s = 0; s < 3; ++s) {
        EXPECT_FALSE(vocab[c][s].empty());
        all.insert(vocab[c][s].begin(), vocab[c][s].end());
      }
      const auto m = taxonomy::members(static_cast<TokenClass>(c));
      EXPECT_EQ(all, std::multiset<std::string>(m.begin(), m.end()));
    }
  }
}

TEST(KtxSplitTest, HeldOutSizes) {
  // 20% of a class (at least one lexeme) for each of val and test.
  const auto vocab = ktx_generalization_split(5);
  for (int c = 0; c < kTaxonomyClassCount; ++c) {
    const std::size_t m = taxonomy::members(static_cast<TokenClass>(c)).size();
    const std::size_t held = std::max<std::size_t>(1, (m + 2) / 5);
    EXPECT_EQ(vocab[c][1].size(), held);
    EXPECT_EQ(vocab[c][2].size(), held);
  }
  EXPECT_EQ(vocab[static_cast<int>(TokenClass::kSymbol)][1].size(), 3u);
}

TEST(KtxSplitTest, Deterministic) {
  EXPECT_EQ(ktx_generalization_split(3), ktx_generalization_split(3));
}

TEST(ImportPackageTest, Examples) {
  EXPECT_EQ(import_package("import java.util.List;"), "java.util");
  EXPECT_EQ(import_package("import java.util.*;"), "java.util");
  EXPECT_EQ(import_package("import static org.junit.Assert.assertEquals;"), "org.junit");
  EXPECT_EQ(import_package("import List;"), "");
}

TEST(ExtractIdentifiersTest, Roles) {
  AnalyzedCorpus c = analyze_corpus(
      {method("void parseAll(Reader in) { int count = 0; Foo f = new Bar(); }",
              {"import java.util.List;"})});
  std::map<std::string, IdentifierRole> roles;
  for (const auto& r : extract_identifiers(c, 0)) roles[r.text] = r.role;
  EXPECT_EQ(roles.at("java.util"), IdentifierRole::kPackage);
  EXPECT_EQ(roles.at("parseAll"), IdentifierRole::kMethod);
  EXPECT_EQ(roles.at("count"), IdentifierRole::kVariable);
  EXPECT_EQ(roles.at("Bar"), IdentifierRole::kClass);
}

TEST(BuildDatasetTest, AllTasksBalancedAndSplit) {
  for (Task t : kAllTasks) {
    const auto ds = build_dataset(t, small_corpus(), 100, 4);
    EXPECT_EQ(dataset_check::all(ds), "");
    EXPECT_EQ(ds.label_schema.size(), static_cast<std::size_t>(class_count(t)));
  }
}

TEST(BuildDatasetTest, TenClassCounts) {
  const auto ds = build_dataset(Task::kCPX, small_corpus(), 200, 1);
  std::array<int, 3> per_split{};
  for (const auto& ex : ds.examples) ++per_split[static_cast<int>(ex.split)];
  EXPECT_EQ(per_split, (std::array<int, 3>{120, 40, 40}));
}

TEST(BuildDatasetTest, Deterministic) {
  const auto again = analyze_corpus(generate_corpus(1000, 21), 1);
  for (Task t : {Task::kKTX, Task::kIDN, Task::kSRI, Task::kNPT}) {
    EXPECT_EQ(dataset_check::serialize(build_dataset(t, small_corpus(), 100, 8)),
              dataset_check::serialize(build_dataset(t, again, 100, 8)))
        << task_name(t);
  }
}

TEST(BuildDatasetTest, SeedChangesDraw) {
  EXPECT_NE(dataset_check::serialize(build_dataset(Task::kCSC, small_corpus(), 100, 1)),
            dataset_check::serialize(build_dataset(Task::kCSC, small_corpus(), 100, 2)));
}

TEST(BuildDatasetTest, PrefersShortMethods) {
  const auto ds = build_dataset(Task::kTYP, small_corpus(), 100, 3);
  std::vector<int> lengths;
  for (std::size_t i = 0; i < small_corpus().samples.size(); ++i) {
    if (small_corpus().eligible(i) &&
        mutation_applicable(Task::kTYP, small_corpus().analysis[i].tokens)) {
      lengths.push_back(small_corpus().analysis[i].metrics.token_count);
    }
  }
  std::sort(lengths.begin(), lengths.end());
  const int pool_max = lengths[199];
  for (const auto& ex : ds.examples) {
    if (ex.label == 0) EXPECT_LE(static_cast<int>(tokenize(ex.text).size()), pool_max);
  }
}

TEST(BuildDatasetTest, InsufficientSamplesNamesClass) {
  try {
    build_dataset(Task::kCSC, small_corpus(), 100000, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
    EXPECT_NE(std::string(e.what()).find("count="), std::string::npos) << e.what();
  }
}

TEST(BuildDatasetTest, RejectsUnbalanceableN) {
  EXPECT_THROW(build_dataset(Task::kCPX, small_corpus(), 105, 1), Error);
  EXPECT_THROW(build_dataset(Task::kIDN, small_corpus(), 0, 1), Error);
}

TEST(DatasetFileTest, RoundTrip) {
  for (Task t : {Task::kKTX, Task::kLEN}) {
    const auto ds = build_dataset(t, small_corpus(), 100, 6);
    const std::string text = dataset_check::serialize(ds);
    std::istringstream in(text);
    const auto back = read_dataset(in);
    EXPECT_EQ(dataset_check::serialize(back), text);
    EXPECT_EQ(back.bin_boundaries, ds.bin_boundaries);
    EXPECT_EQ(back.corpus_hash, small_corpus().hash);
  }
}

TEST(DatasetFileTest, LfOnlyUtf8Lines) {
  const std::string text = dataset_check::serialize(build_dataset(Task::kJBL, small_corpus(), 100, 6));
  EXPECT_EQ(text.find('\r'), std::string::npos);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 101);
}

TEST(DatasetFileTest, RejectsMissingHeader) {
  std::istringstream in("{\"id\":0}\n");
  EXPECT_THROW(read_dataset(in), Error);
}

}  // namespace
}  // namespace codeprobe
