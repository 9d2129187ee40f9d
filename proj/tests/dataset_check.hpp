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

// Structural checks for a built dataset. Each returns the first violation,
// or an empty string.

#ifndef CODEPROBE_TESTS_DATASET_CHECK_HPP_
#define CODEPROBE_TESTS_DATASET_CHECK_HPP_

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codeprobe/taskgen.hpp"

namespace dataset_check {

using codeprobe::Split;
using codeprobe::Task;
using codeprobe::TaskDataset;

// n / C examples per class; 60/20/20 of those per split.
inline std::string balance(const TaskDataset& ds) {
  const int c = codeprobe::class_count(ds.task);
  if (ds.class_count != c) return "class_count mismatch";
  if (static_cast<int>(ds.examples.size()) != ds.n) {
    return "size " + std::to_string(ds.examples.size()) + " != n " + std::to_string(ds.n);
  }
  const int per_class = ds.n / c;
  const int want[3] = {per_class * 60 / 100, per_class * 20 / 100, per_class * 20 / 100};
  std::map<std::pair<int, int>, int> count;
  int split_total[3] = {0, 0, 0};
  for (const auto& ex : ds.examples) {
    if (ex.label < 0 || ex.label >= c) return "label out of range";
    ++count[{ex.label, static_cast<int>(ex.split)}];
    ++split_total[static_cast<int>(ex.split)];
  }
  for (int label = 0; label < c; ++label) {
    for (int s = 0; s < 3; ++s) {
      if (count[{label, s}] != want[s]) {
        std::ostringstream os;
        os << "class " << label << " split " << s << " has " << count[{label, s}] << ", want "
           << want[s];
        return os.str();
      }
    }
  }
  if (split_total[0] != ds.n * 60 / 100 || split_total[1] != ds.n * 20 / 100 ||
      split_total[2] != ds.n * 20 / 100) {
    return "split totals not 60/20/20";
  }
  return {};
}

// Target indices present exactly for KTX; every target lexeme belongs to its
// split's vocabulary and the vocabularies never overlap across splits.
inline std::string ktx(const TaskDataset& ds) {
  for (const auto& ex : ds.examples) {
    if (ex.target_token_index.has_value() != (ds.task == Task::kKTX)) {
      return "target_token_index presence wrong";
    }
  }
  if (ds.task != Task::kKTX) return {};
  if (!ds.ktx_vocabulary) return "no vocabulary recorded";
  const auto& vocab = *ds.ktx_vocabulary;
  for (int c = 0; c < codeprobe::kTaxonomyClassCount; ++c) {
    std::map<std::string, int> owner;
    for (int s = 0; s < 3; ++s) {
      if (vocab[c][s].empty()) return "empty vocabulary part";
      for (const auto& w : vocab[c][s]) {
        if (!owner.emplace(w, s).second) return "lexeme " + w + " in two splits";
      }
    }
  }
  std::map<int, std::set<std::string>> targets_by_split;
  for (const auto& ex : ds.examples) {
    const auto toks = codeprobe::tokenize(ex.text);
    if (*ex.target_token_index >= toks.size()) return "target index out of range";
    const auto& t = toks[*ex.target_token_index];
    if (static_cast<int>(t.cls) != ex.label) return "target class != label";
    const auto& words = vocab[ex.label][static_cast<int>(ex.split)];
    if (std::find(words.begin(), words.end(), t.text) == words.end()) {
      return "target " + t.text + " outside its split vocabulary";
    }
    targets_by_split[static_cast<int>(ex.split)].insert(t.text);
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (const auto& w : targets_by_split[a]) {
        if (targets_by_split[b].count(w)) return "target lexeme " + w + " in two splits";
      }
    }
  }
  return {};
}

// One mutated example per method, never reused as an original.
inline std::string mutation_sources(const TaskDataset& ds) {
  if (!codeprobe::is_mutation_task(ds.task)) return {};
  std::set<std::string> originals, mutated;
  for (const auto& ex : ds.examples) {
    auto& bucket = ex.label == 0 ? originals : mutated;
    if (!bucket.insert(ex.source).second) return "method " + ex.source + " used twice";
  }
  for (const auto& s : mutated) {
    if (originals.count(s)) return "method " + s + " is both original and mutated";
  }
  return {};
}

inline std::string all(const TaskDataset& ds) {
  for (auto f : {balance, ktx, mutation_sources}) {
    auto r = f(ds);
    if (!r.empty()) return std::string(codeprobe::task_name(ds.task)) + ": " + r;
  }
  return {};
}

inline std::string serialize(const TaskDataset& ds) {
  std::ostringstream os;
  codeprobe::write_dataset(os, ds);
  return os.str();
}

}  // namespace dataset_check

#endif  // CODEPROBE_TESTS_DATASET_CHECK_HPP_
