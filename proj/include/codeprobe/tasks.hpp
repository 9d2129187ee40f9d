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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace codeprobe {

// The fifteen probing tasks, in the column order of the results table.
enum class Task {
  kKTX,  // keyword / operator / symbol type of one token
  kIDN,  // identifier role
  kLEN,  // token-count quintile
  kTYP,  // misspelled primitive type
  kREA,  // relational operator replaced by an assignment
  kJBL,  // two adjacent tokens swapped
  kSRI,  // identifier replaced by another from the sample
  kSRK,  // keyword replaced by any keyword
  kSCK,  // keyword replaced within its category
  kOCU,  // unique operator count
  kVCU,  // unique variable count
  kCSC,  // control structure count
  kMXN,  // maximum nesting depth
  kCPX,  // cyclomatic complexity
  kNPT,  // NPath complexity bin
};

inline constexpr std::array<Task, 15> kAllTasks = {
    Task::kKTX, Task::kIDN, Task::kLEN, Task::kTYP, Task::kREA,
    Task::kJBL, Task::kSRI, Task::kSRK, Task::kSCK, Task::kOCU,
    Task::kVCU, Task::kCSC, Task::kMXN, Task::kCPX, Task::kNPT};

constexpr std::string_view task_name(Task t) {
  switch (t) {
    case Task::kKTX: return "KTX";
    case Task::kIDN: return "IDN";
    case Task::kLEN: return "LEN";
    case Task::kTYP: return "TYP";
    case Task::kREA: return "REA";
    case Task::kJBL: return "JBL";
    case Task::kSRI: return "SRI";
    case Task::kSRK: return "SRK";
    case Task::kSCK: return "SCK";
    case Task::kOCU: return "OCU";
    case Task::kVCU: return "VCU";
    case Task::kCSC: return "CSC";
    case Task::kMXN: return "MXN";
    case Task::kCPX: return "CPX";
    case Task::kNPT: return "NPT";
  }
  return "?";
}

inline std::optional<Task> parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  return std::nullopt;
}

constexpr bool is_mutation_task(Task t) {
  switch (t) {
    case Task::kTYP:
    case Task::kREA:
    case Task::kJBL:
    case Task::kSRI:
    case Task::kSRK:
    case Task::kSCK:
      return true;
    default:
      return false;
  }
}

constexpr int class_count(Task t) {
  switch (t) {
    case Task::kIDN: return 4;
    case Task::kLEN:
    case Task::kMXN: return 5;
    default: return is_mutation_task(t) ? 2 : 10;
  }
}

// Accuracy of a uniform guess, in percent.
constexpr double chance_percent(Task t) { return 100.0 / class_count(t); }

// Inclusive NPath bin bounds; raw values above the last bin are unlabelable.
inline constexpr std::array<std::array<unsigned, 2>, 10> kNpathBins = {{
    {1, 1}, {2, 2}, {3, 3}, {4, 6}, {7, 8},
    {9, 10}, {11, 15}, {16, 20}, {21, 30}, {31, 100}}};

inline std::vector<std::string> label_schema(Task t) {
  std::vector<std::string> names;
  switch (t) {
    case Task::kKTX:
      names = {"keyword:modifier", "keyword:flow-control", "keyword:primitive-type",
               "keyword:error-handling", "operator:arithmetic", "operator:assignment",
               "operator:relational", "operator:logical", "operator:bitwise", "symbol"};
      break;
    case Task::kIDN:
      names = {"package", "class", "method", "variable"};
      break;
    case Task::kLEN:
      names = {"q1", "q2", "q3", "q4", "q5"};
      break;
    case Task::kMXN:
      for (int d = 0; d < 5; ++d) names.push_back("depth=" + std::to_string(d));
      break;
    case Task::kCPX:
      for (int v = 1; v <= 10; ++v) names.push_back("cyclomatic=" + std::to_string(v));
      break;
    case Task::kNPT:
      for (const auto& b : kNpathBins) {
        names.push_back(b[0] == b[1] ? "npath=" + std::to_string(b[0])
                                     : "npath=" + std::to_string(b[0]) + "-" +
                                           std::to_string(b[1]));
      }
      break;
    case Task::kOCU:
    case Task::kVCU:
    case Task::kCSC:
      for (int v = 0; v < 10; ++v) names.push_back("count=" + std::to_string(v));
      break;
    default:
      names = {"original", "mutated"};
      break;
  }
  return names;
}

}  // namespace codeprobe
