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

// Pipeline stages behind the command-line tool. Each command throws
// codeprobe::Error on bad input and is idempotent for identical options.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "codeprobe/corpus.hpp"
#include "codeprobe/csv.hpp"
#include "codeprobe/embedstore.hpp"
#include "codeprobe/error.hpp"
#include "codeprobe/probe.hpp"
#include "codeprobe/report.hpp"
#include "codeprobe/synth.hpp"
#include "codeprobe/taskgen.hpp"
#include "json.hpp"

namespace codeprobe {

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitData = 2, kExitInternal = 3 };

// Worker count from CODEPROBE_WORKERS, else the hardware thread count.
inline int default_workers() {
  if (const char* env = std::getenv("CODEPROBE_WORKERS")) {
    try {
      const long long v = parse_int(env);
      if (v >= 1) return static_cast<int>(v);
    } catch (const Error&) {
    }
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// "all" or a comma list of task names.
inline std::vector<Task> parse_task_list(const std::vector<std::string>& names) {
  std::vector<Task> out;
  for (const auto& raw : names) {
    std::string_view rest = raw;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string name(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      if (name == "all") {
        out.assign(kAllTasks.begin(), kAllTasks.end());
        continue;
      }
      const auto t = parse_task(name);
      if (!t) throw Error(ErrorCode::kInvalidArgument, "unknown task '" + name + "'");
      if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// One-based layer numbers such as "5-8" or "1,3,10-12", as zero-based
// stored indices given the store's first layer and layer count.
inline std::vector<std::size_t> parse_layer_spec(std::string_view spec, std::uint32_t first_layer,
                                                 std::uint32_t layer_count) {
  std::set<std::size_t> out;
  auto bad = [&] {
    return Error(ErrorCode::kInvalidArgument, "bad layer spec '" + std::string(spec) + "'");
  };
  std::string_view rest = spec;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view part = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const auto dash = part.find('-');
    long long lo = 0, hi = 0;
    try {
      lo = parse_int(part.substr(0, dash));
      hi = dash == std::string_view::npos ? lo : parse_int(part.substr(dash + 1));
    } catch (const Error&) {
      throw bad();
    }
    if (lo > hi || lo < static_cast<long long>(first_layer) ||
        hi >= static_cast<long long>(first_layer) + layer_count) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layers " + std::string(part) + " outside " + std::to_string(first_layer) +
                      "-" + std::to_string(first_layer + layer_count - 1));
    }
    for (long long l = lo; l <= hi; ++l) out.insert(static_cast<std::size_t>(l - first_layer));
  }
  if (out.empty()) throw bad();
  return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------

struct GenCorpusOptions {
  std::size_t count = 5000;
  std::uint64_t seed = 0;
  std::filesystem::path out;
};

inline void cmd_gen_corpus(const GenCorpusOptions& o, std::ostream& log) {
  const auto corpus = generate_corpus(o.count, o.seed);
  write_corpus(o.out, corpus);
  log << "wrote " << corpus.size() << " methods to " << o.out.string() << "\n";
}

struct ConvertJavaOptions {
  std::filesystem::path src;
  std::filesystem::path out;
};

inline void cmd_convert_java(const ConvertJavaOptions& o, std::ostream& log) {
  if (!std::filesystem::is_directory(o.src)) {
    throw Error(ErrorCode::kIoFailure, o.src.string() + " is not a directory");
  }
  const auto corpus = convert_java_tree(o.src);
  write_corpus(o.out, corpus);
  log << "wrote " << corpus.size() << " methods to " << o.out.string() << "\n";
}

struct BuildDatasetOptions {
  std::filesystem::path corpus;
  std::vector<Task> tasks;
  int n = 10000;
  std::uint64_t seed = 0;
  std::filesystem::path out;
  int workers = 1;
};

inline std::string dataset_file_name(Task t) { return std::string(task_name(t)) + ".jsonl"; }

// Writes <out>/<TASK>.jsonl per task and <out>/manifest.json.
inline void cmd_build_dataset(const BuildDatasetOptions& o, std::ostream& log) {
  if (o.tasks.empty()) throw Error(ErrorCode::kInvalidArgument, "no tasks requested");
  const auto corpus = analyze_corpus(read_corpus(o.corpus), o.workers);
  if (corpus.samples.empty()) throw Error(ErrorCode::kInsufficientSamples, "corpus is empty");
  std::filesystem::create_directories(o.out);
  nlohmann::ordered_json manifest;
  manifest["corpus"] = o.corpus.filename().string();
  manifest["corpus_hash"] = corpus.hash;
  manifest["corpus_methods"] = corpus.samples.size();
  manifest["n"] = o.n;
  manifest["seed"] = o.seed;
  manifest["tasks"] = nlohmann::ordered_json::array();
  for (Task t : o.tasks) {
    TaskDataset ds;
    try {
      ds = build_dataset(t, corpus, o.n, o.seed);
    } catch (const Error& e) {
      throw Error(e.code(), std::string(task_name(t)) + ": " + e.message());
    }
    const auto file = dataset_file_name(t);
    write_dataset(o.out / file, ds);
    nlohmann::ordered_json entry;
    entry["task"] = std::string(task_name(t));
    entry["file"] = file;
    entry["class_count"] = ds.class_count;
    entry["examples"] = ds.examples.size();
    entry["seed"] = ds.seed;
    entry["bin_boundaries"] = ds.bin_boundaries;
    entry["truncation_rate"] = ds.truncation_rate;
    manifest["tasks"].push_back(entry);
    log << task_name(t) << ": " << ds.examples.size() << " examples -> "
        << (o.out / file).string() << "\n";
  }
  write_text_file(o.out / "manifest.json", manifest.dump(2) + "\n");
}

struct ProbeOptions {
  std::filesystem::path dataset;
  std::filesystem::path embeddings;
  std::filesystem::path out;
  std::string layers;  // empty: all
  std::string model;   // empty: from the store header
  TrainConfig config;
};

inline LayerReport cmd_probe(const ProbeOptions& o, std::ostream& log) {
  const TaskDataset ds = read_dataset(o.dataset);
  EmbeddingReader reader(o.embeddings);
  const auto& h = reader.header();
  if (const auto stored = parse_task(h.task_id); stored && *stored != ds.task) {
    throw Error(ErrorCode::kSampleMismatch, "store holds " + h.task_id + " but dataset is " +
                                                std::string(task_name(ds.task)));
  }
  std::vector<std::size_t> layers;
  if (!o.layers.empty()) layers = parse_layer_spec(o.layers, h.first_layer, h.layer_count);
  LayerReport report = probe_all_layers(reader, ds, o.config, layers);
  if (!o.model.empty()) report.model = o.model;
  write_layer_report(report, o.out);
  for (const auto& l : report.layers) {
    log << report.model << " " << report.task << " layer " << l.layer << ": "
        << format_double(l.accuracy) << (l.best ? " *" : "") << "\n";
  }
  return report;
}

struct ReportOptions {
  std::vector<std::filesystem::path> inputs;  // report directories or CSV files
  std::filesystem::path table;                // optional model,task,accuracy CSV
  std::string baseline;
  std::filesystem::path out;
};

inline std::vector<LayerReport> load_reports(const std::vector<std::filesystem::path>& inputs) {
  std::vector<LayerReport> out;
  for (const auto& in : inputs) {
    std::vector<std::filesystem::path> files;
    if (std::filesystem::is_directory(in)) {
      for (const auto& e : std::filesystem::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
    } else if (std::filesystem::exists(in)) {
      files.push_back(in);
    } else {
      throw Error(ErrorCode::kIoFailure, "no such report input " + in.string());
    }
    for (const auto& f : files) {
      auto rs = read_layer_reports(f);
      out.insert(out.end(), rs.begin(), rs.end());
    }
  }
  return out;
}

inline ResultsTable cmd_report(const ReportOptions& o, std::ostream& log) {
  if (o.baseline.empty()) throw Error(ErrorCode::kMissingBaseline, "no baseline model given");
  const auto reports = load_reports(o.inputs);
  ResultsTable table;
  if (!o.table.empty()) {
    table = summarize_cells(parse_results_csv(read_text_file(o.table)), o.baseline);
  } else {
    if (reports.empty()) throw Error(ErrorCode::kInvalidArgument, "no layer reports found");
    table = summarize(reports, o.baseline);
  }
  render(table, reports, o.out);
  log << "summarized " << table.models.size() << " models x " << table.tasks.size()
      << " tasks into " << o.out.string() << "\n";
  return table;
}

struct ValidateOptions {
  std::filesystem::path corpus;
  int workers = 1;
};

// Corpus diagnostics as JSON. Throws Error{kInsufficientSamples} for an
// empty corpus after writing the (zero) diagnostics.
inline nlohmann::ordered_json cmd_validate(const ValidateOptions& o, std::ostream& out) {
  const auto corpus = analyze_corpus(read_corpus(o.corpus), o.workers);
  nlohmann::ordered_json d;
  std::size_t lexed = 0, parsed = 0, trivial = 0, over_limit = 0;
  for (const auto& a : corpus.analysis) {
    lexed += a.lexable;
    parsed += a.parsed;
    trivial += a.trivial;
    over_limit += a.lexable && a.metrics.token_count > kMaxModelTokens;
  }
  const std::size_t n = corpus.samples.size();
  d["samples"] = n;
  d["corpus_hash"] = corpus.hash;
  d["lexed"] = lexed;
  d["lexability_rate"] = n ? static_cast<double>(lexed) / static_cast<double>(n) : 0.0;
  d["parsed"] = parsed;
  d["trivial_excluded"] = trivial;
  d["trivial_rate"] = n ? static_cast<double>(trivial) / static_cast<double>(n) : 0.0;
  d["over_token_limit"] = over_limit;
  d["len_boundaries"] = corpus.len_boundaries;
  nlohmann::ordered_json hist;
  const LabelContext ctx{corpus.len_boundaries};
  for (Task t : {Task::kLEN, Task::kOCU, Task::kVCU, Task::kCSC, Task::kMXN, Task::kCPX,
                 Task::kNPT}) {
    std::vector<std::size_t> bins(class_count(t), 0);
    std::size_t unlabeled = 0;
    for (const auto& a : corpus.analysis) {
      const auto l = label_analyzed(t, a, ctx);
      if (l) ++bins[*l];
      else ++unlabeled;
    }
    nlohmann::ordered_json h;
    h["labels"] = label_schema(t);
    h["counts"] = bins;
    h["unlabeled"] = unlabeled;
    hist[std::string(task_name(t))] = h;
  }
  d["histograms"] = hist;
  out << d.dump(2) << "\n";
  if (n == 0) throw Error(ErrorCode::kInsufficientSamples, "corpus has no samples");
  return d;
}

}  // namespace codeprobe
