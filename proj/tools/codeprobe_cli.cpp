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

// codeprobe: dataset generation, probing and reporting from the shell.
// Exit codes: 0 ok, 1 usage, 2 data error, 3 internal error.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codeprobe/cli.hpp"

int main(int argc, char** argv) {
  using namespace codeprobe;
  CLI::App app{"Probe frozen code-model representations with diagnostic Java tasks"};
  app.require_subcommand(1);
  int workers = default_workers();
  app.add_option("--workers", workers, "Worker threads (default: $CODEPROBE_WORKERS or all cores)")
      ->check(CLI::PositiveNumber);

  GenCorpusOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a synthetic method corpus");
  gen_cmd->add_option("--count", gen.count, "Number of methods")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->required();
  gen_cmd->add_option("--out", gen.out, "Output JSONL path")->required();

  ConvertJavaOptions conv;
  auto* conv_cmd = app.add_subcommand("convert-java", "Split a .java source tree into a corpus");
  conv_cmd->add_option("--src", conv.src, "Source directory")->required();
  conv_cmd->add_option("--out", conv.out, "Output JSONL path")->required();

  BuildDatasetOptions build;
  std::vector<std::string> task_names;
  auto* build_cmd = app.add_subcommand("build-dataset", "Generate balanced task datasets");
  build_cmd->add_option("--corpus", build.corpus, "Corpus JSONL")->required();
  build_cmd->add_option("--task", task_names, "Task name(s), comma list, or 'all'")->required();
  build_cmd->add_option("--n", build.n, "Examples per dataset")->capture_default_str();
  build_cmd->add_option("--seed", build.seed, "Dataset seed")->required();
  build_cmd->add_option("--out", build.out, "Output directory")->required();

  ProbeOptions probe;
  auto* probe_cmd = app.add_subcommand("probe", "Train per-layer probes for one model and task");
  probe_cmd->add_option("--dataset", probe.dataset, "Dataset JSONL")->required();
  probe_cmd->add_option("--embeddings", probe.embeddings, "Embedding store")->required();
  probe_cmd->add_option("--out", probe.out, "Report directory")->required();
  probe_cmd->add_option("--layers", probe.layers, "Layer numbers, e.g. 5-8 or 1,3,10-12");
  probe_cmd->add_option("--model", probe.model, "Model id override");
  probe_cmd->add_option("--seed", probe.config.seed, "Training seed")->capture_default_str();
  probe_cmd->add_option("--lambda-grid", probe.config.l2_grid, "L2 coefficients")
      ->delimiter(',')
      ->capture_default_str();
  probe_cmd->add_option("--learning-rate", probe.config.learning_rate)->capture_default_str();
  probe_cmd->add_option("--max-epochs", probe.config.max_epochs)->capture_default_str();
  probe_cmd->add_option("--tenacity", probe.config.tenacity)->capture_default_str();
  probe_cmd->add_option("--tie-tolerance-se", probe.config.tie_tolerance_se,
                        "Validation ties within this many standard errors prefer larger L2")
      ->capture_default_str();
  probe_cmd->add_flag("--standardize", probe.config.standardize,
                     "Standardize features with train-split mean and variance");

  ReportOptions report;
  auto* report_cmd = app.add_subcommand("report", "Aggregate layer reports across models");
  report_cmd->add_option("--in", report.inputs, "Report directories or CSV files");
  report_cmd->add_option("--table", report.table, "model,task,accuracy CSV (percent)");
  report_cmd->add_option("--baseline", report.baseline, "Baseline model id")->required();
  report_cmd->add_option("--out", report.out, "Output directory")->required();

  ValidateOptions validate;
  auto* validate_cmd = app.add_subcommand("validate", "Corpus diagnostics as JSON");
  validate_cmd->add_option("--corpus", validate.corpus, "Corpus JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) {
      cmd_gen_corpus(gen, std::cerr);
    } else if (*conv_cmd) {
      cmd_convert_java(conv, std::cerr);
    } else if (*build_cmd) {
      try {
        build.tasks = parse_task_list(task_names);
      } catch (const Error& e) {
        std::cerr << "build-dataset: " << e.what() << "\n";
        return kExitUsage;
      }
      build.workers = workers;
      cmd_build_dataset(build, std::cerr);
    } else if (*probe_cmd) {
      probe.config.workers = workers;
      cmd_probe(probe, std::cerr);
    } else if (*report_cmd) {
      if (report.inputs.empty() && report.table.empty()) {
        std::cerr << "report: give --in and/or --table\n";
        return kExitUsage;
      }
      cmd_report(report, std::cerr);
    } else if (*validate_cmd) {
      validate.workers = workers;
      cmd_validate(validate, std::cout);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
