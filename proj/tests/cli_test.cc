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

#include "codeprobe/cli.hpp"

#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "probe_fixture.hpp"
#include "test_util.hpp"

namespace codeprobe {
namespace {

using test_util::TempDir;

const std::string kCli = CODEPROBE_CLI_PATH;

int cli(const std::string& args) { return test_util::run(kCli + " " + args); }

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

// A corpus of 1500 synthetic methods written once per process.
const std::filesystem::path& shared_corpus() {
  static TempDir dir;
  static const std::filesystem::path path = [] {
    const auto p = dir / "corpus.jsonl";
    std::ostringstream log;
    cmd_gen_corpus({1500, 42, p}, log);
    return p;
  }();
  return path;
}

TEST(ParseTaskListTest, Forms) {
  EXPECT_EQ(parse_task_list({"all"}).size(), 15u);
  EXPECT_EQ(parse_task_list({"NPT,KTX", "KTX"}), (std::vector<Task>{Task::kKTX, Task::kNPT}));
  EXPECT_THROW(parse_task_list({"XYZ"}), Error);
}

TEST(ParseLayerSpecTest, Forms) {
  EXPECT_EQ(parse_layer_spec("5-8", 1, 12), (std::vector<std::size_t>{4, 5, 6, 7}));
  EXPECT_EQ(parse_layer_spec("1,3,10-12", 1, 12), (std::vector<std::size_t>{0, 2, 9, 10, 11}));
  EXPECT_EQ(parse_layer_spec("3", 0, 4), (std::vector<std::size_t>{3}));
  for (const char* bad : {"0", "13", "8-5", "a", "1-", ""}) {
    EXPECT_THROW(parse_layer_spec(bad, 1, 12), Error) << bad;
  }
}

TEST(DefaultWorkersTest, ReadsEnvironment) {
  setenv("CODEPROBE_WORKERS", "3", 1);
  EXPECT_EQ(default_workers(), 3);
  setenv("CODEPROBE_WORKERS", "zero", 1);
  EXPECT_GE(default_workers(), 1);
  unsetenv("CODEPROBE_WORKERS");
}

TEST(BuildDatasetCommandTest, AllTasksAndManifest) {
  TempDir out;
  ASSERT_EQ(cli("build-dataset --corpus " + q(shared_corpus()) +
                " --task all --n 100 --seed 7 --out " + q(out.path())),
            0);
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(out.path())) {
    files += e.path().extension() == ".jsonl";
  }
  EXPECT_EQ(files, 15);
  const auto manifest = nlohmann::json::parse(read_text_file(out / "manifest.json"));
  EXPECT_EQ(manifest["tasks"].size(), 15u);
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["corpus_hash"].get<std::string>().size(), 16u);
  for (const auto& t : manifest["tasks"]) {
    if (t["task"] == "LEN") EXPECT_EQ(t["bin_boundaries"].size(), 4u);
  }
}

TEST(BuildDatasetCommandTest, RerunIsByteIdentical) {
  TempDir a, b;
  const std::string args = " --corpus " + q(shared_corpus()) + " --task KTX,CPX,JBL --n 100 --seed 3";
  ASSERT_EQ(cli("build-dataset" + args + " --out " + q(a.path())), 0);
  ASSERT_EQ(cli("--workers 2 build-dataset" + args + " --out " + q(b.path())), 0);
  for (const char* f : {"KTX.jsonl", "CPX.jsonl", "JBL.jsonl", "manifest.json"}) {
    EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
  }
}

TEST(BuildDatasetCommandTest, ExitCodes) {
  TempDir out;
  EXPECT_EQ(cli("build-dataset --task CPX --n 100 --out " + q(out.path())), kExitUsage);
  EXPECT_EQ(cli("build-dataset --corpus " + q(shared_corpus()) +
                " --task NOPE --n 100 --seed 1 --out " + q(out.path())),
            kExitUsage);
  EXPECT_EQ(cli("build-dataset --corpus " + q(shared_corpus()) +
                " --task CPX --n 1000000 --seed 1 --out " + q(out.path())),
            kExitData);
  EXPECT_EQ(cli("build-dataset --corpus " + q(out / "missing.jsonl") +
                " --task CPX --n 100 --seed 1 --out " + q(out.path())),
            kExitData);
  EXPECT_EQ(cli("frobnicate"), kExitUsage);
  EXPECT_EQ(cli("--help"), kExitOk);
}

TEST(BuildDatasetCommandTest, ErrorNamesTheTask) {
  TempDir out;
  std::ostringstream log;
  try {
    cmd_build_dataset({shared_corpus(), {Task::kNPT}, 1000000, 1, out.path(), 1}, log);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
    EXPECT_EQ(e.message().rfind("NPT: ", 0), 0u) << e.what();
    EXPECT_EQ(std::string(e.what()).find("InsufficientSamples", 1), std::string::npos) << e.what();
  }
}

struct ProbeInputs {
  TempDir dir;
  std::filesystem::path dataset, store;
};

// CSC dataset from the shared corpus plus a 12-layer store aligned with it.
void make_probe_inputs(ProbeInputs& in, bool break_ids = false) {
  std::ostringstream log;
  cmd_build_dataset({shared_corpus(), {Task::kCSC}, 100, 5, in.dir.path(), 1}, log);
  in.dataset = in.dir / "CSC.jsonl";
  auto store = probe_fixture::store_for(read_dataset(in.dataset), 12, 12, 6, 8);
  if (break_ids) store.sample_ids[0] = 1u << 30;
  in.store = in.dir / "CSC.bin";
  write_embeddings(store, in.store);
}

std::string probe_args(const ProbeInputs& in, const std::filesystem::path& out) {
  return "probe --dataset " + q(in.dataset) + " --embeddings " + q(in.store) + " --out " +
         q(out) + " --lambda-grid 0.01 --max-epochs 4";
}

TEST(ProbeCommandTest, TwelveLayersTwelveRows) {
  ProbeInputs in;
  make_probe_inputs(in);
  TempDir out;
  ASSERT_EQ(cli(probe_args(in, out.path())), 0);
  const auto stem = report_stem("fixture/model", "CSC");
  const auto reports = read_layer_reports(out / (stem + ".csv"));
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_EQ(reports[0].layers.size(), 12u);
  EXPECT_EQ(reports[0].best_layer()->layer, 7);
  EXPECT_TRUE(std::filesystem::exists(out / (stem + ".meta.json")));
  const auto meta = nlohmann::json::parse(read_text_file(out / (stem + ".meta.json")));
  EXPECT_EQ(meta["train_config"]["l2_grid"], nlohmann::json::array({0.01}));
}

TEST(ProbeCommandTest, LayerRestriction) {
  ProbeInputs in;
  make_probe_inputs(in);
  TempDir out;
  ASSERT_EQ(cli(probe_args(in, out.path()) + " --layers 5-8"), 0);
  const auto r = read_layer_reports(out / (report_stem("fixture/model", "CSC") + ".csv"));
  ASSERT_EQ(r[0].layers.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(r[0].layers[k].layer, 5 + k);
  EXPECT_NE(cli(probe_args(in, out.path()) + " --layers 9-13"), 0);
}

TEST(ProbeCommandTest, SampleMismatchFails) {
  ProbeInputs in;
  make_probe_inputs(in, true);
  TempDir out;
  EXPECT_EQ(cli(probe_args(in, out.path())), kExitData);
  ProbeOptions o;
  o.dataset = in.dataset;
  o.embeddings = in.store;
  o.out = out.path();
  std::ostringstream log;
  try {
    cmd_probe(o, log);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSampleMismatch);
  }
}

TEST(ReportCommandTest, PublishedTableFixture) {
  TempDir out;
  ASSERT_EQ(cli("report --table " CODEPROBE_TEST_DATA "/published_accuracy.csv --baseline BERT --out " +
                q(out.path())),
            0);
  const auto rows = parse_csv(read_text_file(out / "deltas.csv"));
  ASSERT_EQ(rows.size(), 16u);
  const auto ct = csv_column(rows[0], "task"), cd = csv_column(rows[0], "delta");
  EXPECT_EQ(rows[1][ct], "KTX");
  EXPECT_NEAR(parse_double(rows[1][cd]), 25.2, 1e-9);
  EXPECT_TRUE(std::filesystem::exists(out / "models.csv"));
}

TEST(ReportCommandTest, FromProbeReports) {
  ProbeInputs in;
  make_probe_inputs(in);
  TempDir reports, out;
  ASSERT_EQ(cli(probe_args(in, reports.path()) + " --model code"), 0);
  ASSERT_EQ(cli(probe_args(in, reports.path()) + " --model base --seed 9"), 0);
  ASSERT_EQ(cli("report --in " + q(reports.path()) + " --baseline base --out " + q(out.path())),
            0);
  const auto deltas = parse_csv(read_text_file(out / "deltas.csv"));
  EXPECT_EQ(deltas.size(), 2u);
  EXPECT_TRUE(std::filesystem::exists(out.path() / "heatmaps" / "code.svg"));
  EXPECT_EQ(cli("report --in " + q(reports.path()) + " --baseline nobody --out " + q(out.path())),
            kExitData);
  EXPECT_EQ(cli("report --baseline base --out " + q(out.path())), kExitUsage);
}

TEST(ValidateCommandTest, SyntheticCorpus) {
  TempDir dir;
  std::ostringstream log, json;
  cmd_gen_corpus({100, 1, dir / "c.jsonl"}, log);
  const auto d = cmd_validate({dir / "c.jsonl", 1}, json);
  EXPECT_EQ(d["samples"], 100);
  EXPECT_EQ(d["lexed"], 100);
  for (const auto& [task, h] : d["histograms"].items()) {
    std::size_t sum = h["unlabeled"].get<std::size_t>();
    for (const auto& c : h["counts"]) sum += c.get<std::size_t>();
    EXPECT_EQ(sum, 100u) << task;
  }
  EXPECT_EQ(nlohmann::json::parse(json.str())["samples"], 100);
}

TEST(ValidateCommandTest, EmptyCorpusFails) {
  TempDir dir;
  write_text_file(dir / "empty.jsonl", "");
  std::ostringstream json;
  try {
    cmd_validate({dir / "empty.jsonl", 1}, json);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientSamples);
  }
  EXPECT_EQ(nlohmann::json::parse(json.str())["samples"], 0);
  EXPECT_NE(cli("validate --corpus " + q(dir / "empty.jsonl")), 0);
}

TEST(ConvertJavaCommandTest, WalksSourceTree) {
  TempDir dir;
  write_text_file(dir.path() / "src" / "b" / "B.java", "class B { void g() { y(); } }\n");
  write_text_file(dir.path() / "src" / "A.java", "class A { int f() { return 1; } }\n");
  ASSERT_EQ(cli("convert-java --src " + q(dir / "src") + " --out " + q(dir / "c.jsonl")), 0);
  const auto corpus = read_corpus(dir / "c.jsonl");
  ASSERT_EQ(corpus.size(), 2u);
  EXPECT_NE(corpus[0].source.find("f()"), std::string::npos);
  EXPECT_EQ(cli("convert-java --src " + q(dir / "nope") + " --out " + q(dir / "c.jsonl")),
            kExitData);
}

}  // namespace
}  // namespace codeprobe
