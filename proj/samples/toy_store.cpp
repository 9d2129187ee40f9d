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


// Writes a stand-in embedding store for a dataset file so the probe and
// report stages can run without a transformer. Layer l carries the label
// code with strength peaking at layer `peak`, on top of Gaussian noise.
//
//   toy_store DATASET.jsonl OUT.bin MODEL_ID [layers=12] [dim=64] [peak=7]

#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>

#include "codeprobe/embedstore.hpp"
#include "codeprobe/rng.hpp"
#include "codeprobe/taskgen.hpp"

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: toy_store DATASET.jsonl OUT.bin MODEL_ID [layers] [dim] [peak]\n";
    return 1;
  }
  const std::uint32_t layers = argc > 4 ? std::stoul(argv[4]) : 12;
  const std::uint32_t dim = argc > 5 ? std::stoul(argv[5]) : 64;
  const int peak = argc > 6 ? std::stoi(argv[6]) : 7;
  try {
    const codeprobe::TaskDataset ds = codeprobe::read_dataset(std::string(argv[1]));
    codeprobe::EmbeddingSet set;
    set.model_id = argv[3];
    set.task_id = std::string(codeprobe::task_name(ds.task));
    set.layer_count = layers;
    set.hidden_dim = dim;
    codeprobe::Rng rng(std::hash<std::string>{}(set.model_id + set.task_id));
    for (const auto& ex : ds.examples) {
      set.sample_ids.push_back(ex.id);
      for (std::uint32_t l = 1; l <= layers; ++l) {
        const double strength = 1.5 * std::exp(-0.5 * std::pow((double(l) - peak) / 3.0, 2));
        for (std::uint32_t d = 0; d < dim; ++d) {
          double v = rng.normal();
          if (d == static_cast<std::uint32_t>(ex.label) % dim) v += strength;
          set.values.push_back(static_cast<float>(v));
        }
      }
    }
    codeprobe::write_embeddings(set, argv[2]);
  } catch (const std::exception& e) {
    std::cerr << "toy_store: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
