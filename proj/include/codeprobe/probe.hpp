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

// Linear probing classifier: multinomial logistic regression with an L2
// penalty, trained one example at a time with Adam and early stopping on
// validation accuracy.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "codeprobe/csv.hpp"
#include "codeprobe/embedstore.hpp"
#include "codeprobe/error.hpp"
#include "codeprobe/rng.hpp"
#include "codeprobe/taskgen.hpp"
#include "json.hpp"

namespace codeprobe {

using FeatureMatrix = LayerMatrix;

struct TrainConfig {
  int batch_size = 1;
  int max_epochs = 20;
  int tenacity = 5;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<double> l2_grid = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
  // Per-dimension standardization with train-split statistics. Off by
  // default: it inflates low-variance dimensions to unit scale.
  bool standardize = false;
  // Validation accuracies within this many binomial standard errors of the
  // best count as tied; 0 means exact ties only.
  double tie_tolerance_se = 1.0;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct LinearProbe {
  std::size_t dim = 0;
  int classes = 0;
  // classes x dim, row-major.
  std::vector<double> weights;
  std::vector<double> bias;
  double l2 = 0.0;
  // Empty when features are used raw.
  std::vector<double> mean;
  std::vector<double> scale;
  int epochs_run = 0;
  int best_epoch = 0;
  double val_accuracy = 0.0;
  std::uint64_t seed = 0;

  void transform(std::span<const float> x, std::vector<double>& out) const {
    out.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      out[d] = mean.empty() ? x[d] : (x[d] - mean[d]) / scale[d];
    }
  }

  void logits(std::span<const double> x, std::vector<double>& z) const {
    z.resize(classes);
    for (int c = 0; c < classes; ++c) {
      const double* w = weights.data() + c * dim;
      double s = bias[c];
      for (std::size_t d = 0; d < dim; ++d) s += w[d] * x[d];
      z[c] = s;
    }
  }

  int predict(std::span<const float> x) const {
    std::vector<double> t, z;
    transform(x, t);
    logits(t, z);
    return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
  }
};

struct Evaluation {
  double accuracy = 0.0;
  // confusion[true][predicted]
  std::vector<std::vector<std::uint64_t>> confusion;
};

namespace probe_detail {

inline void softmax(std::vector<double>& z) {
  const double m = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - m);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

inline void check_shape(const FeatureMatrix& x, std::span<const int> labels) {
  if (x.data.size() != x.rows * x.cols || labels.size() != x.rows) {
    throw Error(ErrorCode::kShapeMismatch, "features have " + std::to_string(x.rows) +
                                               " rows, labels " +
                                               std::to_string(labels.size()));
  }
}

inline void fit_standardizer(const FeatureMatrix& x, LinearProbe& p) {
  p.mean.assign(x.cols, 0.0);
  p.scale.assign(x.cols, 0.0);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t d = 0; d < x.cols; ++d) p.mean[d] += x.data[i * x.cols + d];
  }
  for (double& m : p.mean) m /= static_cast<double>(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    for (std::size_t d = 0; d < x.cols; ++d) {
      const double dv = x.data[i * x.cols + d] - p.mean[d];
      p.scale[d] += dv * dv;
    }
  }
  for (double& s : p.scale) {
    s = std::sqrt(s / static_cast<double>(x.rows));
    if (!(s > 0.0)) s = 1.0;
  }
}

inline bool constant_features(const FeatureMatrix& x) {
  for (std::size_t d = 0; d < x.cols; ++d) {
    for (std::size_t i = 1; i < x.rows; ++i) {
      if (x.data[i * x.cols + d] != x.data[d]) return false;
    }
  }
  return true;
}

inline double accuracy_of(const LinearProbe& p, const std::vector<std::vector<double>>& xs,
                          std::span<const int> labels) {
  if (xs.empty()) return 0.0;
  std::vector<double> z;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    p.logits(xs[i], z);
    const int pred = static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
    hits += pred == labels[i];
  }
  return static_cast<double>(hits) / static_cast<double>(xs.size());
}

}  // namespace probe_detail

// Mean cross-entropy plus lambda * ||W||^2 (bias unpenalised) on `x`, after
// the probe's own standardization.
struct Objective {
  double value = 0.0;
  std::vector<double> grad_weights;
  std::vector<double> grad_bias;
};

inline Objective objective_gradient(const LinearProbe& p, const FeatureMatrix& x,
                                    std::span<const int> labels, double lambda) {
  probe_detail::check_shape(x, labels);
  Objective obj;
  obj.grad_weights.assign(p.weights.size(), 0.0);
  obj.grad_bias.assign(p.classes, 0.0);
  std::vector<double> t, z;
  const double inv_n = 1.0 / static_cast<double>(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    p.transform(x.row(i), t);
    p.logits(t, z);
    probe_detail::softmax(z);
    obj.value -= std::log(z[labels[i]]) * inv_n;
    for (int c = 0; c < p.classes; ++c) {
      const double g = (z[c] - (c == labels[i] ? 1.0 : 0.0)) * inv_n;
      obj.grad_bias[c] += g;
      double* gw = obj.grad_weights.data() + c * p.dim;
      for (std::size_t d = 0; d < p.dim; ++d) gw[d] += g * t[d];
    }
  }
  for (std::size_t k = 0; k < p.weights.size(); ++k) {
    obj.value += lambda * p.weights[k] * p.weights[k];
    obj.grad_weights[k] += 2.0 * lambda * p.weights[k];
  }
  return obj;
}

// Trains one probe with a fixed L2 coefficient. Returns the parameters of
// the epoch with the best validation accuracy; with an empty validation set
// the last epoch is kept. `epoch_loss`, when given, receives the mean
// training cross-entropy after each epoch.
inline LinearProbe train_probe(const FeatureMatrix& train_x, std::span<const int> train_y,
                               const FeatureMatrix& val_x, std::span<const int> val_y,
                               int classes, double lambda, const TrainConfig& config,
                               std::vector<double>* epoch_loss = nullptr) {
  probe_detail::check_shape(train_x, train_y);
  probe_detail::check_shape(val_x, val_y);
  if (classes < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two classes");
  if (train_x.rows < static_cast<std::size_t>(classes)) {
    throw Error(ErrorCode::kInsufficientSamples, "fewer training rows than classes");
  }
  if (val_x.rows > 0 && val_x.cols != train_x.cols) {
    throw Error(ErrorCode::kShapeMismatch, "train and validation widths differ");
  }
  if (config.batch_size != 1) {
    throw Error(ErrorCode::kInvalidArgument, "only batch size 1 is supported");
  }
  for (std::span<const int> ys : {train_y, val_y}) {
    for (int y : ys) {
      if (y < 0 || y >= classes) {
        throw Error(ErrorCode::kInvalidArgument, "label " + std::to_string(y) + " out of range");
      }
    }
  }
  if (std::all_of(train_y.begin(), train_y.end(), [&](int y) { return y == train_y[0]; })) {
    throw Error(ErrorCode::kDegenerateInput, "training labels are single-class");
  }
  if (probe_detail::constant_features(train_x)) {
    throw Error(ErrorCode::kDegenerateInput, "training features are constant");
  }

  LinearProbe p;
  p.dim = train_x.cols;
  p.classes = classes;
  p.l2 = lambda;
  p.seed = config.seed;
  p.weights.assign(p.dim * classes, 0.0);
  p.bias.assign(classes, 0.0);
  if (config.standardize) probe_detail::fit_standardizer(train_x, p);

  std::vector<std::vector<double>> xs(train_x.rows), vs(val_x.rows);
  for (std::size_t i = 0; i < train_x.rows; ++i) p.transform(train_x.row(i), xs[i]);
  for (std::size_t i = 0; i < val_x.rows; ++i) p.transform(val_x.row(i), vs[i]);

  std::vector<double> mw(p.weights.size(), 0.0), vw(p.weights.size(), 0.0);
  std::vector<double> mb(classes, 0.0), vb(classes, 0.0);
  std::vector<std::size_t> order(train_x.rows);
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(config.seed, "probe-order"));

  LinearProbe best = p;
  double best_acc = -1.0;
  int stale = 0;
  double b1t = 1.0, b2t = 1.0;
  std::vector<double> z;
  const double lr = config.learning_rate;
  const double b1 = config.beta1, b2 = config.beta2, eps = config.epsilon;

  int epoch = 0;
  while (epoch < config.max_epochs) {
    ++epoch;
    rng.shuffle(order);
    for (std::size_t i : order) {
      const auto& x = xs[i];
      p.logits(x, z);
      probe_detail::softmax(z);
      b1t *= b1;
      b2t *= b2;
      const double c1 = 1.0 / (1.0 - b1t);
      const double c2 = 1.0 / (1.0 - b2t);
      for (int c = 0; c < classes; ++c) {
        const double g = z[c] - (c == train_y[i] ? 1.0 : 0.0);
        double* w = p.weights.data() + c * p.dim;
        double* m = mw.data() + c * p.dim;
        double* v = vw.data() + c * p.dim;
        for (std::size_t d = 0; d < p.dim; ++d) {
          const double gw = g * x[d] + 2.0 * lambda * w[d];
          m[d] = b1 * m[d] + (1.0 - b1) * gw;
          v[d] = b2 * v[d] + (1.0 - b2) * gw * gw;
          w[d] -= lr * (m[d] * c1) / (std::sqrt(v[d] * c2) + eps);
        }
        mb[c] = b1 * mb[c] + (1.0 - b1) * g;
        vb[c] = b2 * vb[c] + (1.0 - b2) * g * g;
        p.bias[c] -= lr * (mb[c] * c1) / (std::sqrt(vb[c] * c2) + eps);
      }
    }
    if (epoch_loss) {
      double loss = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        p.logits(xs[i], z);
        probe_detail::softmax(z);
        loss -= std::log(std::max(z[train_y[i]], 1e-300));
      }
      epoch_loss->push_back(loss / static_cast<double>(xs.size()));
    }
    if (vs.empty()) {
      best = p;
      best.best_epoch = epoch;
      continue;
    }
    const double acc = probe_detail::accuracy_of(p, vs, val_y);
    if (acc > best_acc) {
      best_acc = acc;
      best = p;
      best.best_epoch = epoch;
      best.val_accuracy = acc;
      stale = 0;
    } else if (++stale >= config.tenacity) {
      break;
    }
  }
  best.epochs_run = epoch;
  return best;
}

inline Evaluation evaluate(const LinearProbe& p, const FeatureMatrix& x,
                           std::span<const int> labels) {
  probe_detail::check_shape(x, labels);
  if (x.rows > 0 && x.cols != p.dim) {
    throw Error(ErrorCode::kShapeMismatch, "feature width " + std::to_string(x.cols) +
                                               " but probe expects " + std::to_string(p.dim));
  }
  Evaluation e;
  e.confusion.assign(p.classes, std::vector<std::uint64_t>(p.classes, 0));
  std::size_t hits = 0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    if (labels[i] < 0 || labels[i] >= p.classes) {
      throw Error(ErrorCode::kShapeMismatch, "label outside the probe's classes");
    }
    const int pred = p.predict(x.row(i));
    ++e.confusion[labels[i]][pred];
    hits += pred == labels[i];
  }
  e.accuracy = x.rows ? static_cast<double>(hits) / static_cast<double>(x.rows) : 0.0;
  return e;
}

struct TuneResult {
  double lambda = 0.0;
  LinearProbe probe;
  // Validation accuracy per grid entry, in grid order.
  std::vector<double> val_accuracy;
};

// Trains one probe per grid value and keeps the one with the best validation
// accuracy; statistical ties go to the larger coefficient.
inline TuneResult tune_l2(const FeatureMatrix& train_x, std::span<const int> train_y,
                          const FeatureMatrix& val_x, std::span<const int> val_y, int classes,
                          const TrainConfig& config) {
  if (config.l2_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty lambda grid");
  std::vector<LinearProbe> probes;
  TuneResult r;
  for (double lambda : config.l2_grid) {
    probes.push_back(train_probe(train_x, train_y, val_x, val_y, classes, lambda, config));
    r.val_accuracy.push_back(probes.back().val_accuracy);
  }
  const double best = *std::max_element(r.val_accuracy.begin(), r.val_accuracy.end());
  const double n_val = static_cast<double>(std::max<std::size_t>(val_x.rows, 1));
  const double band = config.tie_tolerance_se * std::sqrt(best * (1.0 - best) / n_val);
  std::size_t pick = 0;
  bool found = false;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    if (r.val_accuracy[k] + band + 1e-12 < best) continue;
    if (!found || config.l2_grid[k] > config.l2_grid[pick]) pick = k;
    found = true;
  }
  r.lambda = config.l2_grid[pick];
  r.probe = std::move(probes[pick]);
  return r;
}

// ---------------------------------------------------------------------------
// Per-layer probing of an embedding store against a task dataset.

struct LayerResult {
  // One-based model layer number.
  int layer = 0;
  double accuracy = 0.0;
  double best_lambda = 0.0;
  int early_stop_epoch = 0;
  int epochs_run = 0;
  double val_accuracy = 0.0;
  bool best = false;
  std::vector<std::vector<std::uint64_t>> confusion;
};

struct LayerReport {
  std::string model;
  std::string task;
  int class_count = 0;
  std::vector<LayerResult> layers;
  TrainConfig config;

  const LayerResult* best_layer() const {
    for (const auto& l : layers) {
      if (l.best) return &l;
    }
    return nullptr;
  }
};

inline void mark_best_layer(LayerReport& report) {
  std::size_t best = 0;
  for (std::size_t k = 0; k < report.layers.size(); ++k) {
    report.layers[k].best = false;
    const auto& a = report.layers[k];
    const auto& b = report.layers[best];
    if (a.accuracy > b.accuracy || (a.accuracy == b.accuracy && a.layer < b.layer)) best = k;
  }
  if (!report.layers.empty()) report.layers[best].best = true;
}

struct SplitRows {
  std::array<std::vector<std::size_t>, 3> rows;  // store row indices per split
  std::array<std::vector<int>, 3> labels;
};

// Aligns dataset examples with store rows by sample id. Throws
// Error{kSampleMismatch} unless the id sets are identical.
inline SplitRows align_samples(std::span<const std::uint64_t> store_ids,
                               const TaskDataset& dataset) {
  std::map<std::uint64_t, std::size_t> row_of;
  for (std::size_t i = 0; i < store_ids.size(); ++i) {
    if (!row_of.emplace(store_ids[i], i).second) {
      throw Error(ErrorCode::kSampleMismatch,
                  "duplicate sample id " + std::to_string(store_ids[i]) + " in store");
    }
  }
  if (row_of.size() != dataset.examples.size()) {
    throw Error(ErrorCode::kSampleMismatch,
                "store has " + std::to_string(row_of.size()) + " samples, dataset " +
                    std::to_string(dataset.examples.size()));
  }
  SplitRows out;
  for (const auto& ex : dataset.examples) {
    auto it = row_of.find(ex.id);
    if (it == row_of.end()) {
      throw Error(ErrorCode::kSampleMismatch,
                  "dataset id " + std::to_string(ex.id) + " missing from store");
    }
    const int s = static_cast<int>(ex.split);
    out.rows[s].push_back(it->second);
    out.labels[s].push_back(ex.label);
  }
  return out;
}

inline FeatureMatrix gather_rows(const FeatureMatrix& layer, std::span<const std::size_t> rows) {
  FeatureMatrix m;
  m.rows = rows.size();
  m.cols = layer.cols;
  m.data.resize(m.rows * m.cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(layer.data.begin() + rows[i] * layer.cols, layer.cols,
                m.data.begin() + i * m.cols);
  }
  return m;
}

inline LayerResult probe_layer(const FeatureMatrix& layer, const SplitRows& split,
                               int layer_number, int classes, const TrainConfig& config) {
  TrainConfig cfg = config;
  cfg.seed = derive_seed(config.seed, "layer:" + std::to_string(layer_number));
  const auto train = gather_rows(layer, split.rows[0]);
  const auto val = gather_rows(layer, split.rows[1]);
  const auto test = gather_rows(layer, split.rows[2]);
  const auto tuned = tune_l2(train, split.labels[0], val, split.labels[1], classes, cfg);
  const auto eval = evaluate(tuned.probe, test, split.labels[2]);
  LayerResult r;
  r.layer = layer_number;
  r.accuracy = eval.accuracy;
  r.best_lambda = tuned.lambda;
  r.early_stop_epoch = tuned.probe.best_epoch;
  r.epochs_run = tuned.probe.epochs_run;
  r.val_accuracy = tuned.probe.val_accuracy;
  r.confusion = eval.confusion;
  return r;
}

// Probes each selected layer (zero-based stored indices; all when empty).
// `load` must return the n x D matrix of one stored layer and is called
// under a lock. Layers run on config.workers threads; results do not depend
// on scheduling.
inline LayerReport probe_layers(std::span<const std::uint64_t> store_ids, std::uint32_t layer_count,
                                std::uint32_t first_layer,
                                const std::function<FeatureMatrix(std::size_t)>& load,
                                const TaskDataset& dataset, const std::string& model,
                                const TrainConfig& config,
                                std::vector<std::size_t> layers = {}) {
  const SplitRows split = align_samples(store_ids, dataset);
  if (layers.empty()) {
    for (std::size_t k = 0; k < layer_count; ++k) layers.push_back(k);
  }
  for (std::size_t k : layers) {
    if (k >= layer_count) {
      throw Error(ErrorCode::kInvalidArgument,
                  "layer " + std::to_string(k + first_layer) + " not in store");
    }
  }
  LayerReport report;
  report.model = model;
  report.task = std::string(task_name(dataset.task));
  report.class_count = dataset.class_count;
  report.config = config;
  report.layers.resize(layers.size());

  std::mutex load_mutex;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= layers.size()) return;
      try {
        FeatureMatrix m;
        {
          std::lock_guard lock(load_mutex);
          m = load(layers[job]);
        }
        report.layers[job] = probe_layer(m, split, static_cast<int>(layers[job] + first_layer),
                                         dataset.class_count, config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(config.workers, static_cast<int>(layers.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::sort(report.layers.begin(), report.layers.end(),
            [](const LayerResult& a, const LayerResult& b) { return a.layer < b.layer; });
  mark_best_layer(report);
  return report;
}

inline LayerReport probe_all_layers(const EmbeddingSet& store, const TaskDataset& dataset,
                                    const TrainConfig& config,
                                    std::vector<std::size_t> layers = {}) {
  auto load = [&](std::size_t layer) {
    FeatureMatrix m;
    m.rows = store.sample_count();
    m.cols = store.hidden_dim;
    m.data.resize(m.rows * m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
      const auto v = store.vector(i, layer);
      std::copy(v.begin(), v.end(), m.data.begin() + i * m.cols);
    }
    return m;
  };
  return probe_layers(store.sample_ids, store.layer_count, kFirstStoredLayer, load, dataset,
                      store.model_id, config, std::move(layers));
}

inline LayerReport probe_all_layers(EmbeddingReader& reader, const TaskDataset& dataset,
                                    const TrainConfig& config,
                                    std::vector<std::size_t> layers = {}) {
  const auto& h = reader.header();
  return probe_layers(reader.sample_ids(), h.layer_count, h.first_layer,
                      [&](std::size_t layer) { return reader.read_layer(layer); }, dataset,
                      h.model_id, config, std::move(layers));
}

// ---------------------------------------------------------------------------
// LayerReport files: <dir>/<model>_<task>.csv, a .meta.json sidecar and
// <dir>/confusion/<model>_<task>_<layer>.csv.

inline const std::vector<std::string>& layer_report_columns() {
  static const std::vector<std::string> cols = {
      "model",      "task",          "layer",       "accuracy", "best_lambda",
      "early_stop_epoch", "epochs_run", "val_accuracy", "best"};
  return cols;
}

inline std::string report_stem(const std::string& model, const std::string& task) {
  return file_stem(model) + "_" + file_stem(task);
}

inline std::string confusion_csv(const std::vector<std::vector<std::uint64_t>>& confusion) {
  std::string out = "true\\predicted";
  for (std::size_t c = 0; c < confusion.size(); ++c) out += "," + std::to_string(c);
  out += '\n';
  for (std::size_t r = 0; r < confusion.size(); ++r) {
    out += std::to_string(r);
    for (auto v : confusion[r]) out += "," + std::to_string(v);
    out += '\n';
  }
  return out;
}

inline std::vector<std::vector<std::uint64_t>> parse_confusion_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  std::vector<std::vector<std::uint64_t>> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    std::vector<std::uint64_t> row;
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      row.push_back(static_cast<std::uint64_t>(parse_int(rows[r][c])));
    }
    out.push_back(std::move(row));
  }
  return out;
}

inline std::string layer_report_csv(const LayerReport& report) {
  std::string out = csv_row(layer_report_columns());
  for (const auto& l : report.layers) {
    out += csv_row({report.model, report.task, std::to_string(l.layer),
                    format_double(l.accuracy), format_double(l.best_lambda),
                    std::to_string(l.early_stop_epoch), std::to_string(l.epochs_run),
                    format_double(l.val_accuracy), l.best ? "1" : "0"});
  }
  return out;
}

inline nlohmann::ordered_json train_config_json(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["batch_size"] = c.batch_size;
  j["max_epochs"] = c.max_epochs;
  j["tenacity"] = c.tenacity;
  j["optimizer"] = "adam";
  j["learning_rate"] = c.learning_rate;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["epsilon"] = c.epsilon;
  j["l2_grid"] = c.l2_grid;
  j["standardize"] = c.standardize;
  j["tie_tolerance_se"] = c.tie_tolerance_se;
  j["seed"] = c.seed;
  return j;
}

inline void write_layer_report(const LayerReport& report, const std::filesystem::path& dir) {
  const std::string stem = report_stem(report.model, report.task);
  write_text_file(dir / (stem + ".csv"), layer_report_csv(report));
  nlohmann::ordered_json meta;
  meta["model"] = report.model;
  meta["task"] = report.task;
  meta["class_count"] = report.class_count;
  meta["train_config"] = train_config_json(report.config);
  write_text_file(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
  for (const auto& l : report.layers) {
    if (l.confusion.empty()) continue;
    write_text_file(dir / "confusion" / (stem + "_" + std::to_string(l.layer) + ".csv"),
                    confusion_csv(l.confusion));
  }
}

inline std::vector<LayerReport> parse_layer_reports(std::string_view csv_text) {
  const auto rows = parse_csv(csv_text);
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "empty layer report");
  const auto& h = rows[0];
  const std::size_t cm = csv_column(h, "model"), ct = csv_column(h, "task"),
                    cl = csv_column(h, "layer"), ca = csv_column(h, "accuracy");
  const auto opt = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto cb = opt("best_lambda"), ce = opt("early_stop_epoch"), cr = opt("epochs_run"),
             cv = opt("val_accuracy");
  std::vector<LayerReport> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.size()) {
      throw Error(ErrorCode::kInvalidArgument, "layer report row " + std::to_string(r) +
                                                   " has " + std::to_string(row.size()) +
                                                   " fields");
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const LayerReport& rep) {
      return rep.model == row[cm] && rep.task == row[ct];
    });
    if (it == out.end()) {
      out.push_back({});
      it = out.end() - 1;
      it->model = row[cm];
      it->task = row[ct];
      if (auto t = parse_task(row[ct])) it->class_count = class_count(*t);
    }
    LayerResult l;
    l.layer = static_cast<int>(parse_int(row[cl]));
    l.accuracy = parse_double(row[ca]);
    if (cb) l.best_lambda = parse_double(row[*cb]);
    if (ce) l.early_stop_epoch = static_cast<int>(parse_int(row[*ce]));
    if (cr) l.epochs_run = static_cast<int>(parse_int(row[*cr]));
    if (cv) l.val_accuracy = parse_double(row[*cv]);
    it->layers.push_back(std::move(l));
  }
  for (auto& rep : out) mark_best_layer(rep);
  return out;
}

// Reads one report CSV and any confusion matrices next to it.
inline std::vector<LayerReport> read_layer_reports(const std::filesystem::path& csv_path) {
  auto reports = parse_layer_reports(read_text_file(csv_path));
  const auto dir = csv_path.parent_path();
  for (auto& rep : reports) {
    for (auto& l : rep.layers) {
      const auto p = dir / "confusion" /
                     (report_stem(rep.model, rep.task) + "_" + std::to_string(l.layer) + ".csv");
      if (std::filesystem::exists(p)) l.confusion = parse_confusion_csv(read_text_file(p));
    }
  }
  return reports;
}

}  // namespace codeprobe
