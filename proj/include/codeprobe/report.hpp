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

// Cross-model aggregation of probe results: best-layer accuracy tables,
// per-task spread and gain over a baseline, model rankings, layer-rank
// profiles, and their CSV / SVG renderings. Accuracies are in percent.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "codeprobe/csv.hpp"
#include "codeprobe/error.hpp"
#include "codeprobe/probe.hpp"
#include "codeprobe/tasks.hpp"

namespace codeprobe {

struct TaskSummary {
  Task task = Task::kKTX;
  double max_accuracy = 0.0;
  std::string max_model;
  double std_dev = 0.0;
  double delta = 0.0;
  int max_rank = 0;
  int std_rank = 0;
  int delta_rank = 0;
};

struct ModelSummary {
  std::string model;
  bool baseline = false;
  // Number of tasks on which the model ranks first, second and third.
  std::array<int, 3> rank_tally{};
  int below_baseline = 0;
};

struct ResultsTable {
  std::string baseline;
  // Sorted model ids, baseline included.
  std::vector<std::string> models;
  // Tasks present, in table order.
  std::vector<Task> tasks;
  // [model][task], percent.
  std::vector<std::vector<double>> accuracy;
  // [model][task], best layer number or 0 when not known.
  std::vector<std::vector<int>> best_layer;
  // [model][task], 1 = best; ties go to the lexicographically smaller id.
  std::vector<std::vector<int>> model_rank;
  std::vector<TaskSummary> task_summaries;
  std::vector<ModelSummary> model_summaries;

  std::size_t model_index(const std::string& id) const {
    auto it = std::find(models.begin(), models.end(), id);
    if (it == models.end()) throw Error(ErrorCode::kInvalidArgument, "unknown model " + id);
    return static_cast<std::size_t>(it - models.begin());
  }
};

// One accuracy cell, percent.
struct AccuracyCell {
  std::string model;
  Task task = Task::kKTX;
  double accuracy = 0.0;
  int best_layer = 0;
};

// Competition ranking ("1224"): equal values share the smaller rank.
inline std::vector<int> competition_ranks(const std::vector<double>& values, bool descending) {
  std::vector<int> ranks(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    int better = 0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (descending ? values[j] > values[i] : values[j] < values[i]) ++better;
    }
    ranks[i] = better + 1;
  }
  return ranks;
}

inline double population_std(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

inline ResultsTable summarize_cells(const std::vector<AccuracyCell>& cells,
                                    const std::string& baseline) {
  ResultsTable t;
  t.baseline = baseline;
  std::map<std::string, std::map<Task, const AccuracyCell*>> grid;
  for (const auto& c : cells) {
    if (!grid[c.model].emplace(c.task, &c).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate result for " + c.model + "/" +
                                                   std::string(task_name(c.task)));
    }
  }
  if (!grid.count(baseline)) {
    throw Error(ErrorCode::kMissingBaseline, "baseline model '" + baseline + "' not in results");
  }
  for (const auto& [model, row] : grid) t.models.push_back(model);
  for (Task task : kAllTasks) {
    if (grid.begin()->second.count(task)) t.tasks.push_back(task);
  }
  for (const auto& [model, row] : grid) {
    if (row.size() != t.tasks.size() ||
        !std::all_of(t.tasks.begin(), t.tasks.end(), [&](Task k) { return row.count(k); })) {
      throw Error(ErrorCode::kInvalidArgument, "model " + model + " covers a different task set");
    }
  }
  const std::size_t nm = t.models.size(), nt = t.tasks.size();
  t.accuracy.assign(nm, std::vector<double>(nt));
  t.best_layer.assign(nm, std::vector<int>(nt));
  t.model_rank.assign(nm, std::vector<int>(nt));
  for (std::size_t m = 0; m < nm; ++m) {
    for (std::size_t k = 0; k < nt; ++k) {
      const AccuracyCell* c = grid[t.models[m]][t.tasks[k]];
      t.accuracy[m][k] = c->accuracy;
      t.best_layer[m][k] = c->best_layer;
    }
  }
  const std::size_t base = t.model_index(baseline);

  std::vector<double> maxima, stds, deltas;
  for (std::size_t k = 0; k < nt; ++k) {
    TaskSummary s;
    s.task = t.tasks[k];
    std::size_t arg = 0;
    std::vector<double> others;
    for (std::size_t m = 0; m < nm; ++m) {
      if (t.accuracy[m][k] > t.accuracy[arg][k]) arg = m;
      if (m != base) others.push_back(t.accuracy[m][k]);
    }
    s.max_accuracy = t.accuracy[arg][k];
    s.max_model = t.models[arg];
    s.std_dev = population_std(others);
    s.delta = s.max_accuracy - t.accuracy[base][k];
    maxima.push_back(s.max_accuracy);
    stds.push_back(s.std_dev);
    deltas.push_back(s.delta);
    t.task_summaries.push_back(s);

    // Models are already in id order, so a stable sort breaks ties by id.
    std::vector<std::size_t> order(nm);
    for (std::size_t m = 0; m < nm; ++m) order[m] = m;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return t.accuracy[a][k] > t.accuracy[b][k];
    });
    for (std::size_t r = 0; r < nm; ++r) t.model_rank[order[r]][k] = static_cast<int>(r + 1);
  }
  const auto max_ranks = competition_ranks(maxima, true);
  const auto std_ranks = competition_ranks(stds, false);
  const auto delta_ranks = competition_ranks(deltas, true);
  for (std::size_t k = 0; k < nt; ++k) {
    t.task_summaries[k].max_rank = max_ranks[k];
    t.task_summaries[k].std_rank = std_ranks[k];
    t.task_summaries[k].delta_rank = delta_ranks[k];
  }
  for (std::size_t m = 0; m < nm; ++m) {
    ModelSummary ms;
    ms.model = t.models[m];
    ms.baseline = m == base;
    for (std::size_t k = 0; k < nt; ++k) {
      const int r = t.model_rank[m][k];
      if (r <= 3) ++ms.rank_tally[r - 1];
      if (t.accuracy[m][k] < t.accuracy[base][k]) ++ms.below_baseline;
    }
    t.model_summaries.push_back(ms);
  }
  return t;
}

// Best layer per (model, task) from probe reports.
inline ResultsTable summarize(const std::vector<LayerReport>& reports,
                              const std::string& baseline) {
  std::vector<AccuracyCell> cells;
  for (const auto& r : reports) {
    const auto task = parse_task(r.task);
    if (!task) throw Error(ErrorCode::kInvalidArgument, "unknown task " + r.task);
    if (r.layers.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "report " + r.model + "/" + r.task + " has no layers");
    }
    const LayerResult* best = &r.layers.front();
    for (const auto& l : r.layers) {
      if (l.accuracy > best->accuracy || (l.accuracy == best->accuracy && l.layer < best->layer)) {
        best = &l;
      }
    }
    cells.push_back({r.model, *task, 100.0 * best->accuracy, best->layer});
  }
  return summarize_cells(cells, baseline);
}

struct Normalized {
  double percent = 0.0;
  bool below_baseline = false;
};

// Position of `accuracy` between the baseline and the ceiling, in percent.
inline Normalized normalize_vs_baseline(double accuracy, double baseline,
                                        double ceiling = 100.0) {
  if (!(ceiling > baseline)) {
    throw Error(ErrorCode::kInvalidArgument, "ceiling must exceed the baseline");
  }
  return {100.0 * (accuracy - baseline) / (ceiling - baseline), accuracy < baseline};
}

// Ranks with ties sharing the mean of the positions they span.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double mean_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = mean_rank;
    i = j;
  }
  return ranks;
}

struct LayerProfile {
  std::string model;
  std::vector<int> layers;
  std::vector<double> mean_rank;
};

// Layers ranked per task (1 = most accurate), ranks averaged over tasks.
inline LayerProfile layer_rank_profile(const std::vector<LayerReport>& reports) {
  if (reports.empty()) throw Error(ErrorCode::kInvalidArgument, "no reports to profile");
  LayerProfile p;
  p.model = reports.front().model;
  for (const auto& r : reports) {
    if (r.model != p.model) {
      throw Error(ErrorCode::kInvalidArgument, "profile mixes models " + p.model + " and " + r.model);
    }
    if (r.layers.size() != reports.front().layers.size()) {
      throw Error(ErrorCode::kMixedLayerCounts,
                  p.model + ": " + std::to_string(r.layers.size()) + " layers for " + r.task +
                      ", " + std::to_string(reports.front().layers.size()) + " for " +
                      reports.front().task);
    }
  }
  auto sorted_layers = [](const LayerReport& r) {
    auto ls = r.layers;
    std::sort(ls.begin(), ls.end(),
              [](const LayerResult& a, const LayerResult& b) { return a.layer < b.layer; });
    return ls;
  };
  for (const auto& l : sorted_layers(reports.front())) p.layers.push_back(l.layer);
  p.mean_rank.assign(p.layers.size(), 0.0);
  for (const auto& r : reports) {
    const auto ls = sorted_layers(r);
    std::vector<double> acc;
    for (std::size_t k = 0; k < ls.size(); ++k) {
      if (ls[k].layer != p.layers[k]) {
        throw Error(ErrorCode::kMixedLayerCounts, p.model + ": layer sets differ across tasks");
      }
      acc.push_back(ls[k].accuracy);
    }
    const auto ranks = average_ranks(acc);
    for (std::size_t k = 0; k < ranks.size(); ++k) p.mean_rank[k] += ranks[k];
  }
  for (double& v : p.mean_rank) v /= static_cast<double>(reports.size());
  return p;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string results_csv(const ResultsTable& t) {
  std::string out = csv_row({"model", "task", "accuracy", "best_layer", "rank"});
  for (std::size_t m = 0; m < t.models.size(); ++m) {
    for (std::size_t k = 0; k < t.tasks.size(); ++k) {
      out += csv_row({t.models[m], std::string(task_name(t.tasks[k])),
                      format_double(t.accuracy[m][k]), std::to_string(t.best_layer[m][k]),
                      std::to_string(t.model_rank[m][k])});
    }
  }
  return out;
}

inline std::vector<AccuracyCell> parse_results_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty()) throw Error(ErrorCode::kInvalidArgument, "empty results table");
  const auto& h = rows[0];
  const std::size_t cm = csv_column(h, "model"), ct = csv_column(h, "task"),
                    ca = csv_column(h, "accuracy");
  std::optional<std::size_t> cl;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h[i] == "best_layer") cl = i;
  }
  std::vector<AccuracyCell> cells;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.size()) {
      throw Error(ErrorCode::kInvalidArgument, "results row " + std::to_string(r) + " is ragged");
    }
    const auto task = parse_task(row[ct]);
    if (!task) throw Error(ErrorCode::kInvalidArgument, "unknown task " + row[ct]);
    cells.push_back({row[cm], *task, parse_double(row[ca]),
                     cl ? static_cast<int>(parse_int(row[*cl])) : 0});
  }
  return cells;
}

inline std::string deltas_csv(const ResultsTable& t) {
  std::string out = csv_row({"task", "baseline", "baseline_accuracy", "max_accuracy", "max_model",
                             "std_dev", "delta", "max_rank", "std_rank", "delta_rank"});
  const std::size_t base = t.model_index(t.baseline);
  for (std::size_t k = 0; k < t.tasks.size(); ++k) {
    const auto& s = t.task_summaries[k];
    out += csv_row({std::string(task_name(s.task)), t.baseline, format_double(t.accuracy[base][k]),
                    format_double(s.max_accuracy), s.max_model, format_double(s.std_dev),
                    format_double(s.delta), std::to_string(s.max_rank),
                    std::to_string(s.std_rank), std::to_string(s.delta_rank)});
  }
  return out;
}

inline std::string models_csv(const ResultsTable& t) {
  std::string out =
      csv_row({"model", "baseline", "rank1", "rank2", "rank3", "below_baseline", "tie_break"});
  for (const auto& m : t.model_summaries) {
    out += csv_row({m.model, m.baseline ? "1" : "0", std::to_string(m.rank_tally[0]),
                    std::to_string(m.rank_tally[1]), std::to_string(m.rank_tally[2]),
                    std::to_string(m.below_baseline), "model_id"});
  }
  return out;
}

inline std::string layer_profiles_csv(const std::vector<LayerProfile>& profiles) {
  std::string out = csv_row({"model", "layer", "mean_rank"});
  for (const auto& p : profiles) {
    for (std::size_t k = 0; k < p.layers.size(); ++k) {
      out += csv_row({p.model, std::to_string(p.layers[k]), format_double(p.mean_rank[k])});
    }
  }
  return out;
}

struct Rgb {
  int r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr int kColorBuckets = 10;

// Bucket 0 holds accuracies at or below chance, the last bucket the ceiling.
inline int color_bucket(double accuracy, double chance, double ceiling) {
  if (!(ceiling > chance)) return accuracy > chance ? kColorBuckets - 1 : 0;
  const double t = (accuracy - chance) / (ceiling - chance);
  if (t <= 0.0) return 0;
  return std::min(kColorBuckets - 1, static_cast<int>(t * kColorBuckets));
}

inline Rgb bucket_color(int bucket) {
  // Red at chance through yellow to green at the ceiling.
  static constexpr Rgb kRed{229, 0, 0}, kYellow{240, 200, 40}, kGreen{0, 153, 51};
  const double t = static_cast<double>(bucket) / (kColorBuckets - 1);
  auto mix = [](const Rgb& a, const Rgb& b, double u) {
    return Rgb{static_cast<int>(std::lround(a.r + (b.r - a.r) * u)),
               static_cast<int>(std::lround(a.g + (b.g - a.g) * u)),
               static_cast<int>(std::lround(a.b + (b.b - a.b) * u))};
  };
  return t < 0.5 ? mix(kRed, kYellow, t * 2.0) : mix(kYellow, kGreen, (t - 0.5) * 2.0);
}

// Layers x tasks grid for one model. `ceilings` maps task name to the
// highest accuracy (fraction) seen for it; missing tasks use 1.0.
inline std::string heatmap_svg(const std::vector<LayerReport>& reports,
                               const std::map<std::string, double>& ceilings = {}) {
  std::vector<const LayerReport*> cols;
  for (Task task : kAllTasks) {
    for (const auto& r : reports) {
      if (r.task == task_name(task)) cols.push_back(&r);
    }
  }
  std::vector<int> layers;
  for (const auto* r : cols) {
    for (const auto& l : r->layers) {
      if (std::find(layers.begin(), layers.end(), l.layer) == layers.end()) {
        layers.push_back(l.layer);
      }
    }
  }
  std::sort(layers.begin(), layers.end());
  constexpr int kCell = 36, kLeft = 48, kTop = 24;
  const int width = kLeft + kCell * static_cast<int>(cols.size()) + 8;
  const int height = kTop + kCell * static_cast<int>(layers.size()) + 8;
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                  "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" " +
                  "font-size=\"10\">\n";
  if (!reports.empty()) s += "<title>" + reports.front().model + "</title>\n";
  for (std::size_t c = 0; c < cols.size(); ++c) {
    s += "<text x=\"" + std::to_string(kLeft + kCell * static_cast<int>(c) + kCell / 2) +
         "\" y=\"16\" text-anchor=\"middle\">" + cols[c]->task + "</text>\n";
  }
  for (std::size_t r = 0; r < layers.size(); ++r) {
    const int y = kTop + kCell * static_cast<int>(r);
    s += "<text x=\"4\" y=\"" + std::to_string(y + kCell / 2 + 3) + "\">L" +
         std::to_string(layers[r]) + "</text>\n";
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const auto& ls = cols[c]->layers;
      auto it = std::find_if(ls.begin(), ls.end(),
                             [&](const LayerResult& l) { return l.layer == layers[r]; });
      if (it == ls.end()) continue;
      const auto task = parse_task(cols[c]->task);
      const double chance = task ? chance_percent(*task) / 100.0 : 0.0;
      auto ce = ceilings.find(cols[c]->task);
      const double ceiling = ce == ceilings.end() ? 1.0 : ce->second;
      const Rgb col = bucket_color(color_bucket(it->accuracy, chance, ceiling));
      const int x = kLeft + kCell * static_cast<int>(c);
      s += "<rect class=\"cell\" x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
           "\" width=\"" + std::to_string(kCell) + "\" height=\"" + std::to_string(kCell) +
           "\" fill=\"rgb(" + std::to_string(col.r) + "," + std::to_string(col.g) + "," +
           std::to_string(col.b) + ")\"><title>" + cols[c]->task + " L" +
           std::to_string(it->layer) + " " + format_double(100.0 * it->accuracy) +
           "</title></rect>\n";
      char label[16];
      std::snprintf(label, sizeof label, "%.1f", 100.0 * it->accuracy);
      s += "<text x=\"" + std::to_string(x + kCell / 2) + "\" y=\"" +
           std::to_string(y + kCell / 2 + 3) + "\" text-anchor=\"middle\">" + label +
           "</text>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

// Writes results.csv, deltas.csv, models.csv, layer_profiles.csv,
// heatmaps/<model>.svg and confusion/<model>_<task>_<layer>.csv under `dir`.
// Models whose reports disagree on layer count get no profile.
inline void render(const ResultsTable& table, const std::vector<LayerReport>& reports,
                   const std::filesystem::path& dir) {
  write_text_file(dir / "results.csv", results_csv(table));
  write_text_file(dir / "deltas.csv", deltas_csv(table));
  write_text_file(dir / "models.csv", models_csv(table));

  std::map<std::string, std::vector<LayerReport>> by_model;
  std::map<std::string, double> ceilings;
  for (const auto& r : reports) {
    by_model[r.model].push_back(r);
    for (const auto& l : r.layers) {
      auto& c = ceilings[r.task];
      c = std::max(c, l.accuracy);
    }
  }
  std::vector<LayerProfile> profiles;
  for (const auto& [model, rs] : by_model) {
    try {
      profiles.push_back(layer_rank_profile(rs));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kMixedLayerCounts) throw;
    }
    write_text_file(dir / "heatmaps" / (file_stem(model) + ".svg"), heatmap_svg(rs, ceilings));
    for (const auto& r : rs) {
      for (const auto& l : r.layers) {
        if (l.confusion.empty()) continue;
        write_text_file(
            dir / "confusion" / (report_stem(r.model, r.task) + "_" + std::to_string(l.layer) + ".csv"),
            confusion_csv(l.confusion));
      }
    }
  }
  write_text_file(dir / "layer_profiles.csv", layer_profiles_csv(profiles));
}

}  // namespace codeprobe
