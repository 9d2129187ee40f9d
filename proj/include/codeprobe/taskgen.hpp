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

// Balanced, split probing datasets built from a method corpus.
//
// Every dataset holds n examples, n / class_count per class, and each class
// is split 60/20/20 into train/validation/test. Within a class, candidates
// are ranked by token count and drawn with a seeded shuffle from the
// shortest 2x pool, so short methods are preferred. The same corpus, task
// and seed always produce the same bytes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "codeprobe/corpus.hpp"
#include "codeprobe/error.hpp"
#include "codeprobe/lexer.hpp"
#include "codeprobe/mutator.hpp"
#include "codeprobe/rng.hpp"
#include "codeprobe/structure.hpp"
#include "codeprobe/tasks.hpp"
#include "json.hpp"

namespace codeprobe {

enum class Split { kTrain = 0, kVal = 1, kTest = 2 };

inline constexpr std::array<Split, 3> kAllSplits = {Split::kTrain, Split::kVal, Split::kTest};

constexpr std::string_view split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

inline Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "val") return Split::kVal;
  if (s == "test") return Split::kTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown split '" + std::string(s) + "'");
}

// Context window of the probed models; longer inputs get truncated.
inline constexpr int kMaxModelTokens = 512;

struct LabeledExample {
  std::uint64_t id = 0;
  // Corpus id of the method the example was made from.
  std::string source;
  Split split = Split::kTrain;
  int label = 0;
  std::string text;
  // Token to probe instead of the summary token (KTX only).
  std::optional<std::size_t> target_token_index;
};

// [class][split] -> member lexemes.
using KtxVocabulary = std::array<std::array<std::vector<std::string>, 3>, kTaxonomyClassCount>;

struct TaskDataset {
  Task task = Task::kKTX;
  int class_count = 0;
  int n = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> label_schema;
  std::vector<LabeledExample> examples;
  // LEN quintile cut points: label = number of cut points <= token count.
  std::vector<int> bin_boundaries;
  std::string corpus_hash;
  double truncation_rate = 0.0;
  std::optional<KtxVocabulary> ktx_vocabulary;
};

// ---------------------------------------------------------------------------
// Per-sample analysis

struct AnalyzedSample {
  bool lexable = false;
  bool parsed = false;
  bool trivial = false;
  std::vector<Token> tokens;
  std::string text;
  MetricVector metrics;
};

struct AnalyzedCorpus {
  std::vector<MethodSample> samples;
  std::vector<AnalyzedSample> analysis;
  std::string hash;
  // LEN cut points over eligible samples.
  std::vector<int> len_boundaries;

  bool eligible(std::size_t i) const {
    return analysis[i].lexable && analysis[i].parsed && !analysis[i].trivial;
  }
};

namespace detail {

inline const std::regex& accessor_name() {
  static const std::regex re("^(get|set|is)[A-Z_].*");
  return re;
}

}  // namespace detail

// Trivial accessors: a get/set/is name and a body that is one return or
// one assignment statement.
inline bool exclude_trivial(std::span<const Token> tokens) {
  std::size_t open_paren = tokens.size();
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].is("(")) {
      open_paren = i;
      break;
    }
    if (tokens[i].is("{") || tokens[i].is(";") || tokens[i].is("=")) return false;
  }
  if (open_paren >= tokens.size()) return false;
  const Token& name = tokens[open_paren - 1];
  if (name.kind != TokenKind::kIdentifier ||
      !std::regex_match(name.text, detail::accessor_name())) {
    return false;
  }
  std::size_t body = open_paren;
  while (body < tokens.size() && !tokens[body].is("{")) ++body;
  if (body >= tokens.size() || !tokens.back().is("}")) return false;
  const auto inner = tokens.subspan(body + 1, tokens.size() - body - 2);
  if (inner.empty()) return false;
  int semicolons = 0;
  bool assignment = false;
  for (const Token& t : inner) {
    if (t.is("{") || t.is("}")) return false;
    if (t.is(";")) ++semicolons;
    if (t.cls == TokenClass::kAssignment) assignment = true;
  }
  if (semicolons != 1 || !inner.back().is(";")) return false;
  if (inner.front().is("return")) return true;
  return assignment &&
         (inner.front().kind != TokenKind::kKeyword || inner.front().is("this"));
}

inline bool exclude_trivial(const MethodSample& sample) {
  try {
    const auto tokens = tokenize(sample.source);
    return exclude_trivial(tokens);
  } catch (const Error&) {
    return false;
  }
}

inline AnalyzedSample analyze_sample(const MethodSample& sample) {
  AnalyzedSample a;
  try {
    a.tokens = tokenize(sample.source);
    a.lexable = true;
  } catch (const Error&) {
    return a;
  }
  a.text = join_tokens(a.tokens);
  a.trivial = exclude_trivial(a.tokens);
  try {
    a.metrics = compute_metrics(a.tokens);
    a.parsed = true;
  } catch (const Error&) {
    a.parsed = false;
  }
  return a;
}

// Equal-frequency cut points: the values at ranks floor(k * N / bins).
inline std::vector<int> quantile_boundaries(std::vector<int> values, int bins) {
  std::vector<int> cuts;
  if (values.empty()) return cuts;
  std::sort(values.begin(), values.end());
  for (int k = 1; k < bins; ++k) {
    cuts.push_back(values[static_cast<std::size_t>(k) * values.size() / bins]);
  }
  return cuts;
}

// Labeling runs in parallel; results land at fixed indices so the output
// does not depend on the worker count.
inline AnalyzedCorpus analyze_corpus(std::vector<MethodSample> corpus, int workers = 1) {
  AnalyzedCorpus out;
  out.hash = corpus_hash(corpus);
  out.samples = std::move(corpus);
  out.analysis.resize(out.samples.size());
  const std::size_t count = out.samples.size();
  const std::size_t threads =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1,
                              std::max<std::size_t>(count, 1));
  auto work = [&](std::size_t t) {
    for (std::size_t i = t; i < count; i += threads) {
      out.analysis[i] = analyze_sample(out.samples[i]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  std::vector<int> lengths;
  for (std::size_t i = 0; i < count; ++i) {
    if (out.eligible(i)) lengths.push_back(out.analysis[i].metrics.token_count);
  }
  out.len_boundaries = quantile_boundaries(std::move(lengths), 5);
  return out;
}

struct LabelContext {
  std::vector<int> len_boundaries;
};

inline std::optional<int> npath_bin(std::uint64_t npath) {
  for (std::size_t b = 0; b < kNpathBins.size(); ++b) {
    if (npath >= kNpathBins[b][0] && npath <= kNpathBins[b][1]) return static_cast<int>(b);
  }
  return std::nullopt;
}

inline std::optional<int> len_bin(int token_count, std::span<const int> boundaries) {
  if (boundaries.empty()) return std::nullopt;
  int label = 0;
  for (int cut : boundaries) {
    if (token_count >= cut) ++label;
  }
  return label;
}

// Sample-level label, or nullopt when the value falls outside the class
// range. KTX and IDN are token-level tasks and have no sample label.
inline std::optional<int> label_analyzed(Task task, const AnalyzedSample& a,
                                         const LabelContext& ctx) {
  if (!a.lexable) return std::nullopt;
  auto exact = [](int v, int lo, int hi) -> std::optional<int> {
    if (v < lo || v > hi) return std::nullopt;
    return v - lo;
  };
  if (is_mutation_task(task)) {
    return mutation_applicable(task, a.tokens) ? std::optional<int>(0) : std::nullopt;
  }
  if (!a.parsed) return std::nullopt;
  const MetricVector& m = a.metrics;
  switch (task) {
    case Task::kLEN: return len_bin(m.token_count, ctx.len_boundaries);
    case Task::kOCU: return exact(m.unique_operators, 0, 9);
    case Task::kVCU: return exact(m.unique_variables, 0, 9);
    case Task::kCSC: return exact(m.structure_count, 0, 9);
    case Task::kMXN: return exact(m.max_nesting, 0, 4);
    case Task::kCPX: return exact(m.cyclomatic, 1, 10);
    case Task::kNPT: return m.npath_overflow ? std::nullopt : npath_bin(m.npath);
    default: return std::nullopt;
  }
}

inline std::optional<int> label_sample(Task task, const MethodSample& sample,
                                       const LabelContext& ctx) {
  return label_analyzed(task, analyze_sample(sample), ctx);
}

// ---------------------------------------------------------------------------
// KTX vocabulary partition

// Splits every taxonomy class's lexemes into disjoint train / val / test
// vocabularies, 20% (at least one) each for val and test.
inline KtxVocabulary ktx_generalization_split(std::uint64_t seed) {
  KtxVocabulary vocab;
  for (int c = 0; c < kTaxonomyClassCount; ++c) {
    const auto members = taxonomy::members(static_cast<TokenClass>(c));
    if (members.size() < 3) {
      throw Error(ErrorCode::kClassTooSmall,
                  std::string(token_class_name(static_cast<TokenClass>(c))) +
                      " has fewer than 3 members");
    }
    std::vector<std::string> lexemes(members.begin(), members.end());
    Rng rng(derive_seed(seed, "ktx-vocab:" + std::to_string(c)));
    rng.shuffle(lexemes);
    const std::size_t m = lexemes.size();
    const std::size_t held = std::max<std::size_t>(1, (m + 2) / 5);
    const std::size_t train = m - 2 * held;
    for (std::size_t i = 0; i < m; ++i) {
      const int part = i < train ? 0 : i < train + held ? 1 : 2;
      vocab[c][part].push_back(lexemes[i]);
    }
    for (auto& part : vocab[c]) std::sort(part.begin(), part.end());
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// IDN identifier harvesting

enum class IdentifierRole { kPackage = 0, kClass = 1, kMethod = 2, kVariable = 3 };

struct IdentifierRecord {
  std::string text;
  IdentifierRole role = IdentifierRole::kVariable;
  std::string source;
};

// Package of an import declaration: the dotted name minus its final simple
// name ("import java.util.List;" -> "java.util"). Static imports drop the
// member and its class. Returns empty for malformed input.
inline std::string import_package(std::string_view decl) {
  std::vector<Token> toks;
  try {
    toks = tokenize(decl);
  } catch (const Error&) {
    return {};
  }
  std::size_t i = 0;
  if (i < toks.size() && toks[i].is("import")) ++i;
  bool is_static = false;
  if (i < toks.size() && toks[i].is("static")) {
    is_static = true;
    ++i;
  }
  std::vector<std::string> parts;
  for (; i < toks.size(); ++i) {
    if (toks[i].kind == TokenKind::kIdentifier || toks[i].is("*")) {
      parts.push_back(toks[i].text);
    } else if (!toks[i].is(".")) {
      break;
    }
  }
  const std::size_t drop = is_static ? 2 : 1;
  if (parts.size() <= drop) return {};
  std::string out;
  for (std::size_t k = 0; k + drop < parts.size(); ++k) {
    if (k) out += '.';
    out += parts[k];
  }
  return out;
}

namespace detail {

inline bool type_like(const Token& t) {
  return t.kind == TokenKind::kIdentifier || t.cls == TokenClass::kPrimitiveType ||
         t.is(">") || t.is(">>") || t.is("]");
}

inline void harvest_tokens(std::span<const Token> toks, const std::string& source,
                           std::vector<IdentifierRecord>& out) {
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token& t = toks[i];
    if ((t.is("new") || t.is("extends") || t.is("implements")) && i + 1 < toks.size() &&
        toks[i + 1].kind == TokenKind::kIdentifier) {
      const Token& name = toks[i + 1];
      const bool typed = i + 2 >= toks.size() || toks[i + 2].is("(") ||
                         toks[i + 2].is("<") || toks[i + 2].is("[") ||
                         toks[i + 2].is("{") || toks[i + 2].is(",") ||
                         toks[i + 2].is(">") || toks[i + 2].is(")");
      if (typed) out.push_back({name.text, IdentifierRole::kClass, source});
      continue;
    }
    if (t.kind != TokenKind::kIdentifier) continue;
    const Token* prev = i > 0 ? &toks[i - 1] : nullptr;
    const Token* next = i + 1 < toks.size() ? &toks[i + 1] : nullptr;
    if (prev && (prev->is("new") || prev->is("@"))) continue;
    if (next && next->is("(")) {
      out.push_back({t.text, IdentifierRole::kMethod, source});
      continue;
    }
    if (prev && type_like(*prev) && !prev->is("]") && next &&
        (next->is("=") || next->is(";") || next->is(",") || next->is(")") ||
         next->is(":"))) {
      if (prev->kind == TokenKind::kIdentifier || prev->cls == TokenClass::kPrimitiveType ||
          prev->is(">") || prev->is(">>")) {
        out.push_back({t.text, IdentifierRole::kVariable, source});
      }
    }
  }
}

}  // namespace detail

// Collects (identifier, role) pairs from a corpus: packages from import
// declarations, everything else from token context in method text.
// Identifiers seen in more than one role are dropped. The result is sorted
// by (role, text) and then shuffled with `seed`.
inline std::vector<IdentifierRecord> extract_identifiers(const AnalyzedCorpus& corpus,
                                                         std::uint64_t seed) {
  std::vector<IdentifierRecord> raw;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    const auto& s = corpus.samples[i];
    for (const auto& imp : s.imports) {
      auto pkg = import_package(imp);
      if (!pkg.empty()) raw.push_back({std::move(pkg), IdentifierRole::kPackage, s.id});
    }
    if (corpus.analysis[i].lexable) {
      detail::harvest_tokens(corpus.analysis[i].tokens, s.id, raw);
    }
  }
  // First provenance per (text, role); roles per text.
  std::map<std::string, std::map<IdentifierRole, std::string>> seen;
  for (auto& r : raw) seen[r.text].try_emplace(r.role, r.source);
  std::vector<IdentifierRecord> out;
  std::array<int, 4> per_role{};
  for (auto& [text, roles] : seen) {
    if (roles.size() != 1) continue;
    const auto& [role, source] = *roles.begin();
    out.push_back({text, role, source});
    ++per_role[static_cast<int>(role)];
  }
  for (int r = 0; r < 4; ++r) {
    if (per_role[r] == 0) {
      throw Error(ErrorCode::kInsufficientSamples,
                  "IDN: no identifiers for role " + label_schema(Task::kIDN)[r]);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.role, a.text) < std::tie(b.role, b.text);
  });
  Rng rng(derive_seed(seed, "idn-order"));
  rng.shuffle(out);
  return out;
}

// ---------------------------------------------------------------------------
// Dataset assembly

namespace detail {

struct Candidate {
  std::size_t index = 0;  // into corpus, or into an identifier list
  int token_count = 0;
  std::string key;
};

inline Error insufficient(Task task, const std::string& cls, std::size_t have,
                          std::size_t need) {
  return Error(ErrorCode::kInsufficientSamples,
               std::string(task_name(task)) + " class " + cls + ": " +
                   std::to_string(have) + " eligible, " + std::to_string(need) + " needed");
}

// Shortest-first pool of 2 * need candidates, shuffled, first `need` kept.
inline std::vector<Candidate> draw_shortest(std::vector<Candidate> cands, std::size_t need,
                                            Rng& rng) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.token_count, a.key) < std::tie(b.token_count, b.key);
  });
  cands.resize(std::min(cands.size(), 2 * need));
  rng.shuffle(cands);
  cands.resize(std::min(cands.size(), need));
  return cands;
}

inline Split split_for(std::size_t rank, std::size_t per_class) {
  const std::size_t train = per_class * 3 / 5;
  const std::size_t val = per_class / 5;
  if (rank < train) return Split::kTrain;
  if (rank < train + val) return Split::kVal;
  return Split::kTest;
}

inline void finalize(TaskDataset& ds) {
  std::stable_sort(ds.examples.begin(), ds.examples.end(),
                   [](const LabeledExample& a, const LabeledExample& b) {
                     return std::tie(a.split, a.label) < std::tie(b.split, b.label);
                   });
  for (std::size_t i = 0; i < ds.examples.size(); ++i) ds.examples[i].id = i;
}

inline double truncation_rate(const std::vector<int>& lengths) {
  if (lengths.empty()) return 0.0;
  const auto over = std::count_if(lengths.begin(), lengths.end(),
                                  [](int len) { return len > kMaxModelTokens; });
  return static_cast<double>(over) / static_cast<double>(lengths.size());
}

inline void build_metric_task(TaskDataset& ds, const AnalyzedCorpus& corpus,
                              std::size_t per_class, std::vector<int>& lengths) {
  const LabelContext ctx{corpus.len_boundaries};
  std::vector<std::vector<Candidate>> by_class(ds.class_count);
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (!corpus.eligible(i)) continue;
    const auto label = label_analyzed(ds.task, corpus.analysis[i], ctx);
    if (!label) continue;
    by_class[*label].push_back(
        {i, corpus.analysis[i].metrics.token_count, corpus.samples[i].id});
  }
  for (int c = 0; c < ds.class_count; ++c) {
    if (by_class[c].size() < per_class) {
      throw insufficient(ds.task, ds.label_schema[c], by_class[c].size(), per_class);
    }
    Rng rng(derive_seed(ds.seed, std::string(task_name(ds.task)) + ":class:" +
                                     std::to_string(c)));
    const auto chosen = draw_shortest(std::move(by_class[c]), per_class, rng);
    for (std::size_t r = 0; r < chosen.size(); ++r) {
      const auto& a = corpus.analysis[chosen[r].index];
      ds.examples.push_back({0, corpus.samples[chosen[r].index].id,
                             split_for(r, per_class), c, a.text, std::nullopt});
      lengths.push_back(chosen[r].token_count);
    }
  }
}

inline void build_mutation_task(TaskDataset& ds, const AnalyzedCorpus& corpus,
                                std::size_t per_class, std::vector<int>& lengths) {
  std::vector<Candidate> cands;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (!corpus.eligible(i)) continue;
    if (!mutation_applicable(ds.task, corpus.analysis[i].tokens)) continue;
    cands.push_back({i, corpus.analysis[i].metrics.token_count, corpus.samples[i].id});
  }
  if (cands.size() < 2 * per_class) {
    throw insufficient(ds.task, "original+mutated", cands.size(), 2 * per_class);
  }
  Rng rng(derive_seed(ds.seed, std::string(task_name(ds.task)) + ":draw"));
  const auto chosen = draw_shortest(std::move(cands), 2 * per_class, rng);
  // First half stays original, second half is mutated: disjoint methods.
  for (std::size_t r = 0; r < chosen.size(); ++r) {
    const int label = r < per_class ? 0 : 1;
    const std::size_t rank = r % per_class;
    const auto& sample = corpus.samples[chosen[r].index];
    const auto& a = corpus.analysis[chosen[r].index];
    std::string text = a.text;
    if (label == 1) text = mutate(ds.task, a.tokens, sample.id, ds.seed).mutated_text();
    ds.examples.push_back(
        {0, sample.id, split_for(rank, per_class), label, std::move(text), std::nullopt});
    lengths.push_back(chosen[r].token_count);
  }
}

inline void build_ktx(TaskDataset& ds, const AnalyzedCorpus& corpus, std::size_t per_class,
                      std::vector<int>& lengths) {
  constexpr int kMaxPartitionDraws = 64;
  const std::array<std::size_t, 3> need = {per_class * 3 / 5, per_class / 5, per_class / 5};

  // Which taxonomy lexemes each eligible sample contains.
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < corpus.samples.size(); ++i) {
    if (corpus.eligible(i)) eligible.push_back(i);
  }

  for (int attempt = 0; attempt < kMaxPartitionDraws; ++attempt) {
    // Redraw the partition until every (class, split) cell can be filled.
    const std::uint64_t vocab_seed =
        attempt == 0 ? ds.seed : derive_seed(ds.seed, "ktx-redraw:" + std::to_string(attempt));
    const KtxVocabulary vocab = ktx_generalization_split(vocab_seed);
    // cell = class * 3 + split
    std::array<std::vector<Candidate>, kTaxonomyClassCount * 3> cells;
    for (std::size_t idx : eligible) {
      const auto& a = corpus.analysis[idx];
      std::array<bool, kTaxonomyClassCount * 3> hit{};
      for (const Token& t : a.tokens) {
        if (!in_taxonomy(t.cls)) continue;
        const int c = static_cast<int>(t.cls);
        for (int s = 0; s < 3; ++s) {
          const auto& words = vocab[c][s];
          if (std::binary_search(words.begin(), words.end(), t.text)) hit[c * 3 + s] = true;
        }
      }
      for (std::size_t cell = 0; cell < cells.size(); ++cell) {
        if (hit[cell]) {
          cells[cell].push_back({idx, a.metrics.token_count, corpus.samples[idx].id});
        }
      }
    }
    bool feasible = true;
    for (std::size_t cell = 0; cell < cells.size(); ++cell) {
      if (cells[cell].size() < need[cell % 3]) feasible = false;
    }
    if (!feasible && attempt + 1 < kMaxPartitionDraws) continue;

    // Scarcest cells first; each method is used at most once.
    std::vector<std::size_t> order(cells.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return cells[a].size() < cells[b].size();
    });
    std::set<std::size_t> used;
    std::vector<LabeledExample> examples;
    std::vector<int> picked_lengths;
    bool ok = true;
    for (std::size_t cell : order) {
      const int c = static_cast<int>(cell / 3);
      const int s = static_cast<int>(cell % 3);
      std::vector<Candidate> free;
      for (const auto& cand : cells[cell]) {
        if (!used.count(cand.index)) free.push_back(cand);
      }
      if (free.size() < need[s]) {
        if (attempt + 1 < kMaxPartitionDraws) {
          ok = false;
          break;
        }
        throw insufficient(Task::kKTX,
                           ds.label_schema[c] + "/" + std::string(split_name(kAllSplits[s])),
                           free.size(), need[s]);
      }
      Rng rng(derive_seed(ds.seed, "KTX:cell:" + std::to_string(cell)));
      const auto chosen = draw_shortest(std::move(free), need[s], rng);
      for (const auto& cand : chosen) {
        used.insert(cand.index);
        const auto& a = corpus.analysis[cand.index];
        std::vector<std::size_t> positions;
        for (std::size_t p = 0; p < a.tokens.size(); ++p) {
          const auto& words = vocab[c][s];
          if (static_cast<int>(a.tokens[p].cls) == c &&
              std::binary_search(words.begin(), words.end(), a.tokens[p].text)) {
            positions.push_back(p);
          }
        }
        Rng pick(derive_seed(ds.seed, "KTX:target:" + corpus.samples[cand.index].id));
        const std::size_t target = positions[pick.uniform(positions.size())];
        examples.push_back({0, corpus.samples[cand.index].id, kAllSplits[s], c, a.text,
                            target});
        picked_lengths.push_back(cand.token_count);
      }
    }
    if (!ok) continue;
    ds.examples = std::move(examples);
    lengths = std::move(picked_lengths);
    ds.ktx_vocabulary = vocab;
    return;
  }
}

inline void build_idn(TaskDataset& ds, const AnalyzedCorpus& corpus, std::size_t per_class) {
  const auto records = extract_identifiers(corpus, ds.seed);
  std::array<std::vector<Candidate>, 4> by_role;
  for (std::size_t i = 0; i < records.size(); ++i) {
    by_role[static_cast<int>(records[i].role)].push_back(
        {i, static_cast<int>(records[i].text.size()), records[i].text});
  }
  for (int r = 0; r < 4; ++r) {
    if (by_role[r].size() < per_class) {
      throw insufficient(Task::kIDN, ds.label_schema[r], by_role[r].size(), per_class);
    }
    // Identifiers are drawn uniformly; length carries no truncation risk.
    auto cands = std::move(by_role[r]);
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& a, const Candidate& b) { return a.key < b.key; });
    Rng rng(derive_seed(ds.seed, "IDN:class:" + std::to_string(r)));
    rng.shuffle(cands);
    for (std::size_t k = 0; k < per_class; ++k) {
      const auto& rec = records[cands[k].index];
      ds.examples.push_back(
          {0, rec.source, split_for(k, per_class), r, rec.text, std::nullopt});
    }
  }
}

}  // namespace detail

// Builds the dataset for one task. n must be a positive multiple of
// 5 * class_count so every class and split is exactly balanced. Throws
// Error{kInsufficientSamples} naming the starving class.
inline TaskDataset build_dataset(Task task, const AnalyzedCorpus& corpus, int n,
                                 std::uint64_t seed) {
  const int classes = class_count(task);
  if (n <= 0 || n % (5 * classes) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "n=" + std::to_string(n) + " must be a positive multiple of " +
                    std::to_string(5 * classes) + " for " + std::string(task_name(task)));
  }
  TaskDataset ds;
  ds.task = task;
  ds.class_count = classes;
  ds.n = n;
  ds.seed = seed;
  ds.label_schema = label_schema(task);
  ds.corpus_hash = corpus.hash;
  const std::size_t per_class = static_cast<std::size_t>(n / classes);
  std::vector<int> lengths;
  if (task == Task::kIDN) {
    detail::build_idn(ds, corpus, per_class);
  } else if (task == Task::kKTX) {
    detail::build_ktx(ds, corpus, per_class, lengths);
  } else if (is_mutation_task(task)) {
    detail::build_mutation_task(ds, corpus, per_class, lengths);
  } else {
    if (task == Task::kLEN) ds.bin_boundaries = corpus.len_boundaries;
    detail::build_metric_task(ds, corpus, per_class, lengths);
  }
  ds.truncation_rate = detail::truncation_rate(lengths);
  detail::finalize(ds);
  return ds;
}

// ---------------------------------------------------------------------------
// Dataset file: a header line followed by one JSON record per example.

inline nlohmann::ordered_json dataset_header(const TaskDataset& ds) {
  nlohmann::ordered_json h;
  h["type"] = "header";
  h["task"] = std::string(task_name(ds.task));
  h["class_count"] = ds.class_count;
  h["n"] = ds.n;
  h["seed"] = ds.seed;
  h["label_schema"] = ds.label_schema;
  h["bin_boundaries"] = ds.bin_boundaries;
  h["corpus_hash"] = ds.corpus_hash;
  h["truncation_rate"] = ds.truncation_rate;
  if (ds.ktx_vocabulary) {
    nlohmann::ordered_json v;
    for (int c = 0; c < kTaxonomyClassCount; ++c) {
      nlohmann::ordered_json parts;
      for (Split s : kAllSplits) {
        parts[std::string(split_name(s))] = (*ds.ktx_vocabulary)[c][static_cast<int>(s)];
      }
      v[ds.label_schema[c]] = parts;
    }
    h["ktx_vocabulary"] = v;
  }
  return h;
}

inline void write_dataset(std::ostream& out, const TaskDataset& ds) {
  out << dataset_header(ds).dump() << '\n';
  for (const auto& ex : ds.examples) {
    nlohmann::ordered_json j;
    j["id"] = ex.id;
    j["source"] = ex.source;
    j["split"] = std::string(split_name(ex.split));
    j["label"] = ex.label;
    j["text"] = ex.text;
    if (ex.target_token_index) j["target_token_index"] = *ex.target_token_index;
    out << j.dump() << '\n';
  }
}

inline void write_dataset(const std::filesystem::path& path, const TaskDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  write_dataset(out, ds);
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

inline TaskDataset read_dataset(std::istream& in) {
  TaskDataset ds;
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kInvalidArgument, "empty dataset");
  try {
    const auto h = nlohmann::json::parse(line);
    if (h.value("type", "") != "header") {
      throw Error(ErrorCode::kInvalidArgument, "dataset has no header record");
    }
    const auto task = parse_task(h.at("task").get<std::string>());
    if (!task) throw Error(ErrorCode::kInvalidArgument, "unknown task in dataset header");
    ds.task = *task;
    ds.class_count = h.at("class_count").get<int>();
    ds.n = h.at("n").get<int>();
    ds.seed = h.at("seed").get<std::uint64_t>();
    ds.label_schema = h.at("label_schema").get<std::vector<std::string>>();
    ds.bin_boundaries = h.at("bin_boundaries").get<std::vector<int>>();
    ds.corpus_hash = h.at("corpus_hash").get<std::string>();
    ds.truncation_rate = h.at("truncation_rate").get<double>();
    if (h.contains("ktx_vocabulary")) {
      KtxVocabulary v;
      const auto& jv = h.at("ktx_vocabulary");
      for (int c = 0; c < kTaxonomyClassCount; ++c) {
        const auto& parts = jv.at(ds.label_schema[c]);
        for (Split s : kAllSplits) {
          v[c][static_cast<int>(s)] =
              parts.at(std::string(split_name(s))).get<std::vector<std::string>>();
        }
      }
      ds.ktx_vocabulary = std::move(v);
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      LabeledExample ex;
      ex.id = j.at("id").get<std::uint64_t>();
      ex.source = j.at("source").get<std::string>();
      ex.split = parse_split(j.at("split").get<std::string>());
      ex.label = j.at("label").get<int>();
      ex.text = j.at("text").get<std::string>();
      if (j.contains("target_token_index")) {
        ex.target_token_index = j.at("target_token_index").get<std::size_t>();
      }
      ds.examples.push_back(std::move(ex));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("dataset parse error: ") + e.what());
  }
  return ds;
}

inline TaskDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open dataset " + path.string());
  return read_dataset(in);
}

}  // namespace codeprobe
