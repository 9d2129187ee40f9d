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

// Deterministic generator of Java-like methods for tests and demos. Methods
// are sampled from a small grammar and kept by quota so that every metric
// class and every taxonomy lexeme is well represented.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "codeprobe/corpus.hpp"
#include "codeprobe/lexer.hpp"
#include "codeprobe/rng.hpp"
#include "codeprobe/taskgen.hpp"

namespace codeprobe {

namespace synth_detail {

inline constexpr std::array<std::string_view, 48> kNouns = {
    "order",  "item",   "count",  "total",  "index",  "buffer", "value",  "node",
    "entry",  "key",    "price",  "width",  "height", "label",  "path",   "file",
    "line",   "token",  "offset", "length", "limit",  "score",  "weight", "rate",
    "size",   "page",   "user",   "account", "event", "queue",  "stack",  "cache",
    "frame",  "pixel",  "vector", "matrix", "signal", "packet", "ledger", "cursor",
    "budget", "margin", "sample", "batch",  "window", "column", "field",  "region"};
inline constexpr std::array<std::string_view, 20> kAdjectives = {
    "max",  "min",   "next",  "prev",   "last",   "first",  "temp",  "local",
    "base", "raw",   "old",   "current", "pending", "spare", "inner", "outer",
    "left", "right", "upper", "lower"};
inline constexpr std::array<std::string_view, 26> kVerbs = {
    "compute", "load",    "parse",   "build",   "update",  "check",  "render",
    "merge",   "split",   "encode",  "decode",  "apply",   "reset",  "flush",
    "scan",    "sort",    "filter",  "resolve", "validate", "emit",  "collect",
    "handle",  "dispatch", "convert", "format", "publish"};
inline constexpr std::array<std::string_view, 12> kClassSuffixes = {
    "Builder", "Manager", "Parser",  "Handler", "Factory", "Service",
    "Store",   "Reader",  "Writer",  "Visitor", "Adapter", "Registry"};
inline constexpr std::array<std::string_view, 16> kOrgs = {
    "acme",    "globex", "initech", "umbrella", "hooli",  "vandelay", "wonka",  "stark",
    "wayne",   "tyrell", "cyberdyne", "soylent", "gringotts", "oscorp", "monarch", "aperture"};
inline constexpr std::array<std::string_view, 3> kTlds = {"com", "org", "net"};
inline constexpr std::array<std::string_view, 4> kExceptions = {
    "IOException", "IllegalStateException", "IllegalArgumentException",
    "InterruptedException"};
inline constexpr std::array<std::string_view, 8> kLocalPrimitives = {
    "int", "long", "short", "byte", "char", "float", "double", "boolean"};

inline std::string capitalize(std::string_view s) {
  std::string out(s);
  if (!out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

template <typename Array>
std::string_view pick(Rng& rng, const Array& a) {
  return a[rng.uniform(a.size())];
}

struct Pools {
  std::vector<std::string> packages;
  std::vector<std::string> classes;
};

inline Pools make_pools(Rng& rng) {
  Pools p;
  std::set<std::string> seen;
  while (p.packages.size() < 600) {
    std::string pkg = std::string(pick(rng, kTlds)) + "." + std::string(pick(rng, kOrgs)) + "." +
                      std::string(pick(rng, kNouns));
    if (rng.uniform(2)) pkg += "." + std::string(pick(rng, kNouns));
    if (seen.insert(pkg).second) p.packages.push_back(pkg);
  }
  seen.clear();
  while (p.classes.size() < 600) {
    std::string cls = capitalize(pick(rng, kNouns)) + std::string(pick(rng, kClassSuffixes));
    if (rng.uniform(3) == 0) cls = capitalize(pick(rng, kAdjectives)) + cls;
    if (seen.insert(cls).second) p.classes.push_back(cls);
  }
  return p;
}

// Operators the expression grammar can use.
inline const std::vector<std::string>& operator_pool() {
  static const std::vector<std::string> pool = {
      "+",  "-",  "*",  "/",  "%",   "++",  "--",  "=",   "+=", "-=", "*=", "/=",
      "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=", "==", "!=", "<",  ">",  "<=",
      ">=", "&&", "||", "!",  "&",   "|",   "^",   "~",   "<<", ">>", ">>>"};
  return pool;
}

enum class Shape { kIf, kIfElse, kElseIf, kFor, kForEach, kWhile, kDo, kSwitch, kTry };

struct ShapeNode {
  Shape shape = Shape::kIf;
  int level = 1;
  std::vector<std::vector<ShapeNode>> bodies;
};

inline int shape_cost(Shape s) { return s == Shape::kElseIf ? 2 : 1; }

inline std::size_t body_count(Shape s, Rng& rng) {
  switch (s) {
    case Shape::kIfElse:
    case Shape::kElseIf: return 2 + rng.uniform(2);  // optional trailing else
    case Shape::kSwitch: return 2 + rng.uniform(2);
    case Shape::kTry: return 2 + rng.uniform(2);      // try, catch, [finally]
    default: return 1;
  }
}

class MethodWriter {
 public:
  MethodWriter(Rng& rng, const Pools& pools, std::string_view forced)
      : rng_(rng), pools_(pools), forced_(forced) {}

  MethodSample write(const std::string& id) {
    choose_knobs();
    MethodSample m;
    m.id = id;
    const std::size_t imports = rng_.uniform(5);
    for (std::size_t k = 0; k < imports; ++k) {
      const auto& pkg = pools_.packages[rng_.uniform(pools_.packages.size())];
      if (rng_.uniform(6) == 0) {
        m.imports.push_back("import static " + pkg + "." + pick_class() + "." +
                            std::string(pick(rng_, kVerbs)) + capitalize(pick(rng_, kNouns)) +
                            ";");
      } else {
        m.imports.push_back("import " + pkg + "." + pick_class() + ";");
      }
    }
    header();
    indent_ = 1;
    declarations();
    sprinkles();
    const auto tree = build_shapes();
    emit_bodies(tree);
    if (rng_.uniform(3) == 0 || tree.empty()) simple_statement();
    if (return_type_ != "void") line("return " + expr() + ";");
    out_ += "}";
    m.source = std::move(out_);
    return m;
  }

 private:
  bool want(std::string_view lexeme) const { return forced_ == lexeme; }
  bool has(std::string_view op) const {
    return std::find(ops_.begin(), ops_.end(), op) != ops_.end();
  }
  std::string pick_class() { return pools_.classes[rng_.uniform(pools_.classes.size())]; }

  std::string fresh_var() {
    for (;;) {
      std::string v = rng_.uniform(3) == 0
                          ? std::string(pick(rng_, kNouns))
                          : std::string(pick(rng_, kAdjectives)) + capitalize(pick(rng_, kNouns));
      if (rng_.uniform(4) == 0) v += std::to_string(rng_.uniform(10));
      if (std::find(vars_.begin(), vars_.end(), v) == vars_.end() &&
          std::find(used_names_.begin(), used_names_.end(), v) == used_names_.end()) {
        used_names_.push_back(v);
        return v;
      }
    }
  }

  std::string method_name() {
    std::string s = std::string(pick(rng_, kVerbs)) + capitalize(pick(rng_, kNouns));
    if (rng_.uniform(2)) s += capitalize(pick(rng_, kNouns));
    return s;
  }

  void choose_knobs() {
    structures_ = static_cast<int>(rng_.uniform(10));
    depth_ = structures_ == 0 ? 0 : 1 + static_cast<int>(rng_.uniform(std::min(structures_, 4)));
    const std::size_t op_count = rng_.uniform(10);
    std::vector<std::string> pool = operator_pool();
    rng_.shuffle(pool);
    ops_.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(op_count));
    if (!forced_.empty() && taxonomy::punctuator_class(forced_) &&
        taxonomy::punctuator_class(forced_) != TokenClass::kSymbol && !has(forced_)) {
      ops_.push_back(std::string(forced_));
    }
    var_target_ = static_cast<int>(rng_.uniform(10));
    ternaries_ = rng_.uniform(4) == 0 ? 1 + static_cast<int>(rng_.uniform(2)) : 0;
    if (want("?") && ternaries_ == 0) ternaries_ = 1;
  }

  void line(const std::string& s) {
    out_.append(static_cast<std::size_t>(indent_) * 2, ' ');
    out_ += s;
    out_ += '\n';
  }

  std::string var() {
    if (vars_.empty()) return std::to_string(1 + rng_.uniform(9));
    return vars_[rng_.uniform(vars_.size())];
  }

  std::string call() {
    std::string c = method_name() + "(";
    if (!vars_.empty() && rng_.uniform(2)) c += var();
    return c + ")";
  }

  std::string atom() {
    switch (rng_.uniform(4)) {
      case 0: return std::to_string(rng_.uniform(100));
      case 1: return call();
      default: return var();
    }
  }

  std::string expr() {
    static const std::vector<std::string> binary = {"+", "-", "*", "/", "%", "&", "|", "^",
                                                    "<<", ">>", ">>>"};
    std::vector<std::string> usable;
    for (const auto& op : binary) {
      if (has(op)) usable.push_back(op);
    }
    std::string e = atom();
    if (has("~") && rng_.uniform(3) == 0) e = "~" + e;
    if (!usable.empty() && rng_.uniform(4) != 0) {
      e += " " + usable[rng_.uniform(usable.size())] + " " + atom();
    }
    if (ternaries_ > 0 && rng_.uniform(3) == 0) {
      --ternaries_;
      e = cond() + " ? " + e + " : " + atom();
    }
    return e;
  }

  std::string cond_atom() {
    static const std::vector<std::string> rel = {"==", "!=", "<", ">", "<=", ">="};
    std::vector<std::string> usable;
    for (const auto& op : rel) {
      if (has(op)) usable.push_back(op);
    }
    std::string c;
    if (!usable.empty() && rng_.uniform(4) != 0) {
      c = atom() + " " + usable[rng_.uniform(usable.size())] + " " + atom();
    } else {
      c = std::string(rng_.uniform(2) ? "has" : "can") + capitalize(pick(rng_, kNouns)) + "(" +
          (vars_.empty() || rng_.uniform(2) ? "" : var()) + ")";
    }
    if (has("!") && rng_.uniform(3) == 0) c = "!(" + c + ")";
    return c;
  }

  std::string cond() {
    std::string c = cond_atom();
    const int joins = static_cast<int>(rng_.uniform(3));
    for (int k = 0; k < joins; ++k) {
      std::vector<std::string> logical;
      if (has("&&")) logical.push_back("&&");
      if (has("||")) logical.push_back("||");
      if (logical.empty()) break;
      c += " " + logical[rng_.uniform(logical.size())] + " " + cond_atom();
    }
    return c;
  }

  void header() {
    if (rng_.uniform(5) == 0 || want("@")) line_raw("@Override\n");
    std::string h;
    static constexpr std::array<std::string_view, 4> kAccess = {"public", "private",
                                                                "protected", ""};
    std::string access(pick(rng_, kAccess));
    for (std::string_view a : {"public", "private", "protected"}) {
      if (want(a)) access = std::string(a);
    }
    if (!access.empty()) h += access + " ";
    if (rng_.uniform(3) == 0 || want("static")) h += "static ";
    if (rng_.uniform(6) == 0 || want("final")) h += "final ";
    if (rng_.uniform(8) == 0 || want("synchronized")) h += "synchronized ";
    if (rng_.uniform(12) == 0 || want("strictfp")) h += "strictfp ";
    switch (rng_.uniform(4)) {
      case 0: return_type_ = "void"; break;
      case 1: return_type_ = pick_class(); break;
      default: return_type_ = std::string(pick(rng_, kLocalPrimitives)); break;
    }
    if (want("void")) return_type_ = "void";
    if (taxonomy::contains(taxonomy::kPrimitiveTypes, forced_)) {
      return_type_ = std::string(forced_);
    }
    h += return_type_ + " " + method_name() + "(";
    const int params = var_target_ == 0 ? 0 : static_cast<int>(rng_.uniform(3));
    for (int k = 0; k < params; ++k) {
      if (k) h += ", ";
      const std::string v = fresh_var();
      vars_.push_back(v);
      h += (rng_.uniform(3) ? std::string(pick(rng_, kLocalPrimitives)) : pick_class()) + " " + v;
    }
    if ((rng_.uniform(10) == 0 && var_target_ > 0) || want("...")) {
      const std::string v = fresh_var();
      vars_.push_back(v);
      h += std::string(params ? ", " : "") + "int... " + v;
    }
    h += ")";
    if (rng_.uniform(5) == 0 || want("throws")) {
      h += " throws " + std::string(pick(rng_, kExceptions));
    }
    line_raw(h + " {\n");
  }

  void line_raw(const std::string& s) { out_ += s; }

  void declarations() {
    while (static_cast<int>(vars_.size()) < var_target_) {
      const std::string v = fresh_var();
      std::string type = rng_.uniform(4) ? std::string(pick(rng_, kLocalPrimitives)) : pick_class();
      std::string decl = type + " " + v;
      if (rng_.uniform(8) == 0 || want("final")) decl = "final " + decl;
      if (has("=")) {
        if (type[0] >= 'A' && type[0] <= 'Z' && rng_.uniform(2)) {
          decl += " = new " + type + "(" + (vars_.empty() ? "" : var()) + ")";
        } else {
          decl += " = " + expr();
        }
      }
      vars_.push_back(v);
      line(decl + ";");
    }
  }

  void sprinkles() {
    if (want("[") || want("]") || rng_.uniform(8) == 0) {
      const std::string v = fresh_var();
      line("int[] " + v + " = new int[" + std::to_string(2 + rng_.uniform(8)) + "];");
      vars_.push_back(v);
    }
    if (rng_.uniform(3) == 0) {
      line(method_name() + "(new " + pick_class() + "());");
    }
    if (want("::") || rng_.uniform(10) == 0) {
      line(method_name() + "(String::valueOf);");
    }
    if (want("->") || rng_.uniform(10) == 0) {
      line(method_name() + "(() -> " + call() + ");");
    }
    if (want("assert") || rng_.uniform(12) == 0) {
      line("assert " + cond() + ";");
    }
    if (want("throw") || rng_.uniform(12) == 0) {
      // A guarded throw would add a structure; an unconditional one sits in
      // a local helper class so the method body stays reachable.
      line("class " + pick_class() + "Guard {");
      ++indent_;
      line("void fail() { throw new " + std::string(pick(rng_, kExceptions)) + "(); }");
      --indent_;
      line("}");
    }
    const bool local_modifiers = want("volatile") || want("transient") || want("native") ||
                                 want("abstract") || rng_.uniform(14) == 0;
    if (local_modifiers) {
      const bool abstract_kind = want("abstract") || rng_.uniform(3) == 0;
      line(std::string(abstract_kind ? "abstract " : "") + "class " + pick_class() + "Holder {");
      ++indent_;
      if (want("volatile") || rng_.uniform(2)) line("volatile int " + fresh_var() + ";");
      if (want("transient") || rng_.uniform(2)) line("transient long " + fresh_var() + ";");
      if (want("native") || rng_.uniform(3) == 0) line("native void " + method_name() + "();");
      if (abstract_kind) line("abstract void " + method_name() + "();");
      --indent_;
      line("}");
    }
    if (want("char") && return_type_ != "char") {
      const std::string v = fresh_var();
      line("char " + v + (has("=") ? " = 'x'" : "") + ";");
      vars_.push_back(v);
    }
  }

  // Random structure forest with exactly `structures_` structures and
  // nesting depth `depth_`.
  std::vector<ShapeNode> build_shapes() {
    std::vector<ShapeNode> root;
    if (structures_ == 0) return root;
    static constexpr std::array<Shape, 9> kAll = {
        Shape::kIf,     Shape::kIfElse, Shape::kElseIf, Shape::kFor,  Shape::kForEach,
        Shape::kWhile,  Shape::kDo,     Shape::kSwitch, Shape::kTry};
    auto draw = [&](int budget) {
      for (;;) {
        Shape s = kAll[rng_.uniform(kAll.size())];
        if (want("try") || want("catch") || want("finally")) {
          if (!forced_used_) s = Shape::kTry;
        } else if ((want("switch") || want("case") || want("default")) && !forced_used_) {
          s = Shape::kSwitch;
        } else if (want("do") && !forced_used_) {
          s = Shape::kDo;
        } else if ((want("else")) && !forced_used_) {
          s = Shape::kIfElse;
        } else if ((want("break") || want("continue") || want("for")) && !forced_used_) {
          s = Shape::kFor;
        } else if (want("while") && !forced_used_) {
          s = Shape::kWhile;
        }
        forced_used_ = true;
        if (shape_cost(s) <= budget) return s;
      }
    };
    int remaining = structures_;
    // Chain of depth_ nested structures.
    std::vector<ShapeNode>* container = &root;
    for (int level = 1; level <= depth_; ++level) {
      ShapeNode n;
      n.shape = draw(remaining - (depth_ - level));
      n.level = level;
      remaining -= shape_cost(n.shape);
      const std::size_t bodies = body_count(n.shape, rng_);
      n.bodies.resize(bodies);
      container->push_back(std::move(n));
      auto& parent = container->back();
      container = &parent.bodies[rng_.uniform(parent.bodies.size())];
    }
    // Remaining structures attach anywhere that keeps the depth bound.
    while (remaining > 0) {
      std::vector<std::pair<std::vector<ShapeNode>*, int>> slots = {{&root, 1}};
      collect_slots(root, slots);
      auto [slot, level] = slots[rng_.uniform(slots.size())];
      ShapeNode n;
      n.shape = draw(remaining);
      n.level = level;
      remaining -= shape_cost(n.shape);
      n.bodies.resize(body_count(n.shape, rng_));
      slot->push_back(std::move(n));
    }
    return root;
  }

  void collect_slots(std::vector<ShapeNode>& nodes,
                     std::vector<std::pair<std::vector<ShapeNode>*, int>>& slots) {
    for (auto& n : nodes) {
      if (n.level >= depth_) continue;
      for (auto& b : n.bodies) {
        slots.push_back({&b, n.level + 1});
        collect_slots(b, slots);
      }
    }
  }

  void simple_statement() {
    std::vector<int> kinds = {0};
    if (!vars_.empty() && has("=")) kinds.push_back(1);
    std::vector<std::string> compound;
    for (const auto& op : ops_) {
      if (op.size() >= 2 && op.back() == '=' && op != "==" && op != "!=" && op != "<=" &&
          op != ">=") {
        compound.push_back(op);
      }
    }
    if (!vars_.empty() && !compound.empty()) kinds.push_back(2);
    if (!vars_.empty() && (has("++") || has("--"))) kinds.push_back(3);
    switch (kinds[rng_.uniform(kinds.size())]) {
      case 0: line(call() + ";"); break;
      case 1: line(var() + " = " + expr() + ";"); break;
      case 2: line(var() + " " + compound[rng_.uniform(compound.size())] + " " + expr() + ";"); break;
      default: line(var() + (has("++") ? "++" : "--") + ";"); break;
    }
  }

  void statements(const std::vector<ShapeNode>& body, bool in_loop) {
    if (body.empty() || rng_.uniform(3) == 0) simple_statement();
    for (const auto& n : body) {
      emit(n);
      if (rng_.uniform(3) == 0) simple_statement();
    }
    if (in_loop && (want("break") || want("continue") || rng_.uniform(6) == 0)) {
      line(want("continue") || (!want("break") && rng_.uniform(2)) ? "continue;" : "break;");
    }
  }

  void block(const std::vector<ShapeNode>& body, bool in_loop) {
    ++indent_;
    statements(body, in_loop);
    --indent_;
  }

  void emit_bodies(const std::vector<ShapeNode>& root) {
    for (const auto& n : root) {
      emit(n);
      if (rng_.uniform(2) == 0) simple_statement();
    }
  }

  void emit(const ShapeNode& n) {
    switch (n.shape) {
      case Shape::kIf:
        line("if (" + cond() + ") {");
        block(n.bodies[0], false);
        line("}");
        break;
      case Shape::kIfElse:
        line("if (" + cond() + ") {");
        block(n.bodies[0], false);
        line("} else {");
        block(n.bodies[1], false);
        line("}");
        break;
      case Shape::kElseIf:
        line("if (" + cond() + ") {");
        block(n.bodies[0], false);
        line("} else if (" + cond() + ") {");
        block(n.bodies[1], false);
        if (n.bodies.size() > 2) {
          line("} else {");
          block(n.bodies[2], false);
        }
        line("}");
        break;
      case Shape::kFor: {
        if (!vars_.empty() && has("=") && has("<") && has("++")) {
          line("for (int i = 0; i < " + var() + "; i++) {");
        } else {
          line("for (" + pick_class() + " " + fresh_loop_var() + " : " + call() + ") {");
        }
        block(n.bodies[0], true);
        line("}");
        break;
      }
      case Shape::kForEach:
        line("for (" + pick_class() + " " + fresh_loop_var() + " : " + call() + ") {");
        block(n.bodies[0], true);
        line("}");
        break;
      case Shape::kWhile:
        line("while (" + cond() + ") {");
        block(n.bodies[0], true);
        line("}");
        break;
      case Shape::kDo:
        line("do {");
        block(n.bodies[0], true);
        line("} while (" + cond() + ");");
        break;
      case Shape::kSwitch: {
        line("switch (" + (vars_.empty() ? call() : var()) + ") {");
        ++indent_;
        const bool with_default = n.bodies.size() > 2 || want("default");
        const std::size_t cases = with_default ? n.bodies.size() - 1 : n.bodies.size();
        for (std::size_t k = 0; k < n.bodies.size(); ++k) {
          line(k < cases ? "case " + std::to_string(k + 1) + ":" : "default:");
          block(n.bodies[k], false);
          ++indent_;
          line("break;");
          --indent_;
        }
        --indent_;
        line("}");
        break;
      }
      case Shape::kTry:
        line("try {");
        block(n.bodies[0], false);
        line("} catch (" + std::string(pick(rng_, kExceptions)) + " " + fresh_loop_var() + ") {");
        block(n.bodies[1], false);
        if (n.bodies.size() > 2 || want("finally")) {
          line("} finally {");
          block(n.bodies.size() > 2 ? n.bodies[2] : std::vector<ShapeNode>{}, false);
        }
        line("}");
        break;
    }
  }

  // Scoped to its loop or catch clause, so not reused afterwards.
  std::string fresh_loop_var() { return fresh_var(); }

  Rng& rng_;
  const Pools& pools_;
  std::string_view forced_;
  bool forced_used_ = false;
  std::string out_;
  int indent_ = 0;
  int structures_ = 0;
  int depth_ = 0;
  int var_target_ = 0;
  int ternaries_ = 0;
  std::vector<std::string> ops_;
  std::vector<std::string> vars_;
  std::vector<std::string> used_names_;
  std::string return_type_ = "void";
};

// Quota bookkeeping over metric classes and taxonomy lexemes.
struct Quotas {
  static constexpr std::array<Task, 6> kMetricTasks = {Task::kOCU, Task::kVCU, Task::kCSC,
                                                       Task::kMXN, Task::kCPX, Task::kNPT};
  std::map<std::pair<Task, int>, std::size_t> metric;
  std::map<std::string, std::size_t> lexeme;
  std::size_t metric_target = 0;
  std::size_t lexeme_target = 0;

  std::vector<std::string> missing_lexemes() const {
    std::vector<std::string> out;
    for (int c = 0; c < kTaxonomyClassCount; ++c) {
      for (auto w : taxonomy::members(static_cast<TokenClass>(c))) {
        auto it = lexeme.find(std::string(w));
        if (it == lexeme.end() || it->second < lexeme_target) out.emplace_back(w);
      }
    }
    return out;
  }

  // True when the sample adds to a quota that is not yet met; counts it.
  bool offer(const AnalyzedSample& a, bool commit) {
    bool useful = false;
    const LabelContext ctx{};
    std::vector<std::pair<Task, int>> labels;
    for (Task t : kMetricTasks) {
      const auto label = label_analyzed(t, a, ctx);
      if (!label) continue;
      const std::size_t target = t == Task::kMXN ? 2 * metric_target : metric_target;
      if (metric[{t, *label}] < target) useful = true;
      labels.push_back({t, *label});
    }
    std::set<std::string> lexemes;
    for (const Token& tok : a.tokens) {
      if (in_taxonomy(tok.cls)) lexemes.insert(tok.text);
    }
    for (const auto& w : lexemes) {
      if (lexeme[w] < lexeme_target) useful = true;
    }
    if (commit || useful) {
      for (const auto& l : labels) ++metric[l];
      for (const auto& w : lexemes) ++lexeme[w];
    }
    return useful;
  }
};

}  // namespace synth_detail

// Generates `count` methods. Every returned method lexes, parses, stays
// under the model token limit and is not an accessor.
inline std::vector<MethodSample> generate_corpus(std::size_t count, std::uint64_t seed) {
  using namespace synth_detail;
  Rng rng(derive_seed(seed, "synth"));
  const Pools pools = make_pools(rng);
  Quotas quotas;
  quotas.metric_target = std::max<std::size_t>(1, count * 3 / 100);
  quotas.lexeme_target = std::max<std::size_t>(1, count / 80);

  std::vector<MethodSample> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    ++attempts;
    std::string forced;
    if (rng.uniform(2) == 0) {
      const auto missing = quotas.missing_lexemes();
      if (!missing.empty()) forced = missing[rng.uniform(missing.size())];
    }
    MethodWriter writer(rng, pools, forced);
    MethodSample m = writer.write("synth:" + std::to_string(out.size()));
    const AnalyzedSample a = analyze_sample(m);
    if (!a.lexable || !a.parsed || a.trivial || a.metrics.token_count > 400) continue;
    // Once quotas are met everything is accepted; before that, samples that
    // help no quota are accepted only occasionally.
    const bool useful = quotas.offer(a, false);
    const bool late = attempts > 40 * count;
    if (useful || late || rng.uniform(8) == 0) {
      if (!useful) quotas.offer(a, true);
      out.push_back(std::move(m));
    }
  }
  return out;
}

}  // namespace codeprobe
