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

// Method corpus: one JSON object per line, {"id", "method_text", "imports"}.
// Also converts plain .java source trees into that form.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "codeprobe/error.hpp"
#include "codeprobe/lexer.hpp"
#include "codeprobe/rng.hpp"
#include "json.hpp"

namespace codeprobe {

struct MethodSample {
  std::string id;
  std::string source;
  std::vector<std::string> imports;
};

inline MethodSample sample_from_json(const nlohmann::json& j) {
  MethodSample s;
  const auto& id = j.at("id");
  s.id = id.is_string() ? id.get<std::string>() : id.dump();
  s.source = j.at("method_text").get<std::string>();
  if (auto it = j.find("imports"); it != j.end() && it->is_array()) {
    s.imports = it->get<std::vector<std::string>>();
  }
  return s;
}

inline nlohmann::ordered_json sample_to_json(const MethodSample& s) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  j["method_text"] = s.source;
  j["imports"] = s.imports;
  return j;
}

inline std::vector<MethodSample> read_corpus(std::istream& in) {
  std::vector<MethodSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(sample_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  "corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

inline std::vector<MethodSample> read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open corpus " + path.string());
  return read_corpus(in);
}

inline void write_corpus(std::ostream& out, const std::vector<MethodSample>& corpus) {
  for (const auto& s : corpus) out << sample_to_json(s).dump() << '\n';
}

inline void write_corpus(const std::filesystem::path& path,
                         const std::vector<MethodSample>& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  write_corpus(out, corpus);
  if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

// Order-sensitive content hash of the corpus, as 16 hex digits.
inline std::string corpus_hash(const std::vector<MethodSample>& corpus) {
  std::uint64_t h = fnv1a64("");
  for (const auto& s : corpus) {
    h = fnv1a64(s.id, h);
    h = fnv1a64("\x1f", h);
    h = fnv1a64(s.source, h);
    for (const auto& imp : s.imports) {
      h = fnv1a64("\x1f", h);
      h = fnv1a64(imp, h);
    }
    h = fnv1a64("\x1e", h);
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace detail {

inline std::size_t skip_block(const std::vector<Token>& toks, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < toks.size(); ++i) {
    if (toks[i].is("{")) ++depth;
    if (toks[i].is("}") && --depth == 0) return i + 1;
  }
  return toks.size();
}

}  // namespace detail

// Splits one compilation unit into method samples. Methods of nested and
// local classes are included; initializer blocks and fields are skipped.
// Files that do not lex yield no methods.
inline std::vector<MethodSample> extract_methods(std::string_view file_text,
                                                 const std::string& file_id) {
  std::vector<Token> toks;
  try {
    toks = tokenize(file_text);
  } catch (const Error&) {
    return {};
  }
  std::vector<std::string> imports;
  std::vector<MethodSample> methods;

  // Scope stack: true for class bodies.
  std::vector<bool> scopes;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (scopes.empty() && toks[i].is("import")) {
      std::size_t j = i;
      while (j < toks.size() && !toks[j].is(";")) ++j;
      if (j < toks.size()) {
        imports.emplace_back(file_text.substr(toks[i].span.begin,
                                              toks[j].span.end - toks[i].span.begin));
      }
      i = j + 1;
      continue;
    }
    if (toks[i].is("}")) {
      if (!scopes.empty()) scopes.pop_back();
      ++i;
      continue;
    }
    const bool in_class = !scopes.empty() && scopes.back();
    // Scan one member / top-level header up to '{', ';' or '='.
    const std::size_t start = i;
    int parens = 0;
    bool has_params = false;
    bool type_decl = false;
    bool initializer = false;
    std::size_t j = i;
    for (; j < toks.size(); ++j) {
      const Token& t = toks[j];
      if (t.is("(")) ++parens;
      if (t.is(")") && --parens == 0) has_params = true;
      if (parens > 0) continue;
      if (t.is("class") || t.is("interface") || t.is("enum")) type_decl = true;
      if (t.is("record") && j + 2 < toks.size() &&
          toks[j + 1].kind == TokenKind::kIdentifier) {
        type_decl = true;
      }
      if (t.is("=")) initializer = true;
      if (t.is("{") || t.is(";") || t.is("}")) break;
    }
    if (j >= toks.size()) break;
    if (toks[j].is("}")) {
      i = j;
      continue;
    }
    if (toks[j].is(";")) {
      i = j + 1;
      continue;
    }
    // toks[j] is '{'
    if (type_decl && !initializer) {
      scopes.push_back(true);
      i = j + 1;
      continue;
    }
    if (in_class && has_params && !initializer) {
      const std::size_t end = detail::skip_block(toks, j);
      const std::size_t b = toks[start].span.begin;
      const std::size_t e = toks[end - 1].span.end;
      MethodSample m;
      m.id = file_id + ":" + std::to_string(b);
      m.source = std::string(file_text.substr(b, e - b));
      m.imports = imports;
      methods.push_back(std::move(m));
      i = end;
      continue;
    }
    if (initializer) {
      // Field initialiser with an embedded block: skip to the ';'.
      std::size_t k = j;
      int depth = 0;
      for (; k < toks.size(); ++k) {
        if (toks[k].is("{")) ++depth;
        if (toks[k].is("}")) --depth;
        if (depth == 0 && toks[k].is(";")) break;
      }
      i = k + 1;
      continue;
    }
    // Initializer block or something we do not model.
    i = detail::skip_block(toks, j);
  }
  return methods;
}

// Walks a directory for *.java files in sorted path order.
inline std::vector<MethodSample> convert_java_tree(const std::filesystem::path& root) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().extension() == ".java") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<MethodSample> out;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    auto methods = extract_methods(buf.str(), fs::relative(f, root).generic_string());
    out.insert(out.end(), std::make_move_iterator(methods.begin()),
               std::make_move_iterator(methods.end()));
  }
  return out;
}

}  // namespace codeprobe
