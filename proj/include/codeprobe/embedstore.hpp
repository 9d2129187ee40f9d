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

// Binary container for frozen per-layer representations. All integers and
// floats are little-endian regardless of host; see docs/embedstore_format.md.
//
//   offset  size  field
//   0       4     magic "INSP"
//   4       4     u32 format version (1)
//   8       4     u32 first stored layer (1: the input embedding is excluded)
//   12      4+m   u32 byte length m, model id (UTF-8)
//   ..      4+t   u32 byte length t, task id (UTF-8)
//   ..      4     u32 layer count L
//   ..      4     u32 hidden size D
//   ..      8     u64 sample count n
//   then n records of: u64 sample id, L*D f32, layer-major.

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "codeprobe/error.hpp"

namespace codeprobe {

inline constexpr char kEmbedMagic[4] = {'I', 'N', 'S', 'P'};
inline constexpr std::uint32_t kEmbedVersion = 1;
inline constexpr std::uint32_t kFirstStoredLayer = 1;

struct EmbeddingSet {
  std::string model_id;
  std::string task_id;
  std::uint32_t layer_count = 0;
  std::uint32_t hidden_dim = 0;
  std::vector<std::uint64_t> sample_ids;
  // sample-major, then layer, then dimension: size n * L * D.
  std::vector<float> values;

  std::size_t sample_count() const { return sample_ids.size(); }

  std::span<const float> vector(std::size_t sample, std::size_t layer) const {
    return std::span<const float>(values).subspan(
        (sample * layer_count + layer) * hidden_dim, hidden_dim);
  }
  std::span<float> vector(std::size_t sample, std::size_t layer) {
    return std::span<float>(values).subspan((sample * layer_count + layer) * hidden_dim,
                                            hidden_dim);
  }
};

// Row-major n x D slice of one layer.
struct LayerMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  std::span<const float> row(std::size_t i) const {
    return std::span<const float>(data).subspan(i * cols, cols);
  }
};

namespace embedstore_detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}
inline std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}
inline float get_f32(const unsigned char* p) { return std::bit_cast<float>(get_u32(p)); }

}  // namespace embedstore_detail

struct EmbedHeader {
  std::uint32_t version = kEmbedVersion;
  std::uint32_t first_layer = kFirstStoredLayer;
  std::string model_id;
  std::string task_id;
  std::uint32_t layer_count = 0;
  std::uint32_t hidden_dim = 0;
  std::uint64_t sample_count = 0;
  // Byte offset of the first record.
  std::uint64_t data_offset = 0;

  std::uint64_t record_size() const {
    return 8 + static_cast<std::uint64_t>(layer_count) * hidden_dim * 4;
  }
};

inline std::string encode_header(const EmbeddingSet& set) {
  using namespace embedstore_detail;
  std::string out(kEmbedMagic, 4);
  put_u32(out, kEmbedVersion);
  put_u32(out, kFirstStoredLayer);
  put_u32(out, static_cast<std::uint32_t>(set.model_id.size()));
  out += set.model_id;
  put_u32(out, static_cast<std::uint32_t>(set.task_id.size()));
  out += set.task_id;
  put_u32(out, set.layer_count);
  put_u32(out, set.hidden_dim);
  put_u64(out, set.sample_ids.size());
  return out;
}

// Writes to a temporary sibling and renames it into place. Rejects sets
// whose shape is inconsistent or that contain NaN or infinity.
inline void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  using namespace embedstore_detail;
  if (set.layer_count == 0 || set.hidden_dim == 0) {
    throw Error(ErrorCode::kInvalidArgument, "layer count and hidden size must be positive");
  }
  const std::size_t per_sample = static_cast<std::size_t>(set.layer_count) * set.hidden_dim;
  if (set.values.size() != set.sample_ids.size() * per_sample) {
    throw Error(ErrorCode::kShapeMismatch, "values do not match n * L * D");
  }
  for (std::size_t i = 0; i < set.values.size(); ++i) {
    if (!std::isfinite(set.values[i])) {
      throw Error(ErrorCode::kNonFiniteValue,
                  "non-finite value for sample " +
                      std::to_string(set.sample_ids[i / per_sample]));
    }
  }
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoFailure, "cannot write " + tmp.string());
    const std::string header = encode_header(set);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::string record;
    record.reserve(8 + per_sample * 4);
    for (std::size_t s = 0; s < set.sample_ids.size(); ++s) {
      record.clear();
      put_u64(record, set.sample_ids[s]);
      for (std::size_t k = 0; k < per_sample; ++k) {
        put_u32(record, std::bit_cast<std::uint32_t>(set.values[s * per_sample + k]));
      }
      out.write(record.data(), static_cast<std::streamsize>(record.size()));
    }
    out.flush();
    if (!out) throw Error(ErrorCode::kIoFailure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIoFailure, "rename failed: " + ec.message());
}

// Streaming reader: parses the header once and materialises individual
// layers or the whole set on demand.
class EmbeddingReader {
 public:
  explicit EmbeddingReader(const std::filesystem::path& path)
      : path_(path), in_(path, std::ios::binary) {
    using namespace embedstore_detail;
    if (!in_) throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
    std::error_code ec;
    file_size_ = std::filesystem::file_size(path, ec);
    if (ec) throw Error(ErrorCode::kIoFailure, "cannot stat " + path.string());

    unsigned char fixed[12];
    read_exact(fixed, sizeof fixed, "header");
    if (std::memcmp(fixed, kEmbedMagic, 4) != 0) {
      throw Error(ErrorCode::kBadMagic, path.string() + " is not an embedding store");
    }
    header_.version = get_u32(fixed + 4);
    if (header_.version != kEmbedVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "format version " + std::to_string(header_.version) + ", expected " +
                      std::to_string(kEmbedVersion));
    }
    header_.first_layer = get_u32(fixed + 8);
    header_.model_id = read_string("model id");
    header_.task_id = read_string("task id");
    unsigned char dims[16];
    read_exact(dims, sizeof dims, "dimensions");
    header_.layer_count = get_u32(dims);
    header_.hidden_dim = get_u32(dims + 4);
    header_.sample_count = get_u64(dims + 8);
    header_.data_offset = static_cast<std::uint64_t>(in_.tellg());

    const std::uint64_t need = header_.data_offset + header_.sample_count * header_.record_size();
    if (file_size_ < need) {
      throw Error(ErrorCode::kTruncatedFile, path.string() + ": " +
                                                 std::to_string(file_size_) + " bytes, " +
                                                 std::to_string(need) + " expected");
    }
    ids_.resize(header_.sample_count);
    unsigned char buf[8];
    for (std::uint64_t i = 0; i < header_.sample_count; ++i) {
      seek(header_.data_offset + i * header_.record_size());
      read_exact(buf, 8, "sample id");
      ids_[i] = get_u64(buf);
    }
  }

  const EmbedHeader& header() const { return header_; }
  const std::vector<std::uint64_t>& sample_ids() const { return ids_; }

  // Zero-based layer index into the stored layers.
  LayerMatrix read_layer(std::size_t layer) {
    if (layer >= header_.layer_count) {
      throw Error(ErrorCode::kInvalidArgument, "layer " + std::to_string(layer) +
                                                   " out of range");
    }
    LayerMatrix m;
    m.rows = header_.sample_count;
    m.cols = header_.hidden_dim;
    m.data.resize(m.rows * m.cols);
    std::vector<unsigned char> buf(m.cols * 4);
    for (std::size_t i = 0; i < m.rows; ++i) {
      seek(header_.data_offset + i * header_.record_size() + 8 +
           static_cast<std::uint64_t>(layer) * m.cols * 4);
      read_exact(buf.data(), buf.size(), "vector");
      for (std::size_t d = 0; d < m.cols; ++d) {
        m.data[i * m.cols + d] = embedstore_detail::get_f32(buf.data() + 4 * d);
      }
    }
    return m;
  }

  EmbeddingSet read_all() {
    EmbeddingSet set;
    set.model_id = header_.model_id;
    set.task_id = header_.task_id;
    set.layer_count = header_.layer_count;
    set.hidden_dim = header_.hidden_dim;
    set.sample_ids = ids_;
    const std::size_t per_sample =
        static_cast<std::size_t>(header_.layer_count) * header_.hidden_dim;
    set.values.resize(ids_.size() * per_sample);
    std::vector<unsigned char> buf(per_sample * 4);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
      seek(header_.data_offset + i * header_.record_size() + 8);
      read_exact(buf.data(), buf.size(), "record");
      for (std::size_t k = 0; k < per_sample; ++k) {
        set.values[i * per_sample + k] = embedstore_detail::get_f32(buf.data() + 4 * k);
      }
    }
    return set;
  }

 private:
  void seek(std::uint64_t offset) {
    in_.clear();
    in_.seekg(static_cast<std::streamoff>(offset));
  }

  void read_exact(unsigned char* dst, std::size_t n, std::string_view what) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw Error(ErrorCode::kTruncatedFile,
                  path_.string() + ": short read in " + std::string(what));
    }
  }

  std::string read_string(std::string_view what) {
    unsigned char len[4];
    read_exact(len, 4, what);
    const std::uint32_t n = embedstore_detail::get_u32(len);
    if (n > file_size_) throw Error(ErrorCode::kTruncatedFile, "oversized " + std::string(what));
    std::string s(n, '\0');
    read_exact(reinterpret_cast<unsigned char*>(s.data()), n, what);
    return s;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  std::uint64_t file_size_ = 0;
  EmbedHeader header_;
  std::vector<std::uint64_t> ids_;
};

inline EmbeddingSet read_embeddings(const std::filesystem::path& path) {
  return EmbeddingReader(path).read_all();
}

}  // namespace codeprobe
