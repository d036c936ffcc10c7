// Copyright 2026 The Semhash Authors.
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

#include "semhash/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "semhash/errors.hpp"

namespace semhash::io {
namespace {

constexpr std::uint16_t kFormatVersion = 1;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw DataError(path + ": " + why);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open: " + path);
  return in;
}

void put_bytes(std::ostream& out, const void* p, std::size_t n) {
  out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void get_bytes(std::istream& in, void* p, std::size_t n, const std::string& path) {
  in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) fail(path, "truncated file");
}

void put_u16(std::ostream& out, std::uint16_t v) {
  const unsigned char b[2] = {static_cast<unsigned char>(v),
                              static_cast<unsigned char>(v >> 8)};
  put_bytes(out, b, 2);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  put_bytes(out, b, 8);
}

void put_f32(std::ostream& out, double v) {
  const float f = static_cast<float>(v);
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(out, bits);
}

std::uint16_t get_u16(std::istream& in, const std::string& path) {
  unsigned char b[2];
  get_bytes(in, b, 2, path);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t get_u32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  get_bytes(in, b, 4, path);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  get_bytes(in, b, 8, path);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f32(std::istream& in, const std::string& path) {
  const std::uint32_t bits = get_u32(in, path);
  float f;
  std::memcpy(&f, &bits, 4);
  return static_cast<double>(f);
}

void write_header(std::ostream& out, const char magic[4]) {
  put_bytes(out, magic, 4);
  put_u16(out, kFormatVersion);
}

void read_header(std::istream& in, const char magic[4], const std::string& path) {
  char got[4];
  get_bytes(in, got, 4, path);
  if (std::memcmp(got, magic, 4) != 0) {
    fail(path, std::string("bad magic (expected \"") + std::string(magic, 4) + "\")");
  }
  const std::uint16_t version = get_u16(in, path);
  if (version != kFormatVersion) {
    fail(path, "unsupported format version " + std::to_string(version));
  }
}

void expect_eof(std::istream& in, const std::string& path) {
  char extra;
  if (in.read(&extra, 1), in.gcount() != 0) fail(path, "trailing bytes after payload");
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Matrix read_embeddings_csv(std::istream& in, const std::string& path) {
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::size_t row_cols = 0;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        while (used < cell.size() && (cell[used] == ' ' || cell[used] == '\t')) ++used;
        if (used != cell.size()) throw std::invalid_argument(cell);
        values.push_back(v);
      } catch (const std::exception&) {
        fail(path, "line " + std::to_string(lineno) + ": bad number \"" + cell + "\"");
      }
      ++row_cols;
    }
    if (row_cols == 0) fail(path, "line " + std::to_string(lineno) + ": empty row");
    if (rows == 0) {
      cols = row_cols;
    } else if (row_cols != cols) {
      fail(path, "line " + std::to_string(lineno) + ": expected " +
                     std::to_string(cols) + " columns, got " + std::to_string(row_cols));
    }
    ++rows;
  }
  if (rows == 0) fail(path, "no embedding rows");
  Matrix m(rows, cols, 0.0);
  m.data = std::move(values);
  return m;
}

}  // namespace

void write_embeddings(const std::string& path, const Matrix& vectors) {
  if (vectors.rows == 0 || vectors.cols == 0) {
    throw DataError("write_embeddings: empty matrix");
  }
  auto out = open_out(path);
  if (ends_with(path, ".csv")) {
    out.precision(std::numeric_limits<float>::max_digits10);
    for (std::size_t i = 0; i < vectors.rows; ++i) {
      for (std::size_t j = 0; j < vectors.cols; ++j) {
        if (j) out << ',';
        out << static_cast<float>(vectors(i, j));
      }
      out << '\n';
    }
  } else {
    write_header(out, "SEMB");
    put_u32(out, static_cast<std::uint32_t>(vectors.rows));
    put_u32(out, static_cast<std::uint32_t>(vectors.cols));
    for (double v : vectors.data) put_f32(out, v);
  }
  if (!out) throw DataError("write failed: " + path);
}

Matrix read_embeddings(const std::string& path) {
  auto in = open_in(path);
  char magic[4];
  in.read(magic, 4);
  const bool is_binary =
      in.gcount() == 4 && std::memcmp(magic, "SEMB", 4) == 0;
  in.clear();
  in.seekg(0);
  if (!is_binary) return read_embeddings_csv(in, path);

  read_header(in, "SEMB", path);
  const std::uint32_t rows = get_u32(in, path);
  const std::uint32_t cols = get_u32(in, path);
  if (rows == 0 || cols == 0) fail(path, "zero embedding dimensions");
  Matrix m(rows, cols, 0.0);
  for (double& v : m.data) {
    v = get_f32(in, path);
    if (!std::isfinite(v)) fail(path, "non-finite embedding value");
  }
  expect_eof(in, path);
  return m;
}

void write_labels(const std::string& path, const std::vector<std::string>& labels) {
  if (labels.empty()) throw DataError("write_labels: empty label list");
  auto out = open_out(path);
  for (const std::string& l : labels) out << l << '\n';
  if (!out) throw DataError("write failed: " + path);
}

std::vector<std::string> read_labels(const std::string& path) {
  auto in = open_in(path);
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    labels.push_back(line);
  }
  if (labels.empty()) fail(path, "no labels");
  return labels;
}

void write_taxonomy(const std::string& path, const Taxonomy& taxonomy) {
  auto out = open_out(path);
  taxonomy.write(out);
  if (!out) throw DataError("write failed: " + path);
}

Taxonomy read_taxonomy(const std::string& path) { return Taxonomy::load_file(path); }

void write_codes(const std::string& path, const HashCodeSet& set) {
  if (set.code_dim == 0) throw DataError("write_codes: zero code_dim");
  auto out = open_out(path);
  write_header(out, "SHSH");
  put_u32(out, static_cast<std::uint32_t>(set.size()));
  put_u32(out, static_cast<std::uint32_t>(set.code_dim));
  const std::size_t bytes_per_code = (set.code_dim + 7) / 8;
  for (std::size_t i = 0; i < set.size(); ++i) {
    put_u64(out, set.ids[i]);
    const auto code = set.code(i);
    for (std::size_t b = 0; b < bytes_per_code; ++b) {
      const unsigned char byte =
          static_cast<unsigned char>((code[b / 8] >> (8 * (b % 8))) & 0xff);
      put_bytes(out, &byte, 1);
    }
  }
  if (!out) throw DataError("write failed: " + path);
}

HashCodeSet read_codes(const std::string& path) {
  auto in = open_in(path);
  read_header(in, "SHSH", path);
  const std::uint32_t count = get_u32(in, path);
  const std::uint32_t code_dim = get_u32(in, path);
  if (code_dim == 0) fail(path, "zero code_dim");
  HashCodeSet set;
  set.code_dim = code_dim;
  const std::size_t bytes_per_code = (code_dim + 7) / 8;
  const std::size_t words = set.words_per_code();
  set.ids.reserve(count);
  set.words.reserve(count * words);
  std::vector<std::uint64_t> code(words);
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint64_t id = get_u64(in, path);
    std::fill(code.begin(), code.end(), 0);
    for (std::size_t b = 0; b < bytes_per_code; ++b) {
      unsigned char byte;
      get_bytes(in, &byte, 1, path);
      code[b / 8] |= static_cast<std::uint64_t>(byte) << (8 * (b % 8));
    }
    set.append(id, code);
  }
  expect_eof(in, path);
  std::unordered_set<std::uint64_t> unique(set.ids.begin(), set.ids.end());
  if (unique.size() != set.ids.size()) fail(path, "duplicate code id");
  return set;
}

void write_checkpoint(const std::string& path, const Mlp& model) {
  auto out = open_out(path);
  write_header(out, "SMLP");
  put_u32(out, static_cast<std::uint32_t>(model.sizes.size()));
  for (std::size_t s : model.sizes) put_u32(out, static_cast<std::uint32_t>(s));
  for (double v : model.flatten()) put_f32(out, v);
  if (!out) throw DataError("write failed: " + path);
}

Mlp read_checkpoint(const std::string& path) {
  auto in = open_in(path);
  read_header(in, "SMLP", path);
  const std::uint32_t n_sizes = get_u32(in, path);
  if (n_sizes < 2) fail(path, "checkpoint needs at least 2 layer sizes");
  std::vector<std::size_t> sizes(n_sizes);
  for (auto& s : sizes) {
    s = get_u32(in, path);
    if (s == 0) fail(path, "zero layer size");
  }
  Mlp model = Mlp::init(sizes, 0);
  std::vector<double> flat(model.param_count());
  for (double& v : flat) {
    v = get_f32(in, path);
    if (!std::isfinite(v)) fail(path, "non-finite parameter");
  }
  expect_eof(in, path);
  model.assign(flat);
  return model;
}

}  // namespace semhash::io
