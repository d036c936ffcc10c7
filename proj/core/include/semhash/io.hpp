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

#ifndef SEMHASH_IO_HPP_
#define SEMHASH_IO_HPP_

#include <string>
#include <vector>

#include "semhash/hash_code.hpp"
#include "semhash/matrix.hpp"
#include "semhash/mlp.hpp"
#include "semhash/taxonomy.hpp"

namespace semhash::io {

// Binary formats share a layout: 4-byte magic, u16 version (currently 1),
// then the payload. Everything is little-endian; values are stored as f32.
// Readers reject bad magic, version, truncation, and shape mismatches with
// a DataError naming the file.

// Embeddings ("SEMB"): u32 N, u32 E, then N*E f32 row-major. Write emits
// CSV instead when the path ends in ".csv"; read sniffs the magic, so CSV
// files are accepted regardless of extension.
void write_embeddings(const std::string& path, const Matrix& vectors);
Matrix read_embeddings(const std::string& path);

// One label per line.
void write_labels(const std::string& path, const std::vector<std::string>& labels);
std::vector<std::string> read_labels(const std::string& path);

// "child<TAB>parent" lines (see Taxonomy::load).
void write_taxonomy(const std::string& path, const Taxonomy& taxonomy);
Taxonomy read_taxonomy(const std::string& path);

// Codes ("SHSH"): u32 count, u32 code_dim, then per code a u64 id followed
// by ceil(code_dim/8) bytes, bit i of the code in byte i/8 at position i%8.
void write_codes(const std::string& path, const HashCodeSet& set);
HashCodeSet read_codes(const std::string& path);

// Checkpoints ("SMLP"): u32 layer-size count, the sizes as u32, then the
// f32 parameters in flatten order.
void write_checkpoint(const std::string& path, const Mlp& model);
Mlp read_checkpoint(const std::string& path);

}  // namespace semhash::io

#endif  // SEMHASH_IO_HPP_
