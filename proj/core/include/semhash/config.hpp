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

#ifndef SEMHASH_CONFIG_HPP_
#define SEMHASH_CONFIG_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace semhash {

// Line-oriented "key = value" configuration. '#' starts a comment, blank
// lines are skipped, duplicate keys are rejected. Consumers declare the
// keys they understand; leftovers are reported as errors so typos in
// experiment configs surface immediately.
class Config {
 public:
  static Config load(std::istream& in, const std::string& source = "<config>");
  static Config load_file(const std::string& path);

  bool has(const std::string& key) const;

  // Typed getters; the value must parse completely. Each get_* marks the
  // key as recognized for check_unknown_keys().
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback) const;

  // Throws DataError listing any key no getter asked about.
  void check_unknown_keys() const;

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
  mutable std::set<std::string> recognized_;
};

}  // namespace semhash

#endif  // SEMHASH_CONFIG_HPP_
