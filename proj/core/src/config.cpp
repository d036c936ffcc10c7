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

#include "semhash/config.hpp"

#include <fstream>
#include <sstream>

#include "semhash/errors.hpp"

namespace semhash {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Config Config::load(std::istream& in, const std::string& source) {
  Config cfg;
  cfg.source_ = source;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DataError(source + " line " + std::to_string(lineno) +
                      ": expected \"key = value\"");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw DataError(source + " line " + std::to_string(lineno) + ": empty key");
    }
    if (!cfg.values_.emplace(key, value).second) {
      throw DataError(source + " line " + std::to_string(lineno) +
                      ": duplicate key \"" + key + "\"");
    }
  }
  return cfg;
}

Config Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file: " + path);
  return load(in, path);
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  recognized_.insert(key);
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  recognized_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw DataError(source_ + ": key \"" + key + "\": bad number \"" + it->second +
                    "\"");
  }
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  recognized_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(it->second);
    return v;
  } catch (const std::exception&) {
    throw DataError(source_ + ": key \"" + key + "\": bad integer \"" + it->second +
                    "\"");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  recognized_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw DataError(source_ + ": key \"" + key + "\": bad boolean \"" + v + "\"");
}

std::vector<std::string> Config::get_list(
    const std::string& key, const std::vector<std::string>& fallback) const {
  recognized_.insert(key);
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::string> parts;
  std::istringstream ss(it->second);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const std::string p = trim(part);
    if (!p.empty()) parts.push_back(p);
  }
  return parts;
}

void Config::check_unknown_keys() const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (!recognized_.count(key)) {
      if (!unknown.empty()) unknown += ", ";
      unknown += "\"" + key + "\"";
    }
  }
  if (!unknown.empty()) {
    throw DataError(source_ + ": unknown keys: " + unknown);
  }
}

}  // namespace semhash
