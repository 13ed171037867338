/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The tokcom authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tokcom/golden.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace tokcom {

namespace {

using StageField = Bits EncodeStages::*;

constexpr std::array<std::pair<const char*, StageField>, 6> kStages = {{
    {"info", &EncodeStages::info},
    {"payload", &EncodeStages::payload},
    {"codeword", &EncodeStages::codeword},
    {"subblock", &EncodeStages::subblock},
    {"rate_matched", &EncodeStages::rate_matched},
    {"interleaved", &EncodeStages::interleaved},
}};

std::size_t parse_key(const std::string& token, const std::string& key) {
  if (token.rfind(key + "=", 0) != 0) throw std::invalid_argument("golden: expected " + key + "=");
  return std::stoul(token.substr(key.size() + 1));
}

}  // namespace

GoldenFile make_golden(const PolarConfig& cfg, std::size_t num_random, std::uint64_t seed) {
  const PackageCodec codec(cfg);
  GoldenFile file{cfg, {}};
  file.vectors.push_back(codec.encode_stages(Bits(cfg.info_len, 0)));
  std::mt19937_64 rng(seed);
  for (std::size_t v = 0; v < num_random; ++v) {
    Bits info(cfg.info_len);
    for (Bit& b : info) b = static_cast<Bit>(rng() & 1u);
    file.vectors.push_back(codec.encode_stages(info));
  }
  return file;
}

void write_golden(std::ostream& out, const GoldenFile& file) {
  out << "# tokcom golden vectors, stages of the package transmit chain\n";
  out << "config info_len=" << file.config.info_len
      << " mother_code_len=" << file.config.mother_code_len
      << " rate_matched_len=" << file.config.rate_matched_len << '\n';
  for (std::size_t v = 0; v < file.vectors.size(); ++v) {
    out << "vector " << v << '\n';
    for (const auto& [name, field] : kStages) {
      const Bits& bits = file.vectors[v].*field;
      out << name << ' ' << bits.size() << ' ' << bits_to_hex(bits) << '\n';
    }
    out << "end\n";
  }
}

GoldenFile read_golden(std::istream& in) {
  GoldenFile file;
  bool have_config = false;
  EncodeStages* current = nullptr;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string head;
    ss >> head;
    if (head == "config") {
      std::string a, n, e;
      ss >> a >> n >> e;
      file.config.info_len = parse_key(a, "info_len");
      file.config.mother_code_len = parse_key(n, "mother_code_len");
      file.config.rate_matched_len = parse_key(e, "rate_matched_len");
      have_config = true;
    } else if (head == "vector") {
      file.vectors.emplace_back();
      current = &file.vectors.back();
    } else if (head == "end") {
      current = nullptr;
    } else {
      if (current == nullptr) throw std::invalid_argument("golden: stage line outside a vector");
      std::size_t count;
      std::string hex;
      if (!(ss >> count >> hex)) throw std::invalid_argument("golden: malformed line '" + line + "'");
      bool known = false;
      for (const auto& [name, field] : kStages) {
        if (head == name) {
          (*current).*field = hex_to_bits(hex, count);
          known = true;
        }
      }
      if (!known) throw std::invalid_argument("golden: unknown stage '" + head + "'");
    }
  }
  if (!have_config) throw std::invalid_argument("golden: missing config line");
  return file;
}

std::vector<std::string> check_golden(const GoldenFile& file) {
  const PackageCodec codec(file.config);
  std::vector<std::string> mismatches;
  for (std::size_t v = 0; v < file.vectors.size(); ++v) {
    const EncodeStages got = codec.encode_stages(file.vectors[v].info);
    for (const auto& [name, field] : kStages) {
      if (got.*field != file.vectors[v].*field) {
        mismatches.push_back("vector " + std::to_string(v) + ": stage " + name + " differs");
      }
    }
  }
  return mismatches;
}

}  // namespace tokcom
