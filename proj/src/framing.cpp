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

#include "tokcom/framing.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tokcom/errors.hpp"

namespace tokcom {

void FramingConfig::validate() const {
  if (codebook_size < 2 || !std::has_single_bit(codebook_size)) {
    throw ConfigError("codebook_size must be a power of two >= 2, got " +
                      std::to_string(codebook_size));
  }
  if (codebook_size > (1u << 16)) {
    throw ConfigError("codebook_size above 65536 does not fit the 16-bit token file format");
  }
  if (tokens_per_package == 0 || tokens_per_image == 0) {
    throw ConfigError("tokens_per_image and tokens_per_package must be positive");
  }
  if (tokens_per_image % tokens_per_package != 0) {
    throw ConfigError("tokens_per_image (" + std::to_string(tokens_per_image) +
                      ") is not divisible by tokens_per_package (" +
                      std::to_string(tokens_per_package) + ")");
  }
}

int FramingConfig::bits_per_token() const { return std::countr_zero(codebook_size); }

void validate_tokens(std::span<const Token> seq, const FramingConfig& cfg) {
  if (seq.size() != cfg.tokens_per_image) {
    throw std::invalid_argument("token sequence has length " + std::to_string(seq.size()) +
                                ", expected " + std::to_string(cfg.tokens_per_image));
  }
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i] >= cfg.codebook_size) {
      throw std::out_of_range("token " + std::to_string(seq[i]) + " at position " +
                              std::to_string(i) + " outside codebook of size " +
                              std::to_string(cfg.codebook_size));
    }
  }
}

std::vector<Bits> tokens_to_packages(std::span<const Token> seq, const FramingConfig& cfg) {
  cfg.validate();
  validate_tokens(seq, cfg);
  const int width = cfg.bits_per_token();
  std::vector<Bits> blocks(cfg.packages());
  for (std::size_t p = 0; p < blocks.size(); ++p) {
    Bits& block = blocks[p];
    block.reserve(cfg.info_bits_per_package());
    for (std::size_t t = p * cfg.tokens_per_package; t < (p + 1) * cfg.tokens_per_package; ++t) {
      for (int b = width - 1; b >= 0; --b) block.push_back((seq[t] >> b) & 1u);
    }
  }
  return blocks;
}

TokenSequence packages_to_tokens(std::span<const Bits> blocks, const FramingConfig& cfg) {
  cfg.validate();
  if (blocks.size() != cfg.packages()) {
    throw std::invalid_argument("expected " + std::to_string(cfg.packages()) + " blocks, got " +
                                std::to_string(blocks.size()));
  }
  const int width = cfg.bits_per_token();
  TokenSequence seq;
  seq.reserve(cfg.tokens_per_image);
  for (const Bits& block : blocks) {
    if (block.size() != cfg.info_bits_per_package()) {
      throw std::invalid_argument("block has " + std::to_string(block.size()) + " bits, expected " +
                                  std::to_string(cfg.info_bits_per_package()));
    }
    for (std::size_t t = 0; t < cfg.tokens_per_package; ++t) {
      Token v = 0;
      for (int b = 0; b < width; ++b) v = (v << 1) | (block[t * width + b] & 1u);
      seq.push_back(v);
    }
  }
  return seq;
}

TokenSpan package_span(std::size_t package_index, const FramingConfig& cfg) {
  if (package_index >= cfg.packages()) {
    throw std::out_of_range("package index " + std::to_string(package_index) + " >= " +
                            std::to_string(cfg.packages()));
  }
  return {package_index * cfg.tokens_per_package, (package_index + 1) * cfg.tokens_per_package};
}

TokenSequence read_tokens_text(std::istream& in) {
  TokenSequence seq;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    long long v;
    std::string rest;
    if (!(ss >> v) || (ss >> rest) || v < 0 || v > 0xffff) {
      throw std::invalid_argument("token file line " + std::to_string(line_no) +
                                  ": expected one index in [0, 65535]");
    }
    seq.push_back(static_cast<Token>(v));
  }
  return seq;
}

void write_tokens_text(std::ostream& out, std::span<const Token> seq) {
  for (Token t : seq) out << t << '\n';
}

TokenSequence read_tokens_binary(std::istream& in) {
  TokenSequence seq;
  unsigned char buf[2];
  while (in.read(reinterpret_cast<char*>(buf), 2)) {
    seq.push_back(static_cast<Token>(buf[0]) | (static_cast<Token>(buf[1]) << 8));
  }
  if (in.gcount() != 0) throw std::invalid_argument("binary token file has odd byte count");
  return seq;
}

void write_tokens_binary(std::ostream& out, std::span<const Token> seq) {
  for (Token t : seq) {
    if (t > 0xffff) throw std::out_of_range("token does not fit 16 bits");
    const char buf[2] = {static_cast<char>(t & 0xff), static_cast<char>((t >> 8) & 0xff)};
    out.write(buf, 2);
  }
}

namespace {
bool is_binary_path(const std::filesystem::path& path) { return path.extension() == ".bin"; }
}  // namespace

TokenSequence load_tokens(const std::filesystem::path& path) {
  const bool binary = is_binary_path(path);
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open token file " + path.string());
  return binary ? read_tokens_binary(in) : read_tokens_text(in);
}

void save_tokens(const std::filesystem::path& path, std::span<const Token> seq) {
  const bool binary = is_binary_path(path);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot write token file " + path.string());
  if (binary) {
    write_tokens_binary(out, seq);
  } else {
    write_tokens_text(out, seq);
  }
}

}  // namespace tokcom
