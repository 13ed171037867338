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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tokcom/bits.hpp"

namespace tokcom {

/// Codebook index of one image token.
using Token = std::uint32_t;
using TokenSequence = std::vector<Token>;

struct FramingConfig {
  std::uint32_t codebook_size = 8192;
  std::size_t tokens_per_image = 128;
  std::size_t tokens_per_package = 8;

  /// Throws ConfigError unless the codebook is a power of two (>= 2) and the
  /// image splits into whole packages.
  void validate() const;

  int bits_per_token() const;
  std::size_t packages() const { return tokens_per_image / tokens_per_package; }
  std::size_t info_bits_per_package() const {
    return tokens_per_package * static_cast<std::size_t>(bits_per_token());
  }
};

/// Half-open range of token positions.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool operator==(const TokenSpan&) const = default;
};

/// Throws std::out_of_range for a token >= codebook_size and
/// std::invalid_argument on a length mismatch.
void validate_tokens(std::span<const Token> seq, const FramingConfig& cfg);

/// Splits the sequence into contiguous packages. Each token is written
/// MSB-first into bits_per_token bits, in sequence order.
std::vector<Bits> tokens_to_packages(std::span<const Token> seq, const FramingConfig& cfg);

/// Exact inverse of tokens_to_packages.
TokenSequence packages_to_tokens(std::span<const Bits> blocks, const FramingConfig& cfg);

TokenSpan package_span(std::size_t package_index, const FramingConfig& cfg);

// Token files. Text: one decimal index per line ('#' comments and blank lines
// are skipped). Binary: consecutive 16-bit little-endian unsigned values.
TokenSequence read_tokens_text(std::istream& in);
void write_tokens_text(std::ostream& out, std::span<const Token> seq);
TokenSequence read_tokens_binary(std::istream& in);
void write_tokens_binary(std::ostream& out, std::span<const Token> seq);

/// Picks the format from the extension: ".bin" is binary, anything else text.
TokenSequence load_tokens(const std::filesystem::path& path);
void save_tokens(const std::filesystem::path& path, std::span<const Token> seq);

}  // namespace tokcom
