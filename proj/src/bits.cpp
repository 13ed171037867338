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

#include "tokcom/bits.hpp"

#include <stdexcept>

namespace tokcom {

std::string bits_to_hex(std::span<const Bit> bits) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve((bits.size() + 3) / 4);
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    unsigned nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      nibble <<= 1;
      if (i + j < bits.size()) nibble |= bits[i + j] & 1u;
    }
    out.push_back(kDigits[nibble]);
  }
  return out;
}

Bits hex_to_bits(std::string_view hex, std::size_t num_bits) {
  if (hex.size() != (num_bits + 3) / 4) {
    throw std::invalid_argument("hex_to_bits: expected " + std::to_string((num_bits + 3) / 4) +
                                " hex digits, got " + std::to_string(hex.size()));
  }
  Bits out;
  out.reserve(num_bits);
  for (char c : hex) {
    unsigned v;
    if (c >= '0' && c <= '9') {
      v = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      v = static_cast<unsigned>(c - 'a' + 10);
    } else if (c >= 'A' && c <= 'F') {
      v = static_cast<unsigned>(c - 'A' + 10);
    } else {
      throw std::invalid_argument(std::string("hex_to_bits: bad digit '") + c + "'");
    }
    for (int j = 3; j >= 0 && out.size() < num_bits; --j) out.push_back((v >> j) & 1u);
  }
  return out;
}

std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

}  // namespace tokcom
