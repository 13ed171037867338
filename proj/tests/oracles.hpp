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

// Slow, obviously-correct reference implementations the tests compare against.

#include <cmath>
#include <cstdint>
#include <vector>

#include "tokcom/bits.hpp"

namespace oracle {

using tokcom::Bit;
using tokcom::Bits;

// Remainder of m(D) * D^11 by g(D) = D^11 + D^10 + D^9 + D^5 + 1, by long division.
inline std::uint32_t crc11_long_division(const Bits& msg) {
  const Bits g = {1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  Bits work = msg;
  work.resize(msg.size() + 11, 0);
  for (std::size_t i = 0; i < msg.size(); ++i) {
    if (!work[i]) continue;
    for (std::size_t j = 0; j < g.size(); ++j) work[i + j] ^= g[j];
  }
  std::uint32_t r = 0;
  for (std::size_t i = msg.size(); i < work.size(); ++i) r = (r << 1) | work[i];
  return r;
}

// Shift register with feedback taps at the generator coefficients.
inline std::uint32_t crc11_lfsr(const Bits& msg) {
  std::uint32_t reg = 0;
  for (Bit b : msg) {
    const std::uint32_t feedback = ((reg >> 10) & 1u) ^ b;
    reg = (reg << 1) & 0x7ffu;
    if (feedback) reg ^= 0x621u;
  }
  return reg;
}

// x = u G with G the m-fold Kronecker power of [[1,0],[1,1]]: G[i][j] = 1 iff j is a bit-subset of i.
inline Bits generator_matrix_encode(const Bits& u) {
  const std::size_t n = u.size();
  Bits x(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!u[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if ((i & j) == j) x[j] ^= 1;
    }
  }
  return x;
}

inline std::size_t sub_block_index(std::size_t n, std::size_t big_n) {
  static const std::size_t p[32] = {0,  1,  2,  4,  3,  5,  6,  7,  8,  16, 9,  17, 10, 18, 11, 19,
                                    12, 20, 13, 21, 14, 22, 15, 23, 24, 25, 26, 28, 27, 29, 30, 31};
  const std::size_t block = big_n / 32;
  return p[n / block] * block + n % block;
}

inline Bits sub_block_interleave(const Bits& d) {
  Bits y(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) y[i] = d[sub_block_index(i, d.size())];
  return y;
}

// Straight 2D triangle: row r holds T - r cells, filled row by row, read column by column.
inline Bits triangle_interleave(const Bits& in) {
  const std::size_t e = in.size();
  std::size_t t = 0;
  while (t * (t + 1) / 2 < e) ++t;
  std::vector<std::vector<int>> v(t, std::vector<int>(t, -1));
  std::size_t k = 0;
  for (std::size_t r = 0; r < t; ++r) {
    for (std::size_t c = 0; c < t - r; ++c) {
      if (k < e) v[r][c] = in[k];
      ++k;
    }
  }
  Bits out;
  for (std::size_t c = 0; c < t; ++c) {
    for (std::size_t r = 0; r < t - c; ++r) {
      if (v[r][c] != -1) out.push_back(static_cast<Bit>(v[r][c]));
    }
  }
  return out;
}

inline double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracle
