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

#include "tokcom/rate_matching.hpp"

#include <array>
#include <string>

#include "tokcom/polar.hpp"

namespace tokcom {

namespace {

constexpr std::array<std::size_t, 32> kSubblockPattern = {
    0, 1, 2, 4, 3, 5, 6, 7, 8, 16, 9, 17, 10, 18, 11, 19,
    12, 20, 13, 21, 14, 22, 15, 23, 24, 25, 26, 28, 27, 29, 30, 31};

}  // namespace

RateMatchMode rate_match_mode(std::size_t k, std::size_t n, std::size_t e) {
  if (e >= n) return RateMatchMode::kRepetition;
  return 16 * k <= 7 * e ? RateMatchMode::kPuncturing : RateMatchMode::kShortening;
}

std::vector<std::size_t> subblock_interleaver_pattern(std::size_t n) {
  if (n < 32 || n % 32 != 0) {
    throw std::invalid_argument("sub-block interleaver needs N a multiple of 32, got " +
                                std::to_string(n));
  }
  const std::size_t block = n / 32;
  std::vector<std::size_t> pattern(n);
  for (std::size_t i = 0; i < n; ++i) {
    pattern[i] = kSubblockPattern[i / block] * block + i % block;
  }
  return pattern;
}

std::vector<std::size_t> channel_interleaver_pattern(std::size_t e) {
  // Smallest T with T(T+1)/2 >= E.
  std::size_t t = 0;
  while (t * (t + 1) / 2 < e) ++t;

  // Row i of the triangle holds T - i cells, filled row-wise; -1 marks NULL.
  constexpr std::size_t kNull = static_cast<std::size_t>(-1);
  std::vector<std::vector<std::size_t>> rows(t);
  std::size_t k = 0;
  for (std::size_t i = 0; i < t; ++i) {
    rows[i].resize(t - i);
    for (std::size_t j = 0; j < t - i; ++j, ++k) rows[i][j] = k < e ? k : kNull;
  }

  std::vector<std::size_t> pattern;
  pattern.reserve(e);
  for (std::size_t j = 0; j < t; ++j) {
    for (std::size_t i = 0; i < t - j; ++i) {
      if (rows[i][j] != kNull) pattern.push_back(rows[i][j]);
    }
  }
  return pattern;
}

Bits subblock_interleave(std::span<const Bit> codeword) {
  const auto pattern = subblock_interleaver_pattern(codeword.size());
  return permute(codeword, std::span<const std::size_t>(pattern));
}

Llrs subblock_deinterleave(std::span<const double> llrs) {
  const auto pattern = subblock_interleaver_pattern(llrs.size());
  return unpermute(llrs, std::span<const std::size_t>(pattern));
}

Bits rate_match(std::span<const Bit> interleaved_codeword, std::size_t k, std::size_t e) {
  const std::size_t n = interleaved_codeword.size();
  if (n < kMinMotherCodeLen || n > kMaxMotherCodeLen || (n & (n - 1)) != 0) {
    throw std::invalid_argument("rate_match: codeword length " + std::to_string(n) +
                                " is not a power of two in [32, 1024]");
  }
  if (e == 0 || k > e) {
    throw std::invalid_argument("rate_match: unsupported E=" + std::to_string(e) +
                                " for K=" + std::to_string(k) + " (need 0 < K <= E)");
  }
  Bits out(e);
  switch (rate_match_mode(k, n, e)) {
    case RateMatchMode::kRepetition:
      for (std::size_t i = 0; i < e; ++i) out[i] = interleaved_codeword[i % n];
      break;
    case RateMatchMode::kPuncturing:
      for (std::size_t i = 0; i < e; ++i) out[i] = interleaved_codeword[i + n - e];
      break;
    case RateMatchMode::kShortening:
      for (std::size_t i = 0; i < e; ++i) out[i] = interleaved_codeword[i];
      break;
  }
  return out;
}

Llrs rate_recover(std::span<const double> llrs, std::size_t k, std::size_t n) {
  const std::size_t e = llrs.size();
  if (n == 0 || e == 0 || k > e) {
    throw std::invalid_argument("rate_recover: unsupported E=" + std::to_string(e) + " N=" +
                                std::to_string(n) + " K=" + std::to_string(k));
  }
  Llrs out(n, 0.0);
  switch (rate_match_mode(k, n, e)) {
    case RateMatchMode::kRepetition:
      for (std::size_t i = 0; i < e; ++i) out[i % n] += llrs[i];
      break;
    case RateMatchMode::kPuncturing:
      for (std::size_t i = 0; i < e; ++i) out[i + n - e] = llrs[i];
      break;
    case RateMatchMode::kShortening:
      for (std::size_t i = 0; i < e; ++i) out[i] = llrs[i];
      for (std::size_t i = e; i < n; ++i) out[i] = kKnownZeroLlr;
      break;
  }
  return out;
}

Bits channel_interleave(std::span<const Bit> bits) {
  const auto pattern = channel_interleaver_pattern(bits.size());
  return permute(bits, std::span<const std::size_t>(pattern));
}

Bits channel_deinterleave(std::span<const Bit> bits) {
  const auto pattern = channel_interleaver_pattern(bits.size());
  return unpermute(bits, std::span<const std::size_t>(pattern));
}

Llrs channel_deinterleave(std::span<const double> llrs) {
  const auto pattern = channel_interleaver_pattern(llrs.size());
  return unpermute(llrs, std::span<const std::size_t>(pattern));
}

}  // namespace tokcom
