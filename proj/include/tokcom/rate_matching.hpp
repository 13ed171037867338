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
#include <span>
#include <stdexcept>
#include <vector>

#include "tokcom/bits.hpp"

namespace tokcom {

/// How E relates to N in the circular buffer bit selection.
enum class RateMatchMode {
  kRepetition,  // E >= N (E == N is the identity)
  kPuncturing,  // E < N and K/E <= 7/16: drop from the front
  kShortening,  // E < N otherwise: drop from the back
};

RateMatchMode rate_match_mode(std::size_t k, std::size_t n, std::size_t e);

/// LLR assigned to shortened positions, whose bits are known to be zero.
inline constexpr double kKnownZeroLlr = 1.0e4;

/// Sub-block interleaver pattern J: y[i] = d[J[i]]. N must be a multiple of 32.
std::vector<std::size_t> subblock_interleaver_pattern(std::size_t n);

/// Triangular channel interleaver pattern: f[i] = e[pattern[i]].
std::vector<std::size_t> channel_interleaver_pattern(std::size_t e);

/// out[i] = in[pattern[i]].
template <typename T>
std::vector<T> permute(std::span<const T> in, std::span<const std::size_t> pattern) {
  if (in.size() != pattern.size()) throw std::invalid_argument("permute: length mismatch");
  std::vector<T> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[pattern[i]];
  return out;
}

/// out[pattern[i]] = in[i]; undoes permute.
template <typename T>
std::vector<T> unpermute(std::span<const T> in, std::span<const std::size_t> pattern) {
  if (in.size() != pattern.size()) throw std::invalid_argument("unpermute: length mismatch");
  std::vector<T> out(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) out[pattern[i]] = in[i];
  return out;
}

Bits subblock_interleave(std::span<const Bit> codeword);
Llrs subblock_deinterleave(std::span<const double> llrs);

/// Circular-buffer bit selection from the sub-block interleaved codeword.
Bits rate_match(std::span<const Bit> interleaved_codeword, std::size_t k, std::size_t e);

/// E received LLRs back to N: repeated copies are summed, punctured positions
/// get 0, shortened positions get kKnownZeroLlr.
Llrs rate_recover(std::span<const double> llrs, std::size_t k, std::size_t n);

Bits channel_interleave(std::span<const Bit> bits);
Bits channel_deinterleave(std::span<const Bit> bits);
Llrs channel_deinterleave(std::span<const double> llrs);

}  // namespace tokcom
