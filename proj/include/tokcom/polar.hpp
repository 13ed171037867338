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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tokcom/bits.hpp"
#include "tokcom/crc.hpp"

namespace tokcom {

inline constexpr std::size_t kMinMotherCodeLen = 32;
inline constexpr std::size_t kMaxMotherCodeLen = 1024;

/// Check-node update used by the SC/SCL decoder.
enum class CheckNodeRule {
  kMinSum,  // sign(a) sign(b) min(|a|, |b|)
  kExact,   // 2 atanh(tanh(a/2) tanh(b/2)), evaluated in Jacobian form
};

struct PolarConfig {
  std::size_t info_len = 104;          // A
  std::size_t mother_code_len = 256;   // N
  std::size_t rate_matched_len = 256;  // E
  std::size_t list_size = 8;           // L
  CheckNodeRule check_node = CheckNodeRule::kMinSum;

  /// K = A + 11.
  std::size_t payload_len() const { return info_len + kCrc11Len; }

  /// Throws ConfigError: N must be a power of two in [32, 1024], K <= N, K <= E, L >= 1.
  void validate() const;
};

/// Ascending-reliability polar sequence over 1024 channels.
std::span<const std::uint16_t> reliability_sequence();

/// Frozen channel indices (ascending). Takes the N-K least reliable channels
/// of the nested sequence, after pre-freezing the channels that rate
/// matching punctures or shortens when E < N.
std::vector<std::size_t> select_frozen_set(std::size_t n, std::size_t k, std::size_t e);
std::vector<std::size_t> select_frozen_set(const PolarConfig& cfg);

/// In-place x = u F^{(x)m} over GF(2), F = [[1,0],[1,1]]. Size must be a power of two.
void polar_transform(std::span<Bit> bits);

/// Outcome of decoding one package.
struct DecodeVerdict {
  Bits info_bits;            // A bits
  bool crc_ok = false;
  double path_metric = 0.0;  // metric of the returned path, diagnostic only
};

/// Frozen-set layout for one PolarConfig plus encode / SCL decode on the
/// mother code (N bits, no rate matching).
class PolarCode {
 public:
  explicit PolarCode(const PolarConfig& cfg);

  const PolarConfig& config() const { return cfg_; }
  std::size_t n() const { return cfg_.mother_code_len; }
  std::size_t k() const { return cfg_.payload_len(); }
  std::span<const std::size_t> info_positions() const { return info_positions_; }
  std::span<const std::size_t> frozen_positions() const { return frozen_positions_; }
  bool is_frozen(std::size_t i) const { return frozen_mask_[i] != 0; }

  /// K payload bits on the information channels (ascending), zeros elsewhere, transformed.
  Bits encode(std::span<const Bit> payload) const;

  /// CRC-aided SCL decoding of N mother-code LLRs.
  /// Throws std::invalid_argument on wrong length or non-finite input.
  DecodeVerdict decode(std::span<const double> llrs) const;

 private:
  PolarConfig cfg_;
  std::vector<std::size_t> info_positions_;
  std::vector<std::size_t> frozen_positions_;
  Bits frozen_mask_;
};

inline Bits polar_encode(std::span<const Bit> payload, const PolarConfig& cfg) {
  return PolarCode(cfg).encode(payload);
}

inline DecodeVerdict scl_decode(std::span<const double> llrs, const PolarConfig& cfg) {
  return PolarCode(cfg).decode(llrs);
}

}  // namespace tokcom
