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

#include <span>
#include <vector>

#include "tokcom/bits.hpp"
#include "tokcom/polar.hpp"

namespace tokcom {

/// Every intermediate of the transmit chain for one package.
struct EncodeStages {
  Bits info;          // A
  Bits payload;       // K, info + CRC-11
  Bits codeword;      // N, polar encoded
  Bits subblock;      // N, sub-block interleaved
  Bits rate_matched;  // E
  Bits interleaved;   // E, channel interleaved; this is what gets modulated
};

/// CRC attach, polar encode, sub-block interleave, rate match and channel
/// interleave for one package, plus the matching receive chain. Holds only
/// read-only tables, so one instance can be shared across threads.
class PackageCodec {
 public:
  explicit PackageCodec(const PolarConfig& cfg);

  const PolarConfig& config() const { return code_.config(); }
  const PolarCode& code() const { return code_; }

  Bits encode(std::span<const Bit> info) const;
  EncodeStages encode_stages(std::span<const Bit> info) const;

  /// Maps E channel LLRs (channel-interleaved order) back to N mother-code LLRs.
  Llrs recover_llrs(std::span<const double> llrs) const;

  /// recover_llrs followed by CRC-aided SCL decoding.
  DecodeVerdict decode(std::span<const double> llrs) const;

 private:
  PolarCode code_;
  std::vector<std::size_t> subblock_pattern_;
  std::vector<std::size_t> channel_pattern_;
};

inline Bits encode_package(std::span<const Bit> info, const PolarConfig& cfg) {
  return PackageCodec(cfg).encode(info);
}

}  // namespace tokcom
