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

#include "tokcom/package_codec.hpp"

#include <stdexcept>
#include <string>

#include "tokcom/crc.hpp"
#include "tokcom/rate_matching.hpp"

namespace tokcom {

PackageCodec::PackageCodec(const PolarConfig& cfg)
    : code_(cfg),
      subblock_pattern_(subblock_interleaver_pattern(cfg.mother_code_len)),
      channel_pattern_(channel_interleaver_pattern(cfg.rate_matched_len)) {}

EncodeStages PackageCodec::encode_stages(std::span<const Bit> info) const {
  const PolarConfig& cfg = config();
  EncodeStages st;
  st.info.assign(info.begin(), info.end());
  st.payload = crc11_attach(info, cfg.info_len);
  st.codeword = code_.encode(st.payload);
  st.subblock = permute(std::span<const Bit>(st.codeword), std::span<const std::size_t>(subblock_pattern_));
  st.rate_matched = rate_match(st.subblock, cfg.payload_len(), cfg.rate_matched_len);
  st.interleaved = permute(std::span<const Bit>(st.rate_matched), std::span<const std::size_t>(channel_pattern_));
  return st;
}

Bits PackageCodec::encode(std::span<const Bit> info) const { return encode_stages(info).interleaved; }

Llrs PackageCodec::recover_llrs(std::span<const double> llrs) const {
  const PolarConfig& cfg = config();
  if (llrs.size() != cfg.rate_matched_len) {
    throw std::invalid_argument("package decode: expected " + std::to_string(cfg.rate_matched_len) +
                                " LLRs, got " + std::to_string(llrs.size()));
  }
  const Llrs deinterleaved = unpermute(llrs, std::span<const std::size_t>(channel_pattern_));
  const Llrs recovered = rate_recover(deinterleaved, cfg.payload_len(), cfg.mother_code_len);
  return unpermute(std::span<const double>(recovered), std::span<const std::size_t>(subblock_pattern_));
}

DecodeVerdict PackageCodec::decode(std::span<const double> llrs) const {
  return code_.decode(recover_llrs(llrs));
}

}  // namespace tokcom
