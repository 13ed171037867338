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

#include "tokcom/crc.hpp"

#include <stdexcept>
#include <string>

namespace tokcom {

std::uint32_t crc11(std::span<const Bit> bits) {
  constexpr std::uint32_t kMask = (1u << kCrc11Len) - 1;
  std::uint32_t reg = 0;
  for (Bit b : bits) {
    const std::uint32_t feedback = ((reg >> (kCrc11Len - 1)) ^ b) & 1u;
    reg = (reg << 1) & kMask;
    if (feedback) reg ^= kCrc11Poly;
  }
  return reg;
}

Bits crc11_attach(std::span<const Bit> info, std::size_t expected_info_len) {
  if (info.size() != expected_info_len) {
    throw std::invalid_argument("crc11_attach: expected " + std::to_string(expected_info_len) +
                                " bits, got " + std::to_string(info.size()));
  }
  Bits out(info.begin(), info.end());
  const std::uint32_t parity = crc11(info);
  for (int i = kCrc11Len - 1; i >= 0; --i) out.push_back((parity >> i) & 1u);
  return out;
}

bool crc11_check(std::span<const Bit> payload, std::size_t expected_payload_len) {
  if (payload.size() != expected_payload_len) {
    throw std::invalid_argument("crc11_check: expected " + std::to_string(expected_payload_len) +
                                " bits, got " + std::to_string(payload.size()));
  }
  if (payload.size() <= static_cast<std::size_t>(kCrc11Len)) {
    throw std::invalid_argument("crc11_check: payload shorter than the CRC");
  }
  return crc11(payload) == 0;
}

}  // namespace tokcom
