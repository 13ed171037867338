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

#include <cstdint>
#include <span>

#include "tokcom/bits.hpp"

namespace tokcom {

/// g(D) = D^11 + D^10 + D^9 + D^5 + 1, leading term implicit.
inline constexpr std::uint32_t kCrc11Poly = 0x621;
inline constexpr int kCrc11Len = 11;

/// Parity of `bits` (MSB first), zero initial register, no final XOR.
std::uint32_t crc11(std::span<const Bit> bits);

/// Returns info followed by the 11 parity bits.
Bits crc11_attach(std::span<const Bit> info, std::size_t expected_info_len);

/// True iff the whole payload polynomial is divisible by g(D).
bool crc11_check(std::span<const Bit> payload, std::size_t expected_payload_len);

}  // namespace tokcom
