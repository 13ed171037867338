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
#include <string>
#include <string_view>
#include <vector>

namespace tokcom {

/// One hard bit, always 0 or 1.
using Bit = std::uint8_t;
using Bits = std::vector<Bit>;

/// Soft values, positive means bit 0 is more likely.
using Llrs = std::vector<double>;

/// Packs bits MSB-first into lowercase hex, zero-padding the final nibble.
std::string bits_to_hex(std::span<const Bit> bits);

/// Inverse of bits_to_hex. Throws std::invalid_argument on malformed input
/// or when the digit count does not match `num_bits`.
Bits hex_to_bits(std::string_view hex, std::size_t num_bits);

/// Number of positions where the two blocks differ.
std::size_t hamming_distance(std::span<const Bit> a, std::span<const Bit> b);

}  // namespace tokcom
