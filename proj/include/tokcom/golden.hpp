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
#include <iosfwd>
#include <string>
#include <vector>

#include "tokcom/package_codec.hpp"

namespace tokcom {

// Hex-line golden vector file:
//
//   # comment
//   config info_len=104 mother_code_len=256 rate_matched_len=256
//   vector <id>
//   info 104 <hex>
//   payload 115 <hex>
//   codeword 256 <hex>
//   subblock 256 <hex>
//   rate_matched 256 <hex>
//   interleaved 256 <hex>
//   end
//
// Each data line is "<stage> <bit count> <bits packed MSB-first into hex>",
// the last hex digit zero-padded.
struct GoldenFile {
  PolarConfig config;
  std::vector<EncodeStages> vectors;
};

/// The all-zero block followed by `num_random` pseudo-random blocks from `seed`.
GoldenFile make_golden(const PolarConfig& cfg, std::size_t num_random, std::uint64_t seed);

void write_golden(std::ostream& out, const GoldenFile& file);
GoldenFile read_golden(std::istream& in);

/// Re-encodes every vector and returns one message per mismatching stage.
std::vector<std::string> check_golden(const GoldenFile& file);

}  // namespace tokcom
