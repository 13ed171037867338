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
#include <cstdint>
#include <span>

#include "tokcom/framing.hpp"
#include "tokcom/image_io.hpp"

namespace tokcom::toy {

// Deterministic patch-color tokenizer with the same interface shape as a
// learned one: a 256x256 RGB image becomes 128 tokens over an 8192 codebook.
// The image is cut into a 16x8 grid of 16-row by 32-column patches, read
// row-major. Each patch mean is quantized to 5/4/4 bits (R/G/B) and packed
// as R << 8 | G << 4 | B.
inline constexpr std::size_t kImageSize = 256;
inline constexpr std::size_t kGridRows = 16;
inline constexpr std::size_t kGridCols = 8;
inline constexpr std::size_t kPatchHeight = kImageSize / kGridRows;  // 16
inline constexpr std::size_t kPatchWidth = kImageSize / kGridCols;   // 32
inline constexpr std::size_t kNumTokens = kGridRows * kGridCols;     // 128
inline constexpr std::uint32_t kCodebookSize = 8192;
inline constexpr std::array<int, 3> kChannelBits = {5, 4, 4};

/// Bin width per channel in 8-bit units: 8, 16, 16.
inline constexpr int bin_width(std::size_t channel) { return 256 >> kChannelBits[channel]; }

/// Throws std::invalid_argument unless the image is 256x256.
TokenSequence tokenize(const RasterImage& img);

/// Fills every patch with the bin-center color of its token.
/// Throws std::out_of_range on tokens >= 8192 and std::invalid_argument on length.
RasterImage detokenize(std::span<const Token> tokens);

/// Top-left pixel of the patch behind token `index`.
inline std::size_t patch_row(std::size_t index) { return (index / kGridCols) * kPatchHeight; }
inline std::size_t patch_col(std::size_t index) { return (index % kGridCols) * kPatchWidth; }

/// True when the framing matches the toy layout (8192 codebook, 128 tokens).
bool compatible(const FramingConfig& cfg);

/// Smooth procedural test image (gradients plus a few discs) for `seed`.
RasterImage synthetic_image(std::uint64_t seed);

}  // namespace tokcom::toy
