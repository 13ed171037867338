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

#include "tokcom/toy_tokenizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace tokcom::toy {

TokenSequence tokenize(const RasterImage& img) {
  if (img.height != kImageSize || img.width != kImageSize || img.pixels.size() != kImageSize * kImageSize * 3) {
    throw std::invalid_argument("toy tokenizer needs a 256x256x3 image, got " +
                                std::to_string(img.height) + "x" + std::to_string(img.width));
  }
  TokenSequence tokens(kNumTokens);
  constexpr std::size_t kPatchPixels = kPatchHeight * kPatchWidth;
  for (std::size_t t = 0; t < kNumTokens; ++t) {
    std::array<std::uint64_t, 3> sum{};
    for (std::size_t y = patch_row(t); y < patch_row(t) + kPatchHeight; ++y) {
      for (std::size_t x = patch_col(t); x < patch_col(t) + kPatchWidth; ++x) {
        for (std::size_t c = 0; c < 3; ++c) sum[c] += img.at(y, x, c);
      }
    }
    Token token = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      // floor(mean / width) == floor(sum / (pixels * width)) in exact integer arithmetic
      const auto bin = static_cast<Token>(sum[c] / (kPatchPixels * static_cast<std::uint64_t>(bin_width(c))));
      token = (token << kChannelBits[c]) | bin;
    }
    tokens[t] = token;
  }
  return tokens;
}

RasterImage detokenize(std::span<const Token> tokens) {
  if (tokens.size() != kNumTokens) {
    throw std::invalid_argument("toy detokenizer needs 128 tokens, got " + std::to_string(tokens.size()));
  }
  RasterImage img(kImageSize, kImageSize);
  for (std::size_t t = 0; t < kNumTokens; ++t) {
    if (tokens[t] >= kCodebookSize) {
      throw std::out_of_range("token " + std::to_string(tokens[t]) + " outside the toy codebook");
    }
    const std::array<Token, 3> bins = {tokens[t] >> 8, (tokens[t] >> 4) & 0xf, tokens[t] & 0xf};
    std::array<std::uint8_t, 3> color{};
    for (std::size_t c = 0; c < 3; ++c) {
      color[c] = static_cast<std::uint8_t>(static_cast<int>(bins[c]) * bin_width(c) + bin_width(c) / 2);
    }
    for (std::size_t y = patch_row(t); y < patch_row(t) + kPatchHeight; ++y) {
      for (std::size_t x = patch_col(t); x < patch_col(t) + kPatchWidth; ++x) {
        for (std::size_t c = 0; c < 3; ++c) img.at(y, x, c) = color[c];
      }
    }
  }
  return img;
}

bool compatible(const FramingConfig& cfg) {
  return cfg.codebook_size == kCodebookSize && cfg.tokens_per_image == kNumTokens;
}

RasterImage synthetic_image(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RasterImage img(kImageSize, kImageSize);

  std::array<std::array<double, 3>, 3> grad{};
  for (auto& g : grad) {
    for (double& v : g) v = unit(rng);
  }
  struct Disc {
    double cy, cx, r;
    std::array<double, 3> color;
  };
  std::vector<Disc> discs(3);
  for (Disc& d : discs) {
    d.cy = unit(rng) * kImageSize;
    d.cx = unit(rng) * kImageSize;
    d.r = 20.0 + unit(rng) * 60.0;
    for (double& v : d.color) v = unit(rng);
  }

  for (std::size_t y = 0; y < kImageSize; ++y) {
    for (std::size_t x = 0; x < kImageSize; ++x) {
      const double fy = static_cast<double>(y) / (kImageSize - 1);
      const double fx = static_cast<double>(x) / (kImageSize - 1);
      for (std::size_t c = 0; c < 3; ++c) {
        double v = grad[0][c] * (1 - fx) * (1 - fy) + grad[1][c] * fx + grad[2][c] * fy * (1 - fx);
        for (const Disc& d : discs) {
          const double dy = static_cast<double>(y) - d.cy;
          const double dx = static_cast<double>(x) - d.cx;
          if (dy * dy + dx * dx < d.r * d.r) v = 0.5 * v + 0.5 * d.color[c];
        }
        img.at(y, x, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L));
      }
    }
  }
  return img;
}

}  // namespace tokcom::toy
