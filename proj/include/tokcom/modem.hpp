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

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "tokcom/bits.hpp"

namespace tokcom {

using Symbol = std::complex<double>;
using SymbolBlock = std::vector<Symbol>;

/// Generator behind every noise draw. Named in run metadata.
using Rng = std::mt19937_64;
inline constexpr const char* kRngName = "mt19937_64+std::normal_distribution";

/// LLR magnitude used when the noise variance is zero.
inline constexpr double kNoiselessLlr = 40.0;

/// SNR is Es/N0 per complex symbol with unit symbol energy.
struct ChannelConfig {
  double snr_db = 0.0;  // +infinity selects the noiseless path
  std::uint64_t seed = 0;

  /// sigma^2 = 10^(-snr_db / 10); zero when snr_db is +infinity.
  double noise_variance() const;
};

/// Converts Eb/N0 to Es/N0 in dB: Es/N0 = Eb/N0 + 10 log10(bits_per_symbol * code_rate).
/// Uncoded 4-QAM gives +3.01 dB.
double esn0_from_ebn0_db(double ebn0_db, double bits_per_symbol = 2.0, double code_rate = 1.0);
double ebn0_from_esn0_db(double esn0_db, double bits_per_symbol = 2.0, double code_rate = 1.0);

/// Gray 4-QAM: (b0, b1) -> ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2).
SymbolBlock qam4_modulate(std::span<const Bit> bits);

/// y = x + n with n circular Gaussian, E|n|^2 = noise_variance.
void add_awgn(std::span<Symbol> symbols, double noise_variance, Rng& rng);

/// Copying variant seeded from cfg.seed.
SymbolBlock awgn(std::span<const Symbol> symbols, const ChannelConfig& cfg);

/// Two LLRs per symbol, 2 sqrt(2) Re(y) / sigma^2 and 2 sqrt(2) Im(y) / sigma^2.
/// With zero variance the LLRs are clamped to +-kNoiselessLlr by sign.
Llrs llr_demap(std::span<const Symbol> received, double noise_variance);

Bits hard_decisions(std::span<const double> llrs);

/// Exact Symbols / (H * W * C) in lowest terms.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Ratio&) const = default;
};

Ratio bandwidth_ratio(std::uint64_t num_symbols, std::uint64_t height, std::uint64_t width,
                      std::uint64_t channels);

/// Debug dump: header "index,re,im" then one row per symbol.
void write_symbols_csv(std::ostream& out, std::span<const Symbol> symbols);

}  // namespace tokcom
