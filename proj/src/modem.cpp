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

#include "tokcom/modem.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace tokcom {

double ChannelConfig::noise_variance() const {
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

double esn0_from_ebn0_db(double ebn0_db, double bits_per_symbol, double code_rate) {
  return ebn0_db + 10.0 * std::log10(bits_per_symbol * code_rate);
}

double ebn0_from_esn0_db(double esn0_db, double bits_per_symbol, double code_rate) {
  return esn0_db - 10.0 * std::log10(bits_per_symbol * code_rate);
}

SymbolBlock qam4_modulate(std::span<const Bit> bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("qam4_modulate: odd bit count");
  const double a = 1.0 / std::sqrt(2.0);
  SymbolBlock out(bits.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = {a * (1.0 - 2.0 * bits[2 * i]), a * (1.0 - 2.0 * bits[2 * i + 1])};
  }
  return out;
}

void add_awgn(std::span<Symbol> symbols, double noise_variance, Rng& rng) {
  if (noise_variance <= 0.0) return;
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise_variance / 2.0));
  for (Symbol& s : symbols) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    s += Symbol(re, im);
  }
}

SymbolBlock awgn(std::span<const Symbol> symbols, const ChannelConfig& cfg) {
  SymbolBlock out(symbols.begin(), symbols.end());
  Rng rng(cfg.seed);
  add_awgn(out, cfg.noise_variance(), rng);
  return out;
}

Llrs llr_demap(std::span<const Symbol> received, double noise_variance) {
  Llrs out(2 * received.size());
  if (noise_variance <= 0.0) {
    auto clamp = [](double v) { return v > 0 ? kNoiselessLlr : (v < 0 ? -kNoiselessLlr : 0.0); };
    for (std::size_t i = 0; i < received.size(); ++i) {
      out[2 * i] = clamp(received[i].real());
      out[2 * i + 1] = clamp(received[i].imag());
    }
    return out;
  }
  const double scale = 2.0 * std::sqrt(2.0) / noise_variance;
  for (std::size_t i = 0; i < received.size(); ++i) {
    out[2 * i] = scale * received[i].real();
    out[2 * i + 1] = scale * received[i].imag();
  }
  return out;
}

Bits hard_decisions(std::span<const double> llrs) {
  Bits out(llrs.size());
  for (std::size_t i = 0; i < llrs.size(); ++i) out[i] = llrs[i] < 0 ? 1 : 0;
  return out;
}

Ratio bandwidth_ratio(std::uint64_t num_symbols, std::uint64_t height, std::uint64_t width,
                      std::uint64_t channels) {
  if (height == 0 || width == 0 || channels == 0) {
    throw std::invalid_argument("bandwidth_ratio: image dimensions must be positive");
  }
  const std::uint64_t pixels = height * width * channels;
  const std::uint64_t g = std::gcd(num_symbols, pixels);
  return {num_symbols / g, pixels / g};
}

void write_symbols_csv(std::ostream& out, std::span<const Symbol> symbols) {
  out << "index,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, symbols[i].real(), symbols[i].imag());
    out << buf;
  }
}

}  // namespace tokcom
