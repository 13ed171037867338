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

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tokcom/modem.hpp"

using namespace tokcom;

TEST_CASE("Gray 4-QAM constellation") {
  const double a = 1.0 / std::sqrt(2.0);
  const SymbolBlock s = qam4_modulate(Bits{0, 0, 0, 1, 1, 0, 1, 1});
  REQUIRE(s.size() == 4);
  CHECK(s[0].real() == doctest::Approx(a));
  CHECK(s[0].imag() == doctest::Approx(a));
  CHECK(s[1].real() == doctest::Approx(a));
  CHECK(s[1].imag() == doctest::Approx(-a));
  CHECK(s[2].real() == doctest::Approx(-a));
  CHECK(s[2].imag() == doctest::Approx(a));
  CHECK(s[3].real() == doctest::Approx(-a));
  CHECK(s[3].imag() == doctest::Approx(-a));
  for (const auto& x : s) CHECK(std::norm(x) == doctest::Approx(1.0));
  CHECK_THROWS(qam4_modulate(Bits{0, 1, 1}));
}

TEST_CASE("noise variance and SNR conventions") {
  CHECK(ChannelConfig{0.0, 1}.noise_variance() == doctest::Approx(1.0));
  CHECK(ChannelConfig{10.0, 1}.noise_variance() == doctest::Approx(0.1));
  CHECK(ChannelConfig{INFINITY, 1}.noise_variance() == 0.0);
  CHECK(esn0_from_ebn0_db(0.0) == doctest::Approx(10 * std::log10(2.0)));
  CHECK(ebn0_from_esn0_db(esn0_from_ebn0_db(1.7, 2.0, 0.4), 2.0, 0.4) == doctest::Approx(1.7));
}

TEST_CASE("noiseless demapping has the right signs") {
  std::mt19937_64 rng(1);
  Bits b(512);
  for (auto& x : b) x = rng() & 1;
  const SymbolBlock s = awgn(qam4_modulate(b), ChannelConfig{INFINITY, 1});
  const Llrs l = llr_demap(s, 0.0);
  REQUIRE(l.size() == 512);
  for (std::size_t i = 0; i < b.size(); ++i) {
    CHECK((l[i] > 0) == (b[i] == 0));
    CHECK(std::abs(l[i]) == doctest::Approx(kNoiselessLlr));
  }
  CHECK(hard_decisions(l) == b);
}

TEST_CASE("LLR scale") {
  const SymbolBlock y = {{0.5, -0.25}};
  const Llrs l = llr_demap(y, 0.5);
  CHECK(l[0] == doctest::Approx(2 * std::sqrt(2.0) * 0.5 / 0.5));
  CHECK(l[1] == doctest::Approx(2 * std::sqrt(2.0) * -0.25 / 0.5));
}

TEST_CASE("AWGN is reproducible and has the configured power") {
  const SymbolBlock zeros(200000, Symbol{0.0, 0.0});
  const SymbolBlock a = awgn(zeros, ChannelConfig{3.0, 77});
  const SymbolBlock b = awgn(zeros, ChannelConfig{3.0, 77});
  CHECK(a == b);
  double power = 0;
  for (const auto& x : a) power += std::norm(x);
  power /= static_cast<double>(a.size());
  CHECK(power == doctest::Approx(std::pow(10.0, -0.3)).epsilon(0.01));
}

TEST_CASE("uncoded BER follows Q(sqrt(Es/N0))") {
  Rng rng(3);
  for (double snr : {0.0, 2.0, 4.0}) {
    const double var = ChannelConfig{snr, 0}.noise_variance();
    const std::size_t nbits = 400000;
    Bits b(nbits);
    for (auto& x : b) x = rng() & 1;
    SymbolBlock s = qam4_modulate(b);
    add_awgn(s, var, rng);
    const Bits h = hard_decisions(llr_demap(s, var));
    std::size_t errors = 0;
    for (std::size_t i = 0; i < nbits; ++i) errors += h[i] != b[i];
    const double p = 0.5 * std::erfc(std::sqrt(std::pow(10.0, snr / 10.0)) / std::sqrt(2.0));
    const double sigma = std::sqrt(nbits * p * (1 - p));
    CHECK(std::abs(static_cast<double>(errors) - nbits * p) <= 3 * sigma);
  }
}

TEST_CASE("bandwidth ratio") {
  CHECK(bandwidth_ratio(2048, 256, 256, 3) == Ratio{1, 96});
  CHECK(bandwidth_ratio(2048, 256, 256, 3).value() == doctest::Approx(1.0 / 96));
  CHECK(bandwidth_ratio(100, 10, 10, 3) == Ratio{1, 3});
  CHECK_THROWS(bandwidth_ratio(10, 0, 10, 3));
}

TEST_CASE("symbol CSV") {
  std::ostringstream out;
  write_symbols_csv(out, SymbolBlock{{1.0, -0.5}});
  CHECK(out.str().rfind("index,re,im\n", 0) == 0);
  CHECK(out.str().find("0,") != std::string::npos);
}
