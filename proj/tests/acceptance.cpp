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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tokcom/crc.hpp"
#include "tokcom/modem.hpp"
#include "tokcom/package_codec.hpp"
#include "tokcom/sweep.hpp"

#include "oracles.hpp"

using namespace tokcom;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

Bits random_bits(std::mt19937_64& rng, std::size_t n) {
  Bits b(n);
  for (auto& x : b) x = rng() & 1;
  return b;
}

RunConfig cliff_config() {
  RunConfig cfg;
  cfg.snr_points = {-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5};
  cfg.trials_per_point = 200;
  cfg.restorer = RestorerSpec::parse("passthrough");
  cfg.seed_base = 1;
  return cfg;
}

std::string csv_of(const SweepReport& r, std::uint64_t seed_base) {
  std::ostringstream out;
  write_sweep_csv(out, r.rows, seed_base, git_revision());
  return out.str();
}

Outcome noiseless_round_trip() {
  const auto t0 = Clock::now();
  const FramingConfig fc;
  const PackageCodec codec{PolarConfig{}};
  const double variance = ChannelConfig{INFINITY, 0}.noise_variance();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Token> dist(0, fc.codebook_size - 1);
  std::size_t token_errors = 0, block_errors = 0;
  for (int t = 0; t < 1000; ++t) {
    TokenSequence seq(fc.tokens_per_image);
    for (auto& x : seq) x = dist(rng);
    std::vector<Bits> decoded;
    for (const Bits& info : tokens_to_packages(seq, fc)) {
      const DecodeVerdict v = codec.decode(llr_demap(qam4_modulate(codec.encode(info)), variance));
      block_errors += !v.crc_ok || v.info_bits != info;
      decoded.push_back(v.info_bits);
    }
    const TokenSequence out = packages_to_tokens(decoded, fc);
    for (std::size_t i = 0; i < seq.size(); ++i) token_errors += out[i] != seq[i];
  }
  const double secs = seconds_since(t0);
  return {token_errors == 0 && block_errors == 0 && secs < 60.0,
          format("1000 sequences, token errors %zu, package errors %zu, %.1f s (limit 60 s)", token_errors,
                 block_errors, secs)};
}

Outcome encoder_oracle() {
  std::mt19937_64 rng(7);
  std::size_t mismatches = 0, checked = 0;
  for (std::size_t n : {32u, 256u}) {
    PolarConfig cfg;
    cfg.info_len = n == 32 ? 8 : 104;
    cfg.mother_code_len = n;
    cfg.rate_matched_len = n;
    const PolarCode code(cfg);
    for (int t = 0; t < 1000; ++t) {
      const Bits payload = random_bits(rng, cfg.payload_len());
      Bits u(n, 0);
      for (std::size_t i = 0; i < payload.size(); ++i) u[code.info_positions()[i]] = payload[i];
      mismatches += code.encode(payload) != oracle::generator_matrix_encode(u);
      ++checked;
    }
  }
  return {mismatches == 0, format("%zu payloads at N=32 and N=256, %zu mismatches", checked, mismatches)};
}

Outcome crc_conformance() {
  std::mt19937_64 rng(11);
  std::size_t oracle_mismatch = 0;
  for (int t = 0; t < 10000; ++t) {
    const Bits msg = random_bits(rng, 104);
    oracle_mismatch += crc11(msg) != oracle::crc11_lfsr(msg);
  }
  std::size_t checks = 0, missed = 0;
  for (int t = 0; t < 100; ++t) {
    const Bits payload = crc11_attach(random_bits(rng, 104), 104);
    for (std::size_t i = 0; i < payload.size(); ++i) {
      Bits e = payload;
      e[i] ^= 1;
      missed += crc11_check(e, 115);
      ++checks;
      if (i + 1 < payload.size()) {
        e[i + 1] ^= 1;
        missed += crc11_check(e, 115);
        ++checks;
      }
    }
  }
  return {oracle_mismatch == 0 && missed == 0 && checks < 100000,
          format("10000 messages vs LFSR: %zu mismatches; %zu single/adjacent-double error checks, %zu missed",
                 oracle_mismatch, checks, missed)};
}

Outcome uncoded_ber() {
  Rng rng(5);
  bool pass = true;
  std::string detail;
  for (double snr : {0.0, 2.0, 4.0}) {
    const double variance = ChannelConfig{snr, 0}.noise_variance();
    const std::size_t nbits = 1000000;
    Bits b(nbits);
    for (auto& x : b) x = rng() & 1;
    SymbolBlock s = qam4_modulate(b);
    add_awgn(s, variance, rng);
    const Bits h = hard_decisions(llr_demap(s, variance));
    std::size_t errors = 0;
    for (std::size_t i = 0; i < nbits; ++i) errors += h[i] != b[i];
    const double p = oracle::q_function(std::sqrt(std::pow(10.0, snr / 10.0)));
    const double sigma = std::sqrt(nbits * p * (1 - p));
    const double z = (static_cast<double>(errors) - nbits * p) / sigma;
    pass = pass && std::abs(z) <= 3.0;
    detail += format("%s%g dB: %.5f vs %.5f (%+.2f sigma)", detail.empty() ? "" : "; ", snr,
                     static_cast<double>(errors) / nbits, p, z);
  }
  return {pass, detail};
}

Outcome cliff(const SweepReport& r, double secs) {
  bool monotone = true;
  double biggest_drop = 0.0;
  std::string curve;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    curve += format("%s%.3f", i ? " " : "", r.rows[i].bler.mean);
    if (i == 0) continue;
    const MeanCi& a = r.rows[i - 1].bler;
    const MeanCi& b = r.rows[i].bler;
    if (b.mean - a.mean > a.ci95 + b.ci95) monotone = false;
    biggest_drop = std::max(biggest_drop, a.mean - b.mean);
  }
  return {monotone && biggest_drop > 0.5 && secs < 600.0,
          format("BLER %s; monotone within CIs: %s; largest adjacent drop %.3f (need > 0.5); %.1f s (limit 600 s)",
                 curve.c_str(), monotone ? "yes" : "no", biggest_drop, secs)};
}

Outcome mask_correctness(const SweepReport& r) {
  std::size_t masked_trials = 0;
  for (const auto& d : r.diagnostics) masked_trials += d.crc_failures > 0;
  return {r.mask_violations == 0,
          format("%zu trials, %zu with masked packages, %zu violations", r.records.size(), masked_trials,
                 r.mask_violations)};
}

Outcome restorer_ordering(const SweepReport& pass, const SweepReport& oracle) {
  bool ok = pass.records.size() == oracle.records.size();
  std::size_t ter_points_bad = 0, psnr_trials_bad = 0;
  for (std::size_t i = 0; ok && i < pass.rows.size(); ++i) {
    ter_points_bad += oracle.rows[i].ter.mean > pass.rows[i].ter.mean;
  }
  for (std::size_t i = 0; ok && i < pass.records.size(); ++i) {
    psnr_trials_bad += !(oracle.records[i].psnr_db >= pass.records[i].psnr_db);
  }
  ok = ok && ter_points_bad == 0 && psnr_trials_bad == 0;
  return {ok, format("TER(oracle) > TER(passthrough) at %zu of %zu points; PSNR(oracle) < PSNR(passthrough) in %zu "
                     "of %zu paired trials",
                     ter_points_bad, pass.rows.size(), psnr_trials_bad, pass.records.size())};
}

Outcome bandwidth(const SweepReport& r) {
  const RunConfig cfg;
  const std::uint64_t symbols = cfg.framing.packages() * cfg.polar.rate_matched_len / 2;
  const std::uint64_t pixels = 256ull * 256ull * 3ull;
  return {r.bandwidth == Ratio{1, 96} && symbols == 2048 && pixels == 196608,
          format("%llu symbols / %llu pixels = %llu/%llu", static_cast<unsigned long long>(symbols),
                 static_cast<unsigned long long>(pixels), static_cast<unsigned long long>(r.bandwidth.num),
                 static_cast<unsigned long long>(r.bandwidth.den))};
}

Outcome determinism(const std::string& reference) {
  RunConfig cfg = cliff_config();
  std::string detail = "default workers";
  bool ok = csv_of(run_sweep(cfg), cfg.seed_base) == reference;
  detail += ok ? " (repeat) identical" : " (repeat) DIFFERS";
  for (int workers : {1, 2, 4}) {
    cfg.workers = workers;
    const bool same = csv_of(run_sweep(cfg), cfg.seed_base) == reference;
    ok = ok && same;
    detail += format("; %d worker%s %s", workers, workers == 1 ? "" : "s", same ? "identical" : "DIFFERS");
  }
  return {ok, detail + format("; %zu CSV bytes", reference.size())};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* name, const Outcome& o) {
    std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report("noiseless round trip", noiseless_round_trip());
  report("encoder oracle equivalence", encoder_oracle());
  report("crc conformance", crc_conformance());
  report("uncoded qpsk ber", uncoded_ber());

  const RunConfig cfg = cliff_config();
  const auto t0 = Clock::now();
  const SweepReport pass = run_sweep(cfg);
  const double secs = seconds_since(t0);
  RunConfig oracle_cfg = cfg;
  oracle_cfg.restorer = RestorerSpec::parse("oracle");
  const SweepReport oracle = run_sweep(oracle_cfg);

  report("cliff effect", cliff(pass, secs));
  report("mask correctness", mask_correctness(pass));
  report("restorer ordering", restorer_ordering(pass, oracle));
  report("bandwidth accounting", bandwidth(pass));
  report("determinism", determinism(csv_of(pass, cfg.seed_base)));

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
