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

#include "tokcom/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace tokcom {

double psnr(const RasterImage& a, const RasterImage& b) {
  if (a.height != b.height || a.width != b.width || a.pixels.size() != b.pixels.size()) {
    throw std::invalid_argument("psnr: image dimensions differ");
  }
  if (a.pixels.empty()) throw std::invalid_argument("psnr: empty images");
  std::uint64_t sse = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const int d = static_cast<int>(a.pixels[i]) - static_cast<int>(b.pixels[i]);
    sse += static_cast<std::uint64_t>(d * d);
  }
  if (sse == 0) return kPsnrInf;
  const double mse = static_cast<double>(sse) / static_cast<double>(a.pixels.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

std::size_t token_errors(std::span<const Token> sent, std::span<const Token> received) {
  if (sent.size() != received.size()) throw std::invalid_argument("token_error_rate: length mismatch");
  std::size_t n = 0;
  for (std::size_t i = 0; i < sent.size(); ++i) n += (sent[i] != received[i]);
  return n;
}

double token_error_rate(std::span<const Token> sent, std::span<const Token> received) {
  const std::size_t errors = token_errors(sent, received);
  if (sent.empty()) throw std::invalid_argument("token_error_rate: empty sequences");
  return static_cast<double>(errors) / static_cast<double>(sent.size());
}

MeanCi mean_ci95(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean_ci95: no samples");
  MeanCi out;
  out.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n < 2) {
    out.degenerate = true;
    return out;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double sd = std::sqrt(ss / static_cast<double>(out.n - 1));
  out.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(out.n));
  return out;
}

std::vector<SweepRow> aggregate(std::span<const TrialRecord> records) {
  if (records.empty()) throw std::invalid_argument("aggregate: no records");

  struct Group {
    double snr_db;
    std::string restorer;
    std::vector<const TrialRecord*> members;
  };
  std::vector<Group> groups;
  for (const TrialRecord& r : records) {
    Group* g = nullptr;
    for (Group& cand : groups) {
      // exact match: SNR points come from the same grid values
      if (cand.snr_db == r.snr_db && cand.restorer == r.restorer) g = &cand;
    }
    if (g == nullptr) {
      groups.push_back({r.snr_db, r.restorer, {}});
      g = &groups.back();
    }
    g->members.push_back(&r);
  }

  std::vector<SweepRow> rows;
  rows.reserve(groups.size());
  for (const Group& g : groups) {
    SweepRow row;
    row.snr_db = g.snr_db;
    row.restorer = g.restorer;
    row.trials = g.members.size();
    std::vector<double> ter, bler, ber, masked, finite_psnr, lpips, clip;
    for (const TrialRecord* r : g.members) {
      ter.push_back(r->ter);
      bler.push_back(r->bler);
      ber.push_back(r->ber);
      masked.push_back(r->masked_fraction);
      if (std::isinf(r->psnr_db)) {
        ++row.psnr_inf_count;
      } else if (!std::isnan(r->psnr_db)) {
        finite_psnr.push_back(r->psnr_db);
      }
      if (r->lpips) lpips.push_back(*r->lpips);
      if (r->clip) clip.push_back(*r->clip);
    }
    row.ter = mean_ci95(ter);
    row.bler = mean_ci95(bler);
    row.ber = mean_ci95(ber);
    row.masked_fraction = mean_ci95(masked);
    if (!finite_psnr.empty()) row.psnr = mean_ci95(finite_psnr);
    if (!lpips.empty()) row.lpips_mean = mean_ci95(lpips).mean;
    if (!clip.empty()) row.clip_mean = mean_ci95(clip).mean;
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string optional_fixed(const std::optional<double>& v, int precision) {
  return v ? fixed(*v, precision) : std::string();
}

}  // namespace

std::string format_sweep_row(const SweepRow& row, std::uint64_t seed_base, const std::string& git_rev) {
  std::string line;
  line += fixed(row.snr_db, 3) + ',';
  line += row.restorer + ',';
  line += std::to_string(row.trials) + ',';
  line += fixed(row.ter.mean, 6) + ',';
  line += fixed(row.ter.ci95, 6) + ',';
  line += fixed(row.bler.mean, 6) + ',';
  line += fixed(row.ber.mean, 6) + ',';
  line += (row.psnr ? fixed(row.psnr->mean, 4) : std::string()) + ',';
  line += std::to_string(row.psnr_inf_count) + ',';
  line += fixed(row.masked_fraction.mean, 6) + ',';
  line += optional_fixed(row.lpips_mean, 6) + ',';
  line += optional_fixed(row.clip_mean, 6) + ',';
  line += std::to_string(seed_base) + ',';
  line += git_rev;
  return line;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t seed_base,
                     const std::string& git_rev) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) out << format_sweep_row(row, seed_base, git_rev) << '\n';
}

}  // namespace tokcom
