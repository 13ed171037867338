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
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tokcom/framing.hpp"
#include "tokcom/image_io.hpp"

namespace tokcom {

/// PSNR of identical images.
inline constexpr double kPsnrInf = std::numeric_limits<double>::infinity();

/// 10 log10(255^2 / MSE) over every pixel and channel; kPsnrInf when MSE is 0.
/// Throws std::invalid_argument on a dimension mismatch.
double psnr(const RasterImage& a, const RasterImage& b);

/// Fraction of positions whose tokens differ.
double token_error_rate(std::span<const Token> sent, std::span<const Token> received);
std::size_t token_errors(std::span<const Token> sent, std::span<const Token> received);

/// Outcome of one simulated image transmission.
struct TrialRecord {
  double snr_db = 0.0;
  std::string restorer;
  std::uint64_t seed = 0;
  double ter = 0.0;              // after restoration
  double bler = 0.0;             // packages failing CRC or decoded wrong
  double ber = 0.0;              // info-bit errors before restoration
  double psnr_db = kPsnrInf;     // NaN when no reconstruction was measured
  double masked_fraction = 0.0;
  std::optional<double> lpips;   // filled only by an attached bridge
  std::optional<double> clip;
};

/// Sample mean with a normal-approximation 95% half-width.
struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;
  std::size_t n = 0;
  bool degenerate = false;  // fewer than two samples, half-width forced to 0
};

/// Throws std::invalid_argument on empty input.
MeanCi mean_ci95(std::span<const double> values);

/// One aggregated sweep point.
struct SweepRow {
  double snr_db = 0.0;
  std::string restorer;
  std::size_t trials = 0;
  MeanCi ter;
  MeanCi bler;
  MeanCi ber;
  std::optional<MeanCi> psnr;     // over finite trials only
  std::size_t psnr_inf_count = 0;
  MeanCi masked_fraction;
  std::optional<double> lpips_mean;
  std::optional<double> clip_mean;
};

/// Groups by (snr_db, restorer) in first-seen order and summarizes each group.
/// Throws std::invalid_argument on empty input.
std::vector<SweepRow> aggregate(std::span<const TrialRecord> records);

/// Stable CSV column order.
inline constexpr const char* kSweepCsvHeader =
    "snr_db,restorer,trials,ter_mean,ter_ci95,bler_mean,ber_mean,psnr_mean_db,psnr_inf_count,"
    "masked_fraction_mean,lpips_mean,clip_mean,seed_base,git_rev";

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows, std::uint64_t seed_base,
                     const std::string& git_rev);

/// One CSV data row without the trailing newline (no header).
std::string format_sweep_row(const SweepRow& row, std::uint64_t seed_base, const std::string& git_rev);

}  // namespace tokcom
