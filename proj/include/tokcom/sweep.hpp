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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tokcom/framing.hpp"
#include "tokcom/image_io.hpp"
#include "tokcom/metrics.hpp"
#include "tokcom/modem.hpp"
#include "tokcom/package_codec.hpp"
#include "tokcom/restoration.hpp"

namespace tokcom {

enum class SourceKind {
  kToySynthetic,    // procedural images through the toy tokenizer
  kRandomTokens,    // uniform random tokens, no image I/O
  kImageDirectory,  // .png / .ppm files, resized to 256x256, toy tokenizer
  kTokenFile,       // token file holding one or more sequences back to back
};

enum class SnrConvention {
  kEsN0,  // per complex symbol, what the channel uses
  kEbN0,  // per information bit; converted with 2 * A / E bits per symbol
};

struct RunConfig {
  std::vector<double> snr_points = {-5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5};
  std::size_t trials_per_point = 200;
  RestorerSpec restorer;
  FramingConfig framing;
  PolarConfig polar;
  SourceKind source = SourceKind::kToySynthetic;
  std::filesystem::path source_path;
  std::optional<std::string> text_prompt;
  std::uint64_t seed_base = 1;
  SnrConvention snr_convention = SnrConvention::kEsN0;
  int workers = 0;  // 0: OpenMP default
  std::filesystem::path output_path;

  /// Throws ConfigError.
  void validate() const;

  /// Es/N0 seen by the channel for a configured SNR point.
  double channel_snr_db(double snr_db) const;
};

/// Trial seed = seed_base + splitmix64((point << 32) | trial).
std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t point_index, std::size_t trial_index);

/// Per-trial counters that do not go into the CSV.
struct TrialDiagnostics {
  std::size_t crc_failures = 0;
  std::size_t undetected_errors = 0;  // CRC passed but info bits wrong
  std::size_t mask_violations = 0;    // positions where the mask disagrees with the verdicts
  std::size_t token_errors = 0;       // after restoration
  std::size_t bit_errors = 0;         // info bits before restoration
};

struct SweepReport {
  std::vector<TrialRecord> records;         // point-major, trial-minor
  std::vector<TrialDiagnostics> diagnostics;
  std::vector<SweepRow> rows;
  Ratio bandwidth;
  std::size_t mask_violations = 0;
  std::size_t fallback_count = 0;
  std::string restorer_label;
};

/// Tokens of one trial plus the image they came from, when there is one.
struct TrialInput {
  TokenSequence tokens;
  std::optional<RasterImage> reference;
};

/// Loads or generates the source once, hands out per-trial inputs.
class TokenSource {
 public:
  explicit TokenSource(const RunConfig& cfg);
  TrialInput input(std::size_t trial_index) const;
  std::size_t distinct_inputs() const;

 private:
  RunConfig cfg_;
  std::vector<TokenSequence> sequences_;
  std::vector<RasterImage> images_;
};

/// Everything one trial needs, read-only and shared across workers.
struct TrialContext {
  const RunConfig& cfg;
  const PackageCodec& codec;
  const TokenSource& source;
  Restorer& restorer;
};

/// The Monte Carlo kernel: frame, encode, modulate, AWGN, demap, decode,
/// mask, restore, deframe, measure.
TrialRecord simulate_trial(const TrialContext& ctx, std::size_t point_index, std::size_t trial_index,
                           TrialDiagnostics& diag);

/// Parallel sweep over (SNR point, trial) pairs. Results do not depend on the
/// worker count.
SweepReport run_sweep(const RunConfig& cfg);

/// Single-threaded reference for run_sweep, kept for tests and the benchmark.
SweepReport run_sweep_serial(const RunConfig& cfg);

/// One cell of the modality grid.
struct GridRow {
  double image_ter_level = 0.0;
  double text_corruption_level = 0.0;
  bool text_axis_active = false;
  SweepRow metrics;  // snr_db unused
};

struct GridReport {
  std::vector<GridRow> rows;
  std::vector<TrialRecord> records;  // cell-major, trial-minor
  std::size_t fallback_count = 0;
};

/// Corrupts exactly round(level * tokens) positions per trial (uniformly
/// chosen, replaced by a different random token and masked) and the text
/// prompt at a per-character rate, then restores and measures. The text axis
/// only matters for the external restorer and is flagged inert otherwise.
GridReport run_modality_grid(const RunConfig& cfg, const std::vector<double>& image_ter_levels,
                             const std::vector<double>& text_corruption_levels);

/// Replaces each character with a different printable ASCII character with probability `rate`.
std::string corrupt_text(const std::string& text, double rate, Rng& rng);

/// Build revision baked in at configure time.
const std::string& git_revision();

inline constexpr const char* kGridCsvHeader =
    "image_ter_level,text_corruption_level,text_axis,restorer,trials,ter_mean,ter_ci95,"
    "psnr_mean_db,psnr_inf_count,masked_fraction_mean,lpips_mean,clip_mean,seed_base,git_rev";

void write_grid_csv(std::ostream& out, const GridReport& report, std::uint64_t seed_base);

/// Plot-ready series: a JSON array of {snr_db, restorer, metric, value, ci95} records.
void write_series_json(std::ostream& out, const SweepReport& report);

/// Run metadata: generator name, seeds, conventions, fallback and mask counters.
void write_metadata_json(std::ostream& out, const RunConfig& cfg, const SweepReport& report);

}  // namespace tokcom
