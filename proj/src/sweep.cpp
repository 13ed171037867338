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

#include "tokcom/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include <json.hpp>

#include "tokcom/errors.hpp"
#include "tokcom/toy_tokenizer.hpp"

#ifndef TOKCOM_GIT_REV
#define TOKCOM_GIT_REV "unknown"
#endif

namespace tokcom {

namespace {

constexpr std::size_t kSourceStream = 0xffffffffu;
constexpr std::size_t kGridTextStream = 0xfffffffeu;

std::uint64_t splitmix64(std::uint64_t x) {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".png" || ext == ".ppm")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

const std::string& git_revision() {
  static const std::string rev = TOKCOM_GIT_REV;
  return rev;
}

std::uint64_t trial_seed(std::uint64_t seed_base, std::size_t point_index, std::size_t trial_index) {
  return seed_base + splitmix64((static_cast<std::uint64_t>(point_index) << 32) |
                                static_cast<std::uint64_t>(trial_index & 0xffffffffu));
}

void RunConfig::validate() const {
  framing.validate();
  polar.validate();
  if (polar.info_len != framing.info_bits_per_package()) {
    throw ConfigError("polar info_len " + std::to_string(polar.info_len) +
                      " does not match the package size of " +
                      std::to_string(framing.info_bits_per_package()) + " bits");
  }
  if (polar.rate_matched_len % 2 != 0) throw ConfigError("rate_matched_len must be even for 4-QAM");
  if (trials_per_point == 0) throw ConfigError("trials_per_point must be >= 1");
  if (snr_points.empty()) throw ConfigError("snr_points must not be empty");
  for (double s : snr_points) {
    if (std::isnan(s) || (std::isinf(s) && s < 0)) throw ConfigError("invalid SNR point");
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
  if ((source == SourceKind::kImageDirectory || source == SourceKind::kTokenFile) && source_path.empty()) {
    throw ConfigError("image_directory and token_file sources need a path");
  }
  if ((source == SourceKind::kToySynthetic || source == SourceKind::kImageDirectory) &&
      !toy::compatible(framing)) {
    throw ConfigError("image sources use the toy tokenizer, which needs codebook 8192 and 128 tokens");
  }
  if (restorer.kind == RestorerKind::kConstantFill && restorer.constant >= framing.codebook_size) {
    throw ConfigError("constant fill token outside the codebook");
  }
}

double RunConfig::channel_snr_db(double snr_db) const {
  if (snr_convention == SnrConvention::kEsN0 || std::isinf(snr_db)) return snr_db;
  const double info_bits_per_symbol =
      2.0 * static_cast<double>(polar.info_len) / static_cast<double>(polar.rate_matched_len);
  return esn0_from_ebn0_db(snr_db, info_bits_per_symbol, 1.0);
}

TokenSource::TokenSource(const RunConfig& cfg) : cfg_(cfg) {
  switch (cfg_.source) {
    case SourceKind::kToySynthetic:
    case SourceKind::kRandomTokens:
      break;
    case SourceKind::kImageDirectory: {
      for (const auto& path : list_images(cfg_.source_path)) {
        images_.push_back(resize_bilinear(load_image(path), toy::kImageSize, toy::kImageSize));
        sequences_.push_back(toy::tokenize(images_.back()));
      }
      if (images_.empty()) {
        throw std::runtime_error("no .png or .ppm images in " + cfg_.source_path.string());
      }
      break;
    }
    case SourceKind::kTokenFile: {
      const TokenSequence flat = load_tokens(cfg_.source_path);
      const std::size_t per = cfg_.framing.tokens_per_image;
      if (flat.empty() || flat.size() % per != 0) {
        throw std::runtime_error("token file " + cfg_.source_path.string() + " holds " +
                                 std::to_string(flat.size()) + " tokens, not a multiple of " +
                                 std::to_string(per));
      }
      for (std::size_t i = 0; i < flat.size(); i += per) {
        sequences_.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(i),
                                flat.begin() + static_cast<std::ptrdiff_t>(i + per));
        validate_tokens(sequences_.back(), cfg_.framing);
      }
      break;
    }
  }
}

std::size_t TokenSource::distinct_inputs() const {
  return sequences_.empty() ? std::numeric_limits<std::size_t>::max() : sequences_.size();
}

TrialInput TokenSource::input(std::size_t trial_index) const {
  const std::uint64_t seed = trial_seed(cfg_.seed_base, kSourceStream, trial_index);
  switch (cfg_.source) {
    case SourceKind::kToySynthetic: {
      RasterImage img = toy::synthetic_image(seed);
      TokenSequence tokens = toy::tokenize(img);
      return {std::move(tokens), std::move(img)};
    }
    case SourceKind::kRandomTokens: {
      Rng rng(seed);
      std::uniform_int_distribution<Token> dist(0, cfg_.framing.codebook_size - 1);
      TokenSequence tokens(cfg_.framing.tokens_per_image);
      for (Token& t : tokens) t = dist(rng);
      return {std::move(tokens), std::nullopt};
    }
    case SourceKind::kImageDirectory: {
      const std::size_t i = trial_index % images_.size();
      return {sequences_[i], images_[i]};
    }
    case SourceKind::kTokenFile:
      return {sequences_[trial_index % sequences_.size()], std::nullopt};
  }
  throw std::logic_error("unhandled source kind");
}

namespace {

// PSNR against the source image when there is one, otherwise against the
// toy rendering of the sent tokens. NaN when the toy layout does not apply.
double measure_psnr(const RunConfig& cfg, const TrialInput& in, const TokenSequence& received) {
  if (in.reference) return psnr(*in.reference, toy::detokenize(received));
  if (!toy::compatible(cfg.framing)) return std::numeric_limits<double>::quiet_NaN();
  return psnr(toy::detokenize(in.tokens), toy::detokenize(received));
}

}  // namespace

TrialRecord simulate_trial(const TrialContext& ctx, std::size_t point_index, std::size_t trial_index,
                           TrialDiagnostics& diag) {
  const RunConfig& cfg = ctx.cfg;
  const FramingConfig& fc = cfg.framing;
  const double snr_db = cfg.snr_points[point_index];
  const std::uint64_t seed = trial_seed(cfg.seed_base, point_index, trial_index);

  const TrialInput in = ctx.source.input(trial_index);
  const std::vector<Bits> blocks = tokens_to_packages(in.tokens, fc);

  ChannelConfig channel{cfg.channel_snr_db(snr_db), seed};
  const double noise_variance = channel.noise_variance();
  Rng rng(seed);

  std::vector<DecodeVerdict> verdicts;
  verdicts.reserve(blocks.size());
  std::size_t package_errors = 0;
  diag = {};
  for (const Bits& info : blocks) {
    SymbolBlock symbols = qam4_modulate(ctx.codec.encode(info));
    add_awgn(symbols, noise_variance, rng);
    const Llrs llrs = llr_demap(symbols, noise_variance);
    DecodeVerdict v = ctx.codec.decode(llrs);
    const std::size_t wrong_bits = hamming_distance(v.info_bits, info);
    diag.bit_errors += wrong_bits;
    if (!v.crc_ok) ++diag.crc_failures;
    if (v.crc_ok && wrong_bits > 0) ++diag.undetected_errors;
    if (!v.crc_ok || wrong_bits > 0) ++package_errors;
    verdicts.push_back(std::move(v));
  }

  std::vector<Bits> decoded_blocks;
  decoded_blocks.reserve(verdicts.size());
  for (const DecodeVerdict& v : verdicts) decoded_blocks.push_back(v.info_bits);
  const TokenSequence decoded = packages_to_tokens(decoded_blocks, fc);

  const MaskSet mask = build_mask(verdicts, fc);
  for (std::size_t i = 0; i < fc.tokens_per_image; ++i) {
    const bool expected = !verdicts[i / fc.tokens_per_package].crc_ok;
    if (mask.contains(i) != expected) ++diag.mask_violations;
  }

  const MaskedTokenSequence masked = apply_mask(decoded, mask);
  RestoreContext rctx;
  rctx.codebook_size = fc.codebook_size;
  rctx.text = cfg.text_prompt ? std::string_view(*cfg.text_prompt) : std::string_view();
  rctx.ground_truth = in.tokens;
  const TokenSequence restored = restore(masked, ctx.restorer, rctx);

  diag.token_errors = token_errors(in.tokens, restored);

  TrialRecord rec;
  rec.snr_db = snr_db;
  rec.restorer = ctx.restorer.label();
  rec.seed = seed;
  rec.ter = static_cast<double>(diag.token_errors) / static_cast<double>(fc.tokens_per_image);
  rec.bler = static_cast<double>(package_errors) / static_cast<double>(fc.packages());
  rec.ber = static_cast<double>(diag.bit_errors) /
            static_cast<double>(fc.packages() * fc.info_bits_per_package());
  rec.masked_fraction = static_cast<double>(mask.count()) / static_cast<double>(fc.tokens_per_image);
  rec.psnr_db = measure_psnr(cfg, in, restored);
  return rec;
}

namespace {

SweepReport finish_report(const RunConfig& cfg, const Restorer& restorer, SweepReport report) {
  report.rows = aggregate(report.records);
  for (const TrialDiagnostics& d : report.diagnostics) report.mask_violations += d.mask_violations;
  report.fallback_count = restorer.fallback_count();
  report.restorer_label = restorer.label();
  report.bandwidth = bandwidth_ratio(cfg.framing.packages() * cfg.polar.rate_matched_len / 2,
                                     toy::kImageSize, toy::kImageSize, 3);
  return report;
}

template <typename Loop>
SweepReport sweep_with(const RunConfig& cfg, Loop&& loop) {
  cfg.validate();
  const PackageCodec codec(cfg.polar);
  const TokenSource source(cfg);
  auto restorer = make_restorer(cfg.restorer);
  const TrialContext ctx{cfg, codec, source, *restorer};

  const std::size_t total = cfg.snr_points.size() * cfg.trials_per_point;
  SweepReport report;
  report.records.resize(total);
  report.diagnostics.resize(total);
  loop(total, [&](std::size_t flat) {
    const std::size_t point = flat / cfg.trials_per_point;
    const std::size_t trial = flat % cfg.trials_per_point;
    report.records[flat] = simulate_trial(ctx, point, trial, report.diagnostics[flat]);
  });
  return finish_report(cfg, *restorer, std::move(report));
}

}  // namespace

SweepReport run_sweep(const RunConfig& cfg) {
  return sweep_with(cfg, [&](std::size_t total, auto&& body) {
    const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
    std::exception_ptr failure;
    const auto n = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical(tokcom_sweep_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  });
}

SweepReport run_sweep_serial(const RunConfig& cfg) {
  return sweep_with(cfg, [](std::size_t total, auto&& body) {
    for (std::size_t i = 0; i < total; ++i) body(i);
  });
}

std::string corrupt_text(const std::string& text, double rate, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> printable(0x20, 0x7d);
  std::string out = text;
  for (char& c : out) {
    const double u = unit(rng);
    int replacement = printable(rng);
    if (replacement >= static_cast<unsigned char>(c)) ++replacement;  // skip the original
    if (u < rate) c = static_cast<char>(replacement);
  }
  return out;
}

GridReport run_modality_grid(const RunConfig& cfg, const std::vector<double>& image_ter_levels,
                             const std::vector<double>& text_corruption_levels) {
  cfg.validate();
  if (image_ter_levels.empty() || text_corruption_levels.empty()) {
    throw ConfigError("modality grid needs at least one level on each axis");
  }
  for (double v : image_ter_levels) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("image TER levels must lie in [0, 1]");
  }
  for (double v : text_corruption_levels) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("text corruption levels must lie in [0, 1]");
  }

  const FramingConfig& fc = cfg.framing;
  const TokenSource source(cfg);
  auto restorer = make_restorer(cfg.restorer);
  const bool text_active = cfg.restorer.kind == RestorerKind::kExternal;
  const std::string prompt = cfg.text_prompt.value_or("");

  const std::size_t cells = image_ter_levels.size() * text_corruption_levels.size();
  const std::size_t total = cells * cfg.trials_per_point;
  GridReport report;
  report.records.resize(total);

  const int threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
  for (std::int64_t flat = 0; flat < n; ++flat) {
    try {
      const std::size_t cell = static_cast<std::size_t>(flat) / cfg.trials_per_point;
      const std::size_t trial = static_cast<std::size_t>(flat) % cfg.trials_per_point;
      const double image_level = image_ter_levels[cell / text_corruption_levels.size()];
      const double text_level = text_corruption_levels[cell % text_corruption_levels.size()];

      const TrialInput in = source.input(trial);

      // Same draws at every level, so corrupted sets nest as the level rises.
      Rng rng(trial_seed(cfg.seed_base, 0, trial));
      std::vector<std::size_t> order(fc.tokens_per_image);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::uniform_int_distribution<Token> other(1, fc.codebook_size - 1);
      TokenSequence replacement(fc.tokens_per_image);
      for (std::size_t i = 0; i < replacement.size(); ++i) {
        replacement[i] = (in.tokens[i] + other(rng)) % fc.codebook_size;
      }

      const auto corrupted_count = static_cast<std::size_t>(
          std::lround(image_level * static_cast<double>(fc.tokens_per_image)));
      TokenSequence received = in.tokens;
      MaskSet mask(fc.tokens_per_image);
      for (std::size_t k = 0; k < corrupted_count; ++k) {
        received[order[k]] = replacement[order[k]];
        mask.insert(order[k]);
      }

      Rng text_rng(trial_seed(cfg.seed_base, kGridTextStream, trial));
      const std::string text = corrupt_text(prompt, text_level, text_rng);

      RestoreContext rctx;
      rctx.codebook_size = fc.codebook_size;
      rctx.text = text;
      rctx.ground_truth = in.tokens;
      const TokenSequence restored = restore(apply_mask(received, mask), *restorer, rctx);

      TrialRecord rec;
      rec.snr_db = std::numeric_limits<double>::infinity();
      rec.restorer = restorer->label();
      rec.seed = trial_seed(cfg.seed_base, 0, trial);
      rec.ter = token_error_rate(in.tokens, restored);
      rec.masked_fraction = static_cast<double>(mask.count()) / static_cast<double>(fc.tokens_per_image);
      rec.psnr_db = measure_psnr(cfg, in, restored);
      report.records[static_cast<std::size_t>(flat)] = std::move(rec);
    } catch (...) {
#pragma omp critical(tokcom_grid_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t cell = 0; cell < cells; ++cell) {
    GridRow row;
    row.image_ter_level = image_ter_levels[cell / text_corruption_levels.size()];
    row.text_corruption_level = text_corruption_levels[cell % text_corruption_levels.size()];
    row.text_axis_active = text_active;
    const auto first = report.records.begin() + static_cast<std::ptrdiff_t>(cell * cfg.trials_per_point);
    const std::vector<TrialRecord> slice(first, first + static_cast<std::ptrdiff_t>(cfg.trials_per_point));
    row.metrics = aggregate(slice).front();
    report.rows.push_back(std::move(row));
  }
  report.fallback_count = restorer->fallback_count();
  return report;
}

namespace {

std::string fmt_fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace

void write_grid_csv(std::ostream& out, const GridReport& report, std::uint64_t seed_base) {
  out << kGridCsvHeader << '\n';
  for (const GridRow& row : report.rows) {
    const SweepRow& m = row.metrics;
    out << fmt_fixed(row.image_ter_level, 4) << ',' << fmt_fixed(row.text_corruption_level, 4) << ','
        << (row.text_axis_active ? "active" : "inert") << ',' << m.restorer << ',' << m.trials << ','
        << fmt_fixed(m.ter.mean, 6) << ',' << fmt_fixed(m.ter.ci95, 6) << ','
        << (m.psnr ? fmt_fixed(m.psnr->mean, 4) : std::string()) << ',' << m.psnr_inf_count << ','
        << fmt_fixed(m.masked_fraction.mean, 6) << ','
        << (m.lpips_mean ? fmt_fixed(*m.lpips_mean, 6) : std::string()) << ','
        << (m.clip_mean ? fmt_fixed(*m.clip_mean, 6) : std::string()) << ',' << seed_base << ','
        << git_revision() << '\n';
  }
}

void write_series_json(std::ostream& out, const SweepReport& report) {
  nlohmann::json series = nlohmann::json::array();
  for (const SweepRow& row : report.rows) {
    auto point = [&](const char* metric, const MeanCi& v) {
      series.push_back({{"snr_db", row.snr_db}, {"restorer", row.restorer}, {"metric", metric},
                        {"value", v.mean}, {"ci95", v.ci95}});
    };
    point("ter", row.ter);
    point("bler", row.bler);
    point("ber", row.ber);
    point("masked_fraction", row.masked_fraction);
    if (row.psnr) point("psnr_db", *row.psnr);
  }
  out << series.dump(1) << '\n';
}

void write_metadata_json(std::ostream& out, const RunConfig& cfg, const SweepReport& report) {
  nlohmann::json meta = {
      {"rng", kRngName},
      {"seed_base", cfg.seed_base},
      {"git_rev", git_revision()},
      {"restorer", report.restorer_label},
      {"snr_convention", cfg.snr_convention == SnrConvention::kEsN0 ? "EsN0" : "EbN0"},
      {"trials_per_point", cfg.trials_per_point},
      {"list_size", cfg.polar.list_size},
      {"check_node", cfg.polar.check_node == CheckNodeRule::kMinSum ? "min_sum" : "exact"},
      {"bandwidth_ratio", std::to_string(report.bandwidth.num) + "/" + std::to_string(report.bandwidth.den)},
      {"mask_violations", report.mask_violations},
      {"restorer_fallbacks", report.fallback_count},
  };
  out << meta.dump(2) << '\n';
}

}  // namespace tokcom
