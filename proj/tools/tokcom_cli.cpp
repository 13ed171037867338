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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tokcom/errors.hpp"
#include "tokcom/golden.hpp"
#include "tokcom/run_config.hpp"
#include "tokcom/sweep.hpp"
#include "tokcom/toy_tokenizer.hpp"

namespace {

using namespace tokcom;

struct RunOptions {
  std::string config;
  std::string snr;
  std::size_t trials = 0;
  std::string restorer;
  std::string fallback;
  int timeout_ms = 0;
  std::string text;
  std::string text_file;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
  std::string source;
  std::string source_path;
  std::string snr_convention;
  std::size_t list_size = 0;
  std::string check_node;
};

void add_run_options(CLI::App* app, RunOptions& o) {
  app->add_option("--config", o.config, "JSON run configuration; flags override it")->check(CLI::ExistingFile);
  app->add_option("--snr", o.snr, "SNR points in dB: a:step:b, a comma list, or inf (write --snr=-5:1:5)");
  app->add_option("--trials", o.trials, "Trials per point");
  app->add_option("--restorer", o.restorer, "passthrough | constant:K | marginal | oracle | external:ADDR");
  app->add_option("--fallback", o.fallback, "On bridge failure: none | passthrough | constant");
  app->add_option("--timeout-ms", o.timeout_ms, "Bridge call timeout");
  app->add_option("--text", o.text, "Text prompt for the external restorer");
  app->add_option("--text-file", o.text_file, "Read the text prompt from a file")->check(CLI::ExistingFile);
  app->add_option("--seed", o.seed, "Seed base");
  app->add_option("--workers", o.workers, "Worker threads, 0 for the OpenMP default");
  app->add_option("--out", o.out, "Output CSV (stdout when omitted)");
  app->add_option("--source", o.source, "toy_synthetic | random_tokens | image_directory | token_file");
  app->add_option("--source-path", o.source_path, "Directory or token file for the source");
  app->add_option("--snr-convention", o.snr_convention, "EsN0 | EbN0");
  app->add_option("--list-size", o.list_size, "SCL list size");
  app->add_option("--check-node", o.check_node, "min_sum | exact");
}

bool given(CLI::App* app, const char* name) { return app->count(name) > 0; }

RunConfig build_config(CLI::App* app, const RunOptions& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (given(app, "--snr")) cfg.snr_points = parse_snr_points(o.snr);
  if (given(app, "--trials")) cfg.trials_per_point = o.trials;
  if (given(app, "--restorer")) {
    const RestorerSpec keep = cfg.restorer;
    cfg.restorer = RestorerSpec::parse(o.restorer);
    cfg.restorer.fallback = keep.fallback;
    cfg.restorer.timeout_ms = keep.timeout_ms;
  }
  if (given(app, "--fallback")) cfg.restorer.fallback = parse_fallback(o.fallback);
  if (given(app, "--timeout-ms")) cfg.restorer.timeout_ms = o.timeout_ms;
  if (given(app, "--text")) cfg.text_prompt = o.text;
  if (given(app, "--text-file")) cfg.text_prompt = read_text_file(o.text_file);
  if (given(app, "--seed")) cfg.seed_base = o.seed;
  if (given(app, "--workers")) cfg.workers = o.workers;
  if (given(app, "--out")) cfg.output_path = o.out;
  if (given(app, "--source")) cfg.source = parse_source_kind(o.source);
  if (given(app, "--source-path")) cfg.source_path = o.source_path;
  if (given(app, "--snr-convention")) cfg.snr_convention = parse_snr_convention(o.snr_convention);
  if (given(app, "--list-size")) cfg.polar.list_size = o.list_size;
  if (given(app, "--check-node")) cfg.polar.check_node = parse_check_node(o.check_node);
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

int cmd_sweep(CLI::App* app, const RunOptions& o) {
  const RunConfig cfg = build_config(app, o);
  const SweepReport report = run_sweep(cfg);
  if (cfg.output_path.empty()) {
    write_sweep_csv(std::cout, report.rows, cfg.seed_base, git_revision());
  } else {
    auto csv = open_out(cfg.output_path);
    write_sweep_csv(csv, report.rows, cfg.seed_base, git_revision());
    auto meta = open_out(cfg.output_path.string() + ".meta.json");
    write_metadata_json(meta, cfg, report);
    auto series = open_out(cfg.output_path.string() + ".series.json");
    write_series_json(series, report);
  }
  std::fprintf(stderr, "bandwidth ratio %llu/%llu, mask violations %zu, restorer fallbacks %zu\n",
               static_cast<unsigned long long>(report.bandwidth.num),
               static_cast<unsigned long long>(report.bandwidth.den), report.mask_violations,
               report.fallback_count);
  return report.mask_violations == 0 ? 0 : 1;
}

int cmd_grid(CLI::App* app, const RunOptions& o, const std::string& image_ter, const std::string& text_levels) {
  const RunConfig cfg = build_config(app, o);
  const GridReport report = run_modality_grid(cfg, parse_levels(image_ter), parse_levels(text_levels));
  if (cfg.output_path.empty()) {
    write_grid_csv(std::cout, report, cfg.seed_base);
  } else {
    auto csv = open_out(cfg.output_path);
    write_grid_csv(csv, report, cfg.seed_base);
  }
  if (!report.rows.empty() && !report.rows.front().text_axis_active) {
    std::fprintf(stderr, "note: text axis is inert for restorer %s\n",
                 report.rows.front().metrics.restorer.c_str());
  }
  if (report.fallback_count > 0) std::fprintf(stderr, "restorer fallbacks %zu\n", report.fallback_count);
  return 0;
}

int cmd_encode(const std::string& in_path, const std::string& out_path) {
  const FramingConfig fc;
  const TokenSequence tokens = load_tokens(in_path);
  validate_tokens(tokens, fc);
  const PackageCodec codec{PolarConfig{}};
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file = open_out(out_path);
    out = &file;
  }
  for (const Bits& info : tokens_to_packages(tokens, fc)) {
    const Bits code = codec.encode(info);
    *out << bits_to_hex(code) << '\n';
  }
  return 0;
}

int cmd_decode(const std::string& in_path, const std::string& out_path, const std::string& snr_text,
               std::uint64_t seed, const std::string& restorer_text, const std::string& symbols_path) {
  const FramingConfig fc;
  const PolarConfig pc;
  const TokenSequence sent = load_tokens(in_path);
  validate_tokens(sent, fc);
  const std::vector<double> snr = parse_snr_points(snr_text);
  if (snr.size() != 1) throw ConfigError("decode takes a single SNR value");

  const PackageCodec codec(pc);
  const ChannelConfig channel{snr.front(), seed};
  const double variance = channel.noise_variance();
  Rng rng(seed);
  SymbolBlock all_symbols;
  std::vector<DecodeVerdict> verdicts;
  std::vector<Bits> decoded;
  for (const Bits& info : tokens_to_packages(sent, fc)) {
    SymbolBlock symbols = qam4_modulate(codec.encode(info));
    add_awgn(symbols, variance, rng);
    all_symbols.insert(all_symbols.end(), symbols.begin(), symbols.end());
    DecodeVerdict v = codec.decode(llr_demap(symbols, variance));
    decoded.push_back(v.info_bits);
    verdicts.push_back(std::move(v));
  }
  if (!symbols_path.empty()) {
    auto csv = open_out(symbols_path);
    write_symbols_csv(csv, all_symbols);
  }

  const MaskSet mask = build_mask(verdicts, fc);
  const RestorerSpec spec = RestorerSpec::parse(restorer_text);
  auto restorer = make_restorer(spec);
  RestoreContext rctx;
  rctx.codebook_size = fc.codebook_size;
  rctx.ground_truth = sent;
  const TokenSequence restored =
      restore(apply_mask(packages_to_tokens(decoded, fc), mask), *restorer, rctx);

  for (std::size_t p = 0; p < verdicts.size(); ++p) {
    std::fprintf(stderr, "package %2zu crc %s\n", p, verdicts[p].crc_ok ? "ok" : "FAIL");
  }
  std::fprintf(stderr, "masked %zu of %zu tokens, TER %.6f\n", mask.count(), fc.tokens_per_image,
               token_error_rate(sent, restored));
  if (out_path.empty()) {
    write_tokens_text(std::cout, restored);
  } else {
    save_tokens(out_path, restored);
  }
  return 0;
}

int cmd_conformance(const std::string& write_path, const std::string& check_path, std::size_t count,
                    std::uint64_t seed) {
  if (write_path.empty() == check_path.empty()) throw ConfigError("give exactly one of --write or --check");
  if (!write_path.empty()) {
    auto out = open_out(write_path);
    write_golden(out, make_golden(PolarConfig{}, count, seed));
    return 0;
  }
  std::ifstream in(check_path);
  if (!in) throw ConfigError("cannot open " + check_path);
  const GoldenFile file = read_golden(in);
  const std::vector<std::string> problems = check_golden(file);
  for (const std::string& p : problems) std::fprintf(stderr, "%s\n", p.c_str());
  std::printf("%zu vectors, %zu mismatches\n", file.vectors.size(), problems.size());
  return problems.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token-based image transmission link simulator"};
  app.require_subcommand(1);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over SNR points, one CSV row per point");
  add_run_options(sweep, sweep_opts);

  RunOptions grid_opts;
  std::string image_ter = "0,0.1,0.2,0.3,0.4,0.5";
  std::string text_levels = "0";
  auto* grid = app.add_subcommand("grid", "Restoration grid over image token errors and text corruption");
  add_run_options(grid, grid_opts);
  grid->add_option("--image-ter", image_ter, "Comma list of image token error levels in [0, 1]");
  grid->add_option("--text-corruption", text_levels, "Comma list of text corruption rates in [0, 1]");

  std::string enc_in, enc_out;
  auto* encode = app.add_subcommand("encode", "Encode a token file, one hex codeword per package");
  encode->add_option("input", enc_in, "Token file (.bin for binary, text otherwise)")->required();
  encode->add_option("--out", enc_out, "Output file (stdout when omitted)");

  std::string dec_in, dec_out, dec_snr = "inf", dec_restorer = "passthrough", dec_symbols;
  std::uint64_t dec_seed = 1;
  auto* decode = app.add_subcommand("decode", "Send one token sequence through the link and restore it");
  decode->add_option("input", dec_in, "Token file")->required();
  decode->add_option("--out", dec_out, "Restored token file (stdout when omitted)");
  decode->add_option("--snr", dec_snr, "Channel Es/N0 in dB, or inf");
  decode->add_option("--seed", dec_seed, "Channel seed");
  decode->add_option("--restorer", dec_restorer, "Restorer spec");
  decode->add_option("--dump-symbols", dec_symbols, "Write received symbols as CSV");

  std::string conf_write, conf_check;
  std::size_t conf_count = 32;
  std::uint64_t conf_seed = 2024;
  auto* conformance = app.add_subcommand("conformance", "Write or check golden encoder vectors");
  conformance->add_option("--write", conf_write, "Write a golden vector file");
  conformance->add_option("--check", conf_check, "Check a golden vector file")->check(CLI::ExistingFile);
  conformance->add_option("--count", conf_count, "Random vectors after the all-zero one");
  conformance->add_option("--seed", conf_seed, "Seed for the random vectors");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) return cmd_sweep(sweep, sweep_opts);
    if (*grid) return cmd_grid(grid, grid_opts, image_ter, text_levels);
    if (*encode) return cmd_encode(enc_in, enc_out);
    if (*decode) return cmd_decode(dec_in, dec_out, dec_snr, dec_seed, dec_restorer, dec_symbols);
    if (*conformance) return cmd_conformance(conf_write, conf_check, conf_count, conf_seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const BridgeError& e) {
    std::fprintf(stderr, "bridge error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
