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

#include "tokcom/run_config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "tokcom/errors.hpp"

namespace tokcom {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view raw) {
  const std::string_view s = trim(raw);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (copy.empty() || end != copy.c_str() + copy.size() || std::isnan(v)) {
    throw ConfigError("not a number: '" + copy + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

std::vector<double> parse_snr_points(std::string_view text) {
  const auto range = split(text, ':');
  std::vector<double> points;
  if (range.size() == 3) {
    const double a = parse_number(range[0]);
    const double step = parse_number(range[1]);
    const double b = parse_number(range[2]);
    if (!std::isfinite(a) || !std::isfinite(b) || !(step > 0) || !std::isfinite(step) || b < a) {
      throw ConfigError("SNR range needs finite a <= b and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw ConfigError("SNR range has too many points");
    for (std::size_t i = 0; i < count; ++i) {
      // snap to the grid so 0.1-style steps print cleanly
      points.push_back(std::round((a + static_cast<double>(i) * step) * 1e9) / 1e9);
    }
    return points;
  }
  if (range.size() != 1) throw ConfigError("SNR points: expected a:step:b or a comma list");
  for (std::string_view part : split(text, ',')) {
    const double v = parse_number(part);
    if (std::isinf(v) && v < 0) throw ConfigError("SNR point -inf is not allowed");
    points.push_back(v);
  }
  return points;
}

std::vector<double> parse_levels(std::string_view text) {
  std::vector<double> levels;
  for (std::string_view part : split(text, ',')) {
    const double v = parse_number(part);
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError("levels must lie in [0, 1]");
    levels.push_back(v);
  }
  return levels;
}

SourceKind parse_source_kind(std::string_view text) {
  if (text == "toy_synthetic") return SourceKind::kToySynthetic;
  if (text == "random_tokens") return SourceKind::kRandomTokens;
  if (text == "image_directory") return SourceKind::kImageDirectory;
  if (text == "token_file") return SourceKind::kTokenFile;
  throw ConfigError("unknown source '" + std::string(text) +
                    "' (toy_synthetic, random_tokens, image_directory, token_file)");
}

std::string source_kind_name(SourceKind kind) {
  switch (kind) {
    case SourceKind::kToySynthetic: return "toy_synthetic";
    case SourceKind::kRandomTokens: return "random_tokens";
    case SourceKind::kImageDirectory: return "image_directory";
    case SourceKind::kTokenFile: return "token_file";
  }
  return "unknown";
}

SnrConvention parse_snr_convention(std::string_view text) {
  if (text == "EsN0" || text == "esn0") return SnrConvention::kEsN0;
  if (text == "EbN0" || text == "ebn0") return SnrConvention::kEbN0;
  throw ConfigError("unknown SNR convention '" + std::string(text) + "' (EsN0, EbN0)");
}

FallbackPolicy parse_fallback(std::string_view text) {
  if (text == "none") return FallbackPolicy::kNone;
  if (text == "passthrough") return FallbackPolicy::kPassthrough;
  if (text == "constant") return FallbackPolicy::kConstant;
  throw ConfigError("unknown fallback '" + std::string(text) + "' (none, passthrough, constant)");
}

CheckNodeRule parse_check_node(std::string_view text) {
  if (text == "min_sum") return CheckNodeRule::kMinSum;
  if (text == "exact") return CheckNodeRule::kExact;
  throw ConfigError("unknown check-node rule '" + std::string(text) + "' (min_sum, exact)");
}

void apply_config_json(RunConfig& cfg, const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "snr",         "trials",        "restorer",       "fallback",   "timeout_ms",
      "text_prompt", "text_file",     "seed",           "workers",    "out",
      "source",      "source_path",   "snr_convention", "list_size",  "check_node",
      "codebook_size", "tokens_per_image", "tokens_per_package", "mother_code_len",
      "rate_matched_len"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  try {
    if (j.contains("snr")) {
      const auto& v = j["snr"];
      if (v.is_string()) {
        cfg.snr_points = parse_snr_points(v.get<std::string>());
      } else {
        cfg.snr_points = v.get<std::vector<double>>();
      }
    }
    if (j.contains("trials")) cfg.trials_per_point = j["trials"].get<std::size_t>();
    if (j.contains("restorer")) {
      const FallbackPolicy keep_fallback = cfg.restorer.fallback;
      const int keep_timeout = cfg.restorer.timeout_ms;
      cfg.restorer = RestorerSpec::parse(j["restorer"].get<std::string>());
      cfg.restorer.fallback = keep_fallback;
      cfg.restorer.timeout_ms = keep_timeout;
    }
    if (j.contains("fallback")) cfg.restorer.fallback = parse_fallback(j["fallback"].get<std::string>());
    if (j.contains("timeout_ms")) cfg.restorer.timeout_ms = j["timeout_ms"].get<int>();
    if (j.contains("text_prompt")) cfg.text_prompt = j["text_prompt"].get<std::string>();
    if (j.contains("text_file")) cfg.text_prompt = read_text_file(j["text_file"].get<std::string>());
    if (j.contains("seed")) cfg.seed_base = j["seed"].get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("out")) cfg.output_path = j["out"].get<std::string>();
    if (j.contains("source")) cfg.source = parse_source_kind(j["source"].get<std::string>());
    if (j.contains("source_path")) cfg.source_path = j["source_path"].get<std::string>();
    if (j.contains("snr_convention")) {
      cfg.snr_convention = parse_snr_convention(j["snr_convention"].get<std::string>());
    }
    if (j.contains("list_size")) cfg.polar.list_size = j["list_size"].get<std::size_t>();
    if (j.contains("check_node")) cfg.polar.check_node = parse_check_node(j["check_node"].get<std::string>());
    if (j.contains("codebook_size")) cfg.framing.codebook_size = j["codebook_size"].get<std::uint32_t>();
    if (j.contains("tokens_per_image")) cfg.framing.tokens_per_image = j["tokens_per_image"].get<std::size_t>();
    if (j.contains("tokens_per_package")) {
      cfg.framing.tokens_per_package = j["tokens_per_package"].get<std::size_t>();
    }
    if (j.contains("mother_code_len")) cfg.polar.mother_code_len = j["mother_code_len"].get<std::size_t>();
    if (j.contains("rate_matched_len")) cfg.polar.rate_matched_len = j["rate_matched_len"].get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (j.contains("codebook_size") || j.contains("tokens_per_package")) {
    cfg.framing.validate();
    cfg.polar.info_len = cfg.framing.info_bits_per_package();
  }
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  RunConfig cfg;
  apply_config_json(cfg, j);
  return cfg;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace tokcom
