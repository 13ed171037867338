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

#include "tokcom/restoration.hpp"

#include <charconv>
#include <map>
#include <stdexcept>

#include "tokcom/errors.hpp"
#include "tokcom/wire.hpp"

namespace tokcom {

void MaskSet::insert(std::size_t pos) {
  if (pos >= flags_.size()) {
    throw std::out_of_range("mask position " + std::to_string(pos) + " >= " +
                            std::to_string(flags_.size()));
  }
  if (!flags_[pos]) {
    flags_[pos] = true;
    ++count_;
  }
}

void MaskSet::insert(TokenSpan span) {
  for (std::size_t i = span.begin; i < span.end; ++i) insert(i);
}

std::vector<std::size_t> MaskSet::positions() const {
  std::vector<std::size_t> out;
  out.reserve(count_);
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    if (flags_[i]) out.push_back(i);
  }
  return out;
}

MaskSet build_mask(std::span<const DecodeVerdict> verdicts, const FramingConfig& cfg) {
  if (verdicts.size() != cfg.packages()) {
    throw std::invalid_argument("build_mask: " + std::to_string(verdicts.size()) +
                                " verdicts for " + std::to_string(cfg.packages()) + " packages");
  }
  MaskSet mask(cfg.tokens_per_image);
  for (std::size_t p = 0; p < verdicts.size(); ++p) {
    if (!verdicts[p].crc_ok) mask.insert(package_span(p, cfg));
  }
  return mask;
}

std::size_t MaskedTokenSequence::mask_count() const {
  std::size_t n = 0;
  for (std::int32_t e : entries) n += (e == kMaskToken);
  return n;
}

MaskedTokenSequence apply_mask(std::span<const Token> decoded, const MaskSet& mask) {
  if (decoded.size() != mask.length()) {
    throw std::out_of_range("apply_mask: mask covers " + std::to_string(mask.length()) +
                            " positions, sequence has " + std::to_string(decoded.size()));
  }
  MaskedTokenSequence out;
  out.decoder_guess.assign(decoded.begin(), decoded.end());
  out.entries.resize(decoded.size());
  for (std::size_t i = 0; i < decoded.size(); ++i) {
    out.entries[i] = mask.contains(i) ? kMaskToken : static_cast<std::int32_t>(decoded[i]);
  }
  return out;
}

RestorerSpec RestorerSpec::parse(std::string_view text) {
  RestorerSpec spec;
  auto parse_token = [&](std::string_view digits) {
    Token v = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw ConfigError("restorer constant must be a non-negative integer, got '" +
                        std::string(digits) + "'");
    }
    return v;
  };
  if (text == "passthrough") {
    spec.kind = RestorerKind::kPassthrough;
  } else if (text == "marginal") {
    spec.kind = RestorerKind::kMarginalFill;
  } else if (text == "oracle") {
    spec.kind = RestorerKind::kOracle;
  } else if (text.rfind("constant:", 0) == 0) {
    spec.kind = RestorerKind::kConstantFill;
    spec.constant = parse_token(text.substr(9));
  } else if (text.rfind("external:", 0) == 0) {
    spec.kind = RestorerKind::kExternal;
    spec.endpoint = std::string(text.substr(9));
    if (spec.endpoint.empty()) throw ConfigError("external restorer needs an address");
  } else {
    throw ConfigError("unknown restorer '" + std::string(text) +
                      "' (passthrough, constant:K, marginal, oracle, external:ADDR)");
  }
  return spec;
}

std::string RestorerSpec::label() const {
  switch (kind) {
    case RestorerKind::kPassthrough: return "passthrough";
    case RestorerKind::kConstantFill: return "constant:" + std::to_string(constant);
    case RestorerKind::kMarginalFill: return "marginal";
    case RestorerKind::kOracle: return "oracle";
    case RestorerKind::kExternal: return "external";
  }
  return "unknown";
}

TokenSequence PassthroughRestorer::fill(const MaskedTokenSequence& masked, const RestoreContext&) {
  return masked.decoder_guess;
}

std::string ConstantFillRestorer::label() const { return "constant:" + std::to_string(value_); }

TokenSequence ConstantFillRestorer::fill(const MaskedTokenSequence& masked,
                                         const RestoreContext& ctx) {
  if (value_ >= ctx.codebook_size) throw std::out_of_range("constant fill token outside codebook");
  TokenSequence out(masked.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = masked.is_masked(i) ? value_ : static_cast<Token>(masked.entries[i]);
  }
  return out;
}

TokenSequence MarginalFillRestorer::fill(const MaskedTokenSequence& masked, const RestoreContext&) {
  std::map<Token, std::size_t> histogram;
  for (std::int32_t e : masked.entries) {
    if (e != kMaskToken) ++histogram[static_cast<Token>(e)];
  }
  Token mode = 0;
  std::size_t best = 0;
  for (const auto& [token, count] : histogram) {
    if (count > best) {
      best = count;
      mode = token;
    }
  }
  TokenSequence out(masked.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = masked.is_masked(i) ? mode : static_cast<Token>(masked.entries[i]);
  }
  return out;
}

TokenSequence OracleRestorer::fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) {
  if (ctx.ground_truth.size() != masked.size()) {
    throw std::invalid_argument("oracle restorer needs the ground-truth sequence");
  }
  TokenSequence out(masked.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = masked.is_masked(i) ? ctx.ground_truth[i] : static_cast<Token>(masked.entries[i]);
  }
  return out;
}

ExternalRestorer::ExternalRestorer(const RestorerSpec& spec)
    : spec_(spec), client_(std::make_unique<WireClient>(spec.endpoint, spec.timeout_ms)) {}

ExternalRestorer::~ExternalRestorer() = default;

std::string ExternalRestorer::label() const { return "external"; }

TokenSequence ExternalRestorer::fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) {
  if (masked.mask_count() == 0) return masked.decoder_guess;
  try {
    const std::uint64_t id = client_->next_id();
    const auto reply = client_->call(make_restore_request(id, masked.entries, ctx.text));
    TokenSequence out = parse_restore_response(reply, id, masked.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!masked.is_masked(i) && out[i] != static_cast<Token>(masked.entries[i])) {
        throw BridgeError("bridge altered unmasked position " + std::to_string(i));
      }
      if (out[i] >= ctx.codebook_size) throw BridgeError("bridge returned a token outside the codebook");
    }
    return out;
  } catch (const BridgeError&) {
    if (spec_.fallback == FallbackPolicy::kNone) throw;
    ++fallbacks_;
    if (spec_.fallback == FallbackPolicy::kConstant) {
      return ConstantFillRestorer(spec_.constant).fill(masked, ctx);
    }
    return masked.decoder_guess;
  }
}

std::unique_ptr<Restorer> make_restorer(const RestorerSpec& spec) {
  switch (spec.kind) {
    case RestorerKind::kPassthrough: return std::make_unique<PassthroughRestorer>();
    case RestorerKind::kConstantFill: return std::make_unique<ConstantFillRestorer>(spec.constant);
    case RestorerKind::kMarginalFill: return std::make_unique<MarginalFillRestorer>();
    case RestorerKind::kOracle: return std::make_unique<OracleRestorer>();
    case RestorerKind::kExternal: return std::make_unique<ExternalRestorer>(spec);
  }
  throw std::logic_error("unhandled restorer kind");
}

TokenSequence restore(const MaskedTokenSequence& masked, Restorer& restorer,
                      const RestoreContext& ctx) {
  TokenSequence out = restorer.fill(masked, ctx);
  if (out.size() != masked.size()) {
    throw std::logic_error(restorer.label() + " restorer changed the sequence length");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] >= ctx.codebook_size) {
      throw std::logic_error(restorer.label() + " restorer produced a token outside the codebook");
    }
    if (!masked.is_masked(i) && out[i] != static_cast<Token>(masked.entries[i])) {
      throw std::logic_error(restorer.label() + " restorer altered unmasked position " +
                             std::to_string(i));
    }
  }
  return out;
}

}  // namespace tokcom
