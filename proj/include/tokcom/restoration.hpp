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

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tokcom/framing.hpp"
#include "tokcom/polar.hpp"

namespace tokcom {

/// MASK sentinel, both in MaskedTokenSequence and on the wire.
inline constexpr std::int32_t kMaskToken = -1;

/// Token positions flagged as corrupted.
class MaskSet {
 public:
  explicit MaskSet(std::size_t length = 0) : flags_(length, false) {}

  /// Throws std::out_of_range for pos >= length().
  void insert(std::size_t pos);
  void insert(TokenSpan span);
  bool contains(std::size_t pos) const { return pos < flags_.size() && flags_[pos]; }
  std::size_t count() const { return count_; }
  std::size_t length() const { return flags_.size(); }
  bool empty() const { return count_ == 0; }
  std::vector<std::size_t> positions() const;

  bool operator==(const MaskSet&) const = default;

 private:
  std::vector<bool> flags_;
  std::size_t count_ = 0;
};

/// Union of the spans of every package whose CRC failed.
/// Throws std::invalid_argument unless there is one verdict per package.
MaskSet build_mask(std::span<const DecodeVerdict> verdicts, const FramingConfig& cfg);

/// Entries are token indices or kMaskToken. The decoder's guess for every
/// position is kept alongside so a passthrough restorer can fall back on it.
struct MaskedTokenSequence {
  std::vector<std::int32_t> entries;
  TokenSequence decoder_guess;

  std::size_t size() const { return entries.size(); }
  bool is_masked(std::size_t i) const { return entries[i] == kMaskToken; }
  std::size_t mask_count() const;
};

MaskedTokenSequence apply_mask(std::span<const Token> decoded, const MaskSet& mask);

enum class RestorerKind { kPassthrough, kConstantFill, kMarginalFill, kOracle, kExternal };

/// What the external restorer does when the bridge fails.
enum class FallbackPolicy { kNone, kPassthrough, kConstant };

struct RestorerSpec {
  RestorerKind kind = RestorerKind::kPassthrough;
  Token constant = 0;      // constant_fill token, also the kConstant fallback value
  std::string endpoint;    // external only
  std::optional<std::string> text_prompt;
  FallbackPolicy fallback = FallbackPolicy::kPassthrough;
  int timeout_ms = 5000;

  /// Parses the CLI form: passthrough | constant:K | marginal | oracle | external:ADDR.
  /// Throws ConfigError.
  static RestorerSpec parse(std::string_view text);

  /// Stable label written to the CSV restorer column.
  std::string label() const;
};

/// Per-call inputs that are not part of the masked sequence itself.
struct RestoreContext {
  std::uint32_t codebook_size = 8192;
  std::string_view text;
  std::span<const Token> ground_truth;  // oracle only
};

class Restorer {
 public:
  virtual ~Restorer() = default;
  virtual std::string label() const = 0;

  /// Produces a full sequence. Callers go through restore(), which checks the
  /// unmasked-positions-unchanged contract.
  virtual TokenSequence fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) = 0;

  /// Number of calls served by the fallback path instead of the real restorer.
  virtual std::size_t fallback_count() const { return 0; }
};

/// Keeps the decoder's best-path guess at masked positions.
class PassthroughRestorer final : public Restorer {
 public:
  std::string label() const override { return "passthrough"; }
  TokenSequence fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) override;
};

class ConstantFillRestorer final : public Restorer {
 public:
  explicit ConstantFillRestorer(Token value) : value_(value) {}
  std::string label() const override;
  TokenSequence fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) override;

 private:
  Token value_;
};

/// Fills every masked slot with the most frequent unmasked token (smallest
/// index on ties, 0 when everything is masked).
class MarginalFillRestorer final : public Restorer {
 public:
  std::string label() const override { return "marginal"; }
  TokenSequence fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) override;
};

/// Writes the ground truth into masked slots. Harness and test use only:
/// it needs the transmitted tokens through RestoreContext::ground_truth.
class OracleRestorer final : public Restorer {
 public:
  std::string label() const override { return "oracle"; }
  TokenSequence fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) override;
};

class WireClient;

/// Forwards the masked sequence to a bridge over the wire protocol.
class ExternalRestorer final : public Restorer {
 public:
  explicit ExternalRestorer(const RestorerSpec& spec);
  ~ExternalRestorer() override;

  std::string label() const override;
  TokenSequence fill(const MaskedTokenSequence& masked, const RestoreContext& ctx) override;
  std::size_t fallback_count() const override { return fallbacks_.load(); }

 private:
  RestorerSpec spec_;
  std::unique_ptr<WireClient> client_;
  std::atomic<std::size_t> fallbacks_{0};
};

std::unique_ptr<Restorer> make_restorer(const RestorerSpec& spec);

/// Runs the restorer and enforces its contract: same length, unmasked
/// entries unchanged, every token inside the codebook. Throws
/// std::logic_error when a restorer breaks it.
TokenSequence restore(const MaskedTokenSequence& masked, Restorer& restorer,
                      const RestoreContext& ctx);

}  // namespace tokcom
