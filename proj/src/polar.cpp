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

#include "tokcom/polar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "tokcom/errors.hpp"
#include "tokcom/rate_matching.hpp"

namespace tokcom {

void PolarConfig::validate() const {
  const std::size_t n = mother_code_len;
  if (!std::has_single_bit(n) || n < kMinMotherCodeLen || n > kMaxMotherCodeLen) {
    throw ConfigError("mother_code_len must be a power of two in [32, 1024], got " +
                      std::to_string(n));
  }
  if (payload_len() > n) {
    throw ConfigError("payload K=" + std::to_string(payload_len()) + " exceeds N=" +
                      std::to_string(n));
  }
  if (payload_len() > rate_matched_len) {
    throw ConfigError("payload K=" + std::to_string(payload_len()) + " exceeds E=" +
                      std::to_string(rate_matched_len));
  }
  if (list_size == 0) throw ConfigError("list_size must be >= 1");
}

std::vector<std::size_t> select_frozen_set(std::size_t n, std::size_t k, std::size_t e) {
  if (!std::has_single_bit(n) || n > kMaxMotherCodeLen) {
    throw std::invalid_argument("select_frozen_set: N must be a power of two <= 1024");
  }
  if (k > n) {
    throw std::invalid_argument("select_frozen_set: K=" + std::to_string(k) + " > N=" +
                                std::to_string(n));
  }

  std::vector<bool> pre_frozen(n, false);
  if (e < n && k > 0) {
    const auto j = subblock_interleaver_pattern(n);
    if (rate_match_mode(k, n, e) == RateMatchMode::kPuncturing) {
      for (std::size_t i = 0; i < n - e; ++i) pre_frozen[j[i]] = true;
      // Leading channels made unreliable by puncturing.
      const long long num = (4 * e >= 3 * n) ? static_cast<long long>(3 * n) - 2LL * e
                                             : static_cast<long long>(9 * n) - 4LL * e;
      const long long den = (4 * e >= 3 * n) ? 4 : 16;
      const long long upto = num > 0 ? (num + den - 1) / den : 0;
      for (long long i = 0; i < upto && i < static_cast<long long>(n); ++i) pre_frozen[i] = true;
    } else {
      for (std::size_t i = e; i < n; ++i) pre_frozen[j[i]] = true;
    }
  }

  // Walk the nested sequence from most to least reliable.
  std::vector<bool> info(n, false);
  std::size_t chosen = 0;
  const auto seq = reliability_sequence();
  for (auto it = seq.rbegin(); it != seq.rend() && chosen < k; ++it) {
    const std::size_t idx = *it;
    if (idx >= n || pre_frozen[idx]) continue;
    info[idx] = true;
    ++chosen;
  }
  if (chosen < k) {
    throw std::invalid_argument("select_frozen_set: not enough unfrozen channels for K=" +
                                std::to_string(k));
  }

  std::vector<std::size_t> frozen;
  frozen.reserve(n - k);
  for (std::size_t i = 0; i < n; ++i) {
    if (!info[i]) frozen.push_back(i);
  }
  return frozen;
}

std::vector<std::size_t> select_frozen_set(const PolarConfig& cfg) {
  cfg.validate();
  return select_frozen_set(cfg.mother_code_len, cfg.payload_len(), cfg.rate_matched_len);
}

void polar_transform(std::span<Bit> bits) {
  const std::size_t n = bits.size();
  if (!std::has_single_bit(n)) throw std::invalid_argument("polar_transform: size not a power of two");
  for (std::size_t half = 1; half < n; half <<= 1) {
    for (std::size_t base = 0; base < n; base += 2 * half) {
      for (std::size_t j = base; j < base + half; ++j) bits[j] ^= bits[j + half];
    }
  }
}

PolarCode::PolarCode(const PolarConfig& cfg) : cfg_(cfg) {
  frozen_positions_ = select_frozen_set(cfg_);
  frozen_mask_.assign(cfg_.mother_code_len, 0);
  for (std::size_t i : frozen_positions_) frozen_mask_[i] = 1;
  for (std::size_t i = 0; i < cfg_.mother_code_len; ++i) {
    if (!frozen_mask_[i]) info_positions_.push_back(i);
  }
}

Bits PolarCode::encode(std::span<const Bit> payload) const {
  if (payload.size() != k()) {
    throw std::invalid_argument("polar encode: expected " + std::to_string(k()) + " bits, got " +
                                std::to_string(payload.size()));
  }
  Bits u(n(), 0);
  for (std::size_t i = 0; i < info_positions_.size(); ++i) u[info_positions_[i]] = payload[i];
  polar_transform(u);
  return u;
}

namespace {

double check_node(double a, double b, CheckNodeRule rule) {
  const double sign = ((a < 0) != (b < 0)) ? -1.0 : 1.0;
  const double mag = std::min(std::abs(a), std::abs(b));
  if (rule == CheckNodeRule::kMinSum) return sign * mag;
  return sign * mag + std::log1p(std::exp(-std::abs(a + b))) - std::log1p(std::exp(-std::abs(a - b)));
}

double bit_node(double a, double b, Bit left) { return left ? b - a : b + a; }

/// Cost of deciding `bit` against the leaf LLR.
double decision_penalty(double llr, Bit bit) {
  if (bit == 0) return llr < 0 ? -llr : 0.0;
  return llr > 0 ? llr : 0.0;
}

// Stage s (0 <= s < m) holds 2^s values at offset 2^s - 1.
constexpr std::size_t stage_offset(std::size_t s) { return (std::size_t{1} << s) - 1; }

struct Path {
  std::vector<double> alpha;  // LLRs per stage
  Bits left_sums;             // partial sums of the pending left child per stage
  Bits u;                     // decided input bits
  double metric = 0.0;
};

struct Candidate {
  double metric;
  std::size_t rank;  // position of the parent in the active list
  std::size_t slot;
  Bit bit;
};

class SclDecoder {
 public:
  SclDecoder(const PolarCode& code, std::span<const double> channel)
      : code_(code),
        channel_(channel),
        n_(code.n()),
        m_(static_cast<std::size_t>(std::countr_zero(code.n()))),
        list_size_(code.config().list_size),
        rule_(code.config().check_node),
        scratch_a_(n_),
        scratch_b_(n_) {
    paths_.resize(list_size_);
    for (Path& p : paths_) {
      p.alpha.assign(n_, 0.0);
      p.left_sums.assign(n_, 0);
      p.u.assign(n_, 0);
    }
    for (std::size_t s = list_size_; s-- > 1;) free_slots_.push_back(s);
    active_.push_back(0);
  }

  DecodeVerdict run() {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t slot : active_) compute_leaf(paths_[slot], i);
      if (code_.is_frozen(i)) {
        for (std::size_t slot : active_) decide(paths_[slot], i, 0, paths_[slot].metric);
      } else {
        branch(i);
      }
      for (std::size_t slot : active_) propagate_sums(paths_[slot], i);
    }
    return select();
  }

 private:
  void compute_leaf(Path& p, std::size_t i) {
    const std::size_t top = i == 0 ? m_ : static_cast<std::size_t>(std::countr_zero(i)) + 1;
    for (std::size_t s = top; s >= 1; --s) {
      const double* in = s == m_ ? channel_.data() : p.alpha.data() + stage_offset(s);
      double* out = p.alpha.data() + stage_offset(s - 1);
      const std::size_t half = std::size_t{1} << (s - 1);
      if (s == top && i != 0) {
        const Bit* left = p.left_sums.data() + stage_offset(s - 1);
        for (std::size_t j = 0; j < half; ++j) out[j] = bit_node(in[j], in[j + half], left[j]);
      } else {
        for (std::size_t j = 0; j < half; ++j) out[j] = check_node(in[j], in[j + half], rule_);
      }
    }
  }

  static void decide(Path& p, std::size_t i, Bit bit, double metric_before) {
    p.u[i] = bit;
    p.metric = metric_before + decision_penalty(p.alpha[0], bit);
  }

  void branch(std::size_t i) {
    candidates_.clear();
    for (std::size_t r = 0; r < active_.size(); ++r) {
      const Path& p = paths_[active_[r]];
      for (Bit b = 0; b <= 1; ++b) {
        candidates_.push_back({p.metric + decision_penalty(p.alpha[0], b), r, active_[r], b});
      }
    }
    const std::size_t keep = std::min(list_size_, candidates_.size());
    std::stable_sort(candidates_.begin(), candidates_.end(),
                     [](const Candidate& a, const Candidate& b) { return a.metric < b.metric; });
    candidates_.resize(keep);

    // Survivor flags per parent: bit 0 and bit 1.
    survivors_.assign(active_.size(), {false, false});
    for (const Candidate& c : candidates_) survivors_[c.rank][c.bit] = true;

    std::vector<std::size_t> next_active;
    next_active.reserve(list_size_);
    for (std::size_t r = 0; r < active_.size(); ++r) {
      if (!survivors_[r][0] && !survivors_[r][1]) free_slots_.push_back(active_[r]);
    }
    for (std::size_t r = 0; r < active_.size(); ++r) {
      const std::size_t slot = active_[r];
      const auto [keep0, keep1] = survivors_[r];
      if (!keep0 && !keep1) continue;
      const double before = paths_[slot].metric;
      if (keep0 && keep1) {
        const std::size_t clone = free_slots_.back();
        free_slots_.pop_back();
        paths_[clone] = paths_[slot];
        decide(paths_[slot], i, 0, before);
        decide(paths_[clone], i, 1, before);
        next_active.push_back(slot);
        next_active.push_back(clone);
      } else {
        decide(paths_[slot], i, keep0 ? 0 : 1, before);
        next_active.push_back(slot);
      }
    }
    active_ = std::move(next_active);
  }

  void propagate_sums(Path& p, std::size_t i) {
    Bit* cur = scratch_a_.data();
    Bit* next = scratch_b_.data();
    cur[0] = p.u[i];
    std::size_t len = 1;
    std::size_t s = 0;
    while (s < m_ && ((i >> s) & 1u)) {
      const Bit* left = p.left_sums.data() + stage_offset(s);
      for (std::size_t j = 0; j < len; ++j) {
        next[j] = left[j] ^ cur[j];
        next[j + len] = cur[j];
      }
      std::swap(cur, next);
      len <<= 1;
      ++s;
    }
    if (s < m_) std::copy(cur, cur + len, p.left_sums.begin() + stage_offset(s));
  }

  DecodeVerdict select() {
    std::vector<std::size_t> order(active_.size());
    for (std::size_t r = 0; r < order.size(); ++r) order[r] = r;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return paths_[active_[a]].metric < paths_[active_[b]].metric;
    });

    const auto info_pos = code_.info_positions();
    const std::size_t info_len = code_.config().info_len;
    Bits payload(info_pos.size());
    auto extract = [&](const Path& p) {
      for (std::size_t j = 0; j < info_pos.size(); ++j) payload[j] = p.u[info_pos[j]];
    };

    for (std::size_t r : order) {
      const Path& p = paths_[active_[r]];
      extract(p);
      if (crc11_check(payload, payload.size())) {
        return {Bits(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(info_len)), true,
                p.metric};
      }
    }
    const Path& best = paths_[active_[order.front()]];
    extract(best);
    return {Bits(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(info_len)), false,
            best.metric};
  }

  const PolarCode& code_;
  std::span<const double> channel_;
  std::size_t n_;
  std::size_t m_;
  std::size_t list_size_;
  CheckNodeRule rule_;
  std::vector<Path> paths_;
  std::vector<std::size_t> active_;
  std::vector<std::size_t> free_slots_;
  std::vector<Candidate> candidates_;
  std::vector<std::array<bool, 2>> survivors_;
  Bits scratch_a_;
  Bits scratch_b_;
};

}  // namespace

DecodeVerdict PolarCode::decode(std::span<const double> llrs) const {
  if (llrs.size() != n()) {
    throw std::invalid_argument("scl decode: expected " + std::to_string(n()) + " LLRs, got " +
                                std::to_string(llrs.size()));
  }
  for (double v : llrs) {
    if (!std::isfinite(v)) throw std::invalid_argument("scl decode: non-finite LLR");
  }
  return SclDecoder(*this, llrs).run();
}

}  // namespace tokcom
