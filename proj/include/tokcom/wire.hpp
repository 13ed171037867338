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
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tokcom/framing.hpp"

namespace tokcom {

// External restorer wire protocol, version 1.
//
// Every message is a 4-byte big-endian length followed by that many bytes of
// UTF-8 JSON. Requests:
//   {"v":1,"id":7,"op":"restore","tokens":[...],"text":"..."}
// where -1 marks a MASK entry. Responses echo v and id and carry either
//   {"v":1,"id":7,"tokens":[...]}      or      {"v":1,"id":7,"err":"code"}
inline constexpr int kWireVersion = 1;
inline constexpr std::uint32_t kMaxFrameBytes = 16u << 20;

/// Writes one frame. Returns false on I/O failure or timeout.
bool write_frame(int fd, std::string_view payload, int timeout_ms);

/// Reads one frame. Returns nullopt on EOF, I/O failure, timeout or an
/// oversized length prefix.
std::optional<std::string> read_frame(int fd, int timeout_ms);

nlohmann::json make_restore_request(std::uint64_t id, const std::vector<std::int32_t>& tokens,
                                    std::string_view text);

/// Validates a response against the request id and expected token count.
/// Throws BridgeError on version/id mismatch, an "err" reply or malformed tokens.
TokenSequence parse_restore_response(const nlohmann::json& response, std::uint64_t id,
                                     std::size_t expected_len);

/// Framed request/response client. Endpoints:
///   tcp:HOST:PORT   unix:PATH   exec:SHELL-COMMAND (child's stdin/stdout)
/// Calls on one client are serialized.
class WireClient {
 public:
  WireClient(std::string endpoint, int timeout_ms);
  ~WireClient();
  WireClient(const WireClient&) = delete;
  WireClient& operator=(const WireClient&) = delete;

  /// Sends a request and returns the parsed reply. Connects lazily and drops
  /// the connection after any failure. Throws BridgeError.
  nlohmann::json call(const nlohmann::json& request);

  std::uint64_t next_id() { return ++last_id_; }

 private:
  void connect_locked();
  void close_locked();

  std::string endpoint_;
  int timeout_ms_;
  std::mutex mu_;
  int read_fd_ = -1;
  int write_fd_ = -1;
  int child_pid_ = -1;
  std::atomic<std::uint64_t> last_id_{0};
};

}  // namespace tokcom
