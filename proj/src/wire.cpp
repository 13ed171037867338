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

#include "tokcom/wire.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/un.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "tokcom/errors.hpp"

namespace tokcom {

namespace {

bool wait_fd(int fd, short events, int timeout_ms) {
  pollfd p{fd, events, 0};
  for (;;) {
    const int r = ::poll(&p, 1, timeout_ms);
    if (r > 0) return true;
    if (r == 0) return false;
    if (errno != EINTR) return false;
  }
}

bool write_all(int fd, const char* data, std::size_t len, int timeout_ms) {
  while (len > 0) {
    if (!wait_fd(fd, POLLOUT, timeout_ms)) return false;
    const ssize_t n = ::write(fd, data, len);
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return false;
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

bool read_all(int fd, char* data, std::size_t len, int timeout_ms) {
  while (len > 0) {
    if (!wait_fd(fd, POLLIN, timeout_ms)) return false;
    const ssize_t n = ::read(fd, data, len);
    if (n == 0) return false;
    if (n < 0) {
      if (errno == EINTR || errno == EAGAIN) continue;
      return false;
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

int connect_tcp(const std::string& host_port) {
  const auto colon = host_port.rfind(':');
  if (colon == std::string::npos) throw BridgeError("tcp endpoint needs HOST:PORT");
  const std::string host = host_port.substr(0, colon);
  const std::string port = host_port.substr(colon + 1);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), port.c_str(), &hints, &res) != 0) {
    throw BridgeError("cannot resolve " + host_port);
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) throw BridgeError("cannot connect to tcp:" + host_port);
  return fd;
}

int connect_unix(const std::string& path) {
  sockaddr_un addr{};
  addr.sun_family = AF_UNIX;
  if (path.size() >= sizeof(addr.sun_path)) throw BridgeError("unix socket path too long");
  std::memcpy(addr.sun_path, path.c_str(), path.size() + 1);
  const int fd = ::socket(AF_UNIX, SOCK_STREAM, 0);
  if (fd < 0) throw BridgeError("socket() failed");
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    ::close(fd);
    throw BridgeError("cannot connect to unix:" + path);
  }
  return fd;
}

}  // namespace

bool write_frame(int fd, std::string_view payload, int timeout_ms) {
  if (payload.size() > kMaxFrameBytes) return false;
  const std::uint32_t len = htonl(static_cast<std::uint32_t>(payload.size()));
  char header[4];
  std::memcpy(header, &len, 4);
  return write_all(fd, header, 4, timeout_ms) &&
         write_all(fd, payload.data(), payload.size(), timeout_ms);
}

std::optional<std::string> read_frame(int fd, int timeout_ms) {
  char header[4];
  if (!read_all(fd, header, 4, timeout_ms)) return std::nullopt;
  std::uint32_t len;
  std::memcpy(&len, header, 4);
  len = ntohl(len);
  if (len > kMaxFrameBytes) return std::nullopt;
  std::string payload(len, '\0');
  if (!read_all(fd, payload.data(), len, timeout_ms)) return std::nullopt;
  return payload;
}

nlohmann::json make_restore_request(std::uint64_t id, const std::vector<std::int32_t>& tokens,
                                    std::string_view text) {
  return {{"v", kWireVersion}, {"id", id}, {"op", "restore"}, {"tokens", tokens},
          {"text", std::string(text)}};
}

TokenSequence parse_restore_response(const nlohmann::json& response, std::uint64_t id,
                                     std::size_t expected_len) {
  if (!response.is_object()) throw BridgeError("bridge reply is not a JSON object");
  if (!response.contains("v") || !response["v"].is_number_integer() || response["v"] != kWireVersion) {
    throw BridgeError("bridge protocol version mismatch");
  }
  if (response.contains("id") && response["id"] != id) throw BridgeError("bridge reply id mismatch");
  if (response.contains("err")) throw BridgeError("bridge error: " + response["err"].dump());
  if (!response.contains("tokens") || !response["tokens"].is_array()) {
    throw BridgeError("bridge reply has no token list");
  }
  const auto& arr = response["tokens"];
  if (arr.size() != expected_len) throw BridgeError("bridge reply has wrong token count");
  TokenSequence out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      throw BridgeError("bridge reply contains an invalid token");
    }
    out.push_back(static_cast<Token>(v.get<long long>()));
  }
  return out;
}

WireClient::WireClient(std::string endpoint, int timeout_ms)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {}

WireClient::~WireClient() {
  std::lock_guard lock(mu_);
  close_locked();
}

void WireClient::connect_locked() {
  if (read_fd_ >= 0) return;
  // A bridge that goes away mid-write must surface as a BridgeError, not a signal.
  ::signal(SIGPIPE, SIG_IGN);
  if (endpoint_.rfind("tcp:", 0) == 0) {
    read_fd_ = write_fd_ = connect_tcp(endpoint_.substr(4));
  } else if (endpoint_.rfind("unix:", 0) == 0) {
    read_fd_ = write_fd_ = connect_unix(endpoint_.substr(5));
  } else if (endpoint_.rfind("exec:", 0) == 0) {
    int to_child[2];
    int from_child[2];
    if (::pipe(to_child) != 0) throw BridgeError("pipe() failed");
    if (::pipe(from_child) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw BridgeError("pipe() failed");
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw BridgeError("fork() failed");
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::close(to_child[0]);
      ::close(to_child[1]);
      ::close(from_child[0]);
      ::close(from_child[1]);
      const std::string cmd = endpoint_.substr(5);
      ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    write_fd_ = to_child[1];
    read_fd_ = from_child[0];
    child_pid_ = pid;
  } else {
    throw BridgeError("unknown endpoint scheme in '" + endpoint_ + "' (tcp:, unix:, exec:)");
  }
}

void WireClient::close_locked() {
  if (read_fd_ >= 0) ::close(read_fd_);
  if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
  read_fd_ = write_fd_ = -1;
  if (child_pid_ > 0) {
    ::kill(child_pid_, SIGTERM);
    ::waitpid(child_pid_, nullptr, 0);
    child_pid_ = -1;
  }
}

nlohmann::json WireClient::call(const nlohmann::json& request) {
  std::lock_guard lock(mu_);
  connect_locked();
  if (!write_frame(write_fd_, request.dump(), timeout_ms_)) {
    close_locked();
    throw BridgeError("failed to send request to " + endpoint_);
  }
  auto reply = read_frame(read_fd_, timeout_ms_);
  if (!reply) {
    close_locked();
    throw BridgeError("no reply from " + endpoint_);
  }
  try {
    return nlohmann::json::parse(*reply);
  } catch (const nlohmann::json::parse_error& e) {
    close_locked();
    throw BridgeError(std::string("malformed reply: ") + e.what());
  }
}

}  // namespace tokcom
