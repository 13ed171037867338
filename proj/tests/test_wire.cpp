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

#include <doctest.h>

#include <sys/socket.h>
#include <sys/un.h>
#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <functional>
#include <thread>

#include "tokcom/errors.hpp"
#include "tokcom/restoration.hpp"
#include "tokcom/wire.hpp"

using namespace tokcom;
using nlohmann::json;

namespace {

// Serves one connection at a time on a unix socket; `reply` maps each request
// to a response payload, or to nullopt to hang up without answering.
class FakeBridge {
 public:
  using Handler = std::function<std::optional<std::string>(const json&)>;

  explicit FakeBridge(Handler reply) : reply_(std::move(reply)) {
    path_ = (std::filesystem::temp_directory_path() /
             ("tokcom_bridge_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++) + ".sock"))
                .string();
    std::filesystem::remove(path_);
    listen_fd_ = ::socket(AF_UNIX, SOCK_STREAM, 0);
    sockaddr_un addr{};
    addr.sun_family = AF_UNIX;
    std::snprintf(addr.sun_path, sizeof addr.sun_path, "%s", path_.c_str());
    REQUIRE(::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0);
    REQUIRE(::listen(listen_fd_, 4) == 0);
    thread_ = std::thread([this] { serve(); });
  }

  ~FakeBridge() {
    stop_ = true;
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    thread_.join();
    std::filesystem::remove(path_);
  }

  std::string endpoint() const { return "unix:" + path_; }
  int requests() const { return requests_.load(); }

 private:
  void serve() {
    while (!stop_) {
      const int fd = ::accept(listen_fd_, nullptr, nullptr);
      if (fd < 0) return;
      while (auto frame = read_frame(fd, 2000)) {
        ++requests_;
        const auto out = reply_(json::parse(*frame));
        if (!out) break;
        write_frame(fd, *out, 2000);
      }
      ::close(fd);
    }
  }

  static inline std::atomic<int> counter_{0};
  Handler reply_;
  std::string path_;
  int listen_fd_ = -1;
  std::atomic<bool> stop_{false};
  std::atomic<int> requests_{0};
  std::thread thread_;
};

std::optional<std::string> fill_with(const json& req, int value) {
  json tokens = json::array();
  for (int t : req["tokens"]) tokens.push_back(t == -1 ? value : t);
  return json{{"v", 1}, {"id", req["id"]}, {"tokens", tokens}}.dump();
}

MaskedTokenSequence masked_example() {
  TokenSequence t(128);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<Token>(i);
  MaskSet m(128);
  m.insert(TokenSpan{8, 16});
  return apply_mask(t, m);
}

RestorerSpec external(const std::string& endpoint, FallbackPolicy fallback) {
  RestorerSpec spec = RestorerSpec::parse("external:" + endpoint);
  spec.fallback = fallback;
  spec.timeout_ms = 2000;
  return spec;
}

}  // namespace

TEST_CASE("frames are length prefixed big-endian") {
  int fds[2];
  REQUIRE(::socketpair(AF_UNIX, SOCK_STREAM, 0, fds) == 0);
  REQUIRE(write_frame(fds[0], "{\"a\":1}", 1000));
  unsigned char head[4];
  REQUIRE(::read(fds[1], head, 4) == 4);
  CHECK(head[0] == 0);
  CHECK(head[1] == 0);
  CHECK(head[2] == 0);
  CHECK(head[3] == 7);
  char body[7];
  REQUIRE(::read(fds[1], body, 7) == 7);
  CHECK(std::string(body, 7) == "{\"a\":1}");

  REQUIRE(write_frame(fds[0], "hello", 1000));
  CHECK(read_frame(fds[1], 1000) == std::optional<std::string>("hello"));
  CHECK_FALSE(read_frame(fds[1], 50).has_value());  // timeout

  const unsigned char huge[4] = {0xff, 0xff, 0xff, 0xff};
  REQUIRE(::write(fds[0], huge, 4) == 4);
  CHECK_FALSE(read_frame(fds[1], 1000).has_value());

  ::close(fds[0]);
  CHECK_FALSE(read_frame(fds[1], 1000).has_value());  // EOF
  ::close(fds[1]);
}

TEST_CASE("request and response validation") {
  const json req = make_restore_request(7, {1, -1, 3}, "a cat");
  CHECK(req["v"] == 1);
  CHECK(req["id"] == 7);
  CHECK(req["op"] == "restore");
  CHECK(req["tokens"] == json::array({1, -1, 3}));
  CHECK(req["text"] == "a cat");

  CHECK(parse_restore_response(json{{"v", 1}, {"id", 7}, {"tokens", {1, 2, 3}}}, 7, 3) ==
        TokenSequence{1, 2, 3});
  CHECK_THROWS_AS(parse_restore_response(json{{"v", 2}, {"id", 7}, {"tokens", {1, 2, 3}}}, 7, 3), BridgeError);
  CHECK_THROWS_AS(parse_restore_response(json{{"v", 1}, {"id", 8}, {"tokens", {1, 2, 3}}}, 7, 3), BridgeError);
  CHECK_THROWS_AS(parse_restore_response(json{{"v", 1}, {"id", 7}, {"err", "oom"}}, 7, 3), BridgeError);
  CHECK_THROWS_AS(parse_restore_response(json{{"v", 1}, {"id", 7}, {"tokens", {1, 2}}}, 7, 3), BridgeError);
  CHECK_THROWS_AS(parse_restore_response(json{{"v", 1}, {"id", 7}, {"tokens", {1, -1, 3}}}, 7, 3), BridgeError);
  CHECK_THROWS_AS(parse_restore_response(json{{"v", 1}, {"id", 7}, {"tokens", "x"}}, 7, 3), BridgeError);
}

TEST_CASE("external restorer over a unix socket") {
  FakeBridge bridge([](const json& req) { return fill_with(req, 4242); });
  auto restorer = make_restorer(external(bridge.endpoint(), FallbackPolicy::kNone));
  const MaskedTokenSequence masked = masked_example();
  RestoreContext ctx;
  ctx.text = "prompt";
  const TokenSequence out = restore(masked, *restorer, ctx);
  for (std::size_t i = 0; i < 128; ++i) CHECK(out[i] == (i >= 8 && i < 16 ? 4242u : i));
  CHECK(restorer->fallback_count() == 0);
  CHECK(restorer->label() == "external");

  const TokenSequence again = restore(masked, *restorer, ctx);
  CHECK(again == out);
  CHECK(bridge.requests() == 2);
}

TEST_CASE("empty mask returns the input without a call") {
  FakeBridge bridge([](const json& req) { return fill_with(req, 1); });
  auto restorer = make_restorer(external(bridge.endpoint(), FallbackPolicy::kNone));
  TokenSequence t(128, 9);
  const TokenSequence out = restore(apply_mask(t, MaskSet(128)), *restorer, RestoreContext{});
  CHECK(out == t);
  CHECK(bridge.requests() == 0);
}

TEST_CASE("bridge failures follow the fallback policy") {
  const MaskedTokenSequence masked = masked_example();

  SUBCASE("error reply without fallback") {
    FakeBridge bridge([](const json& req) { return json{{"v", 1}, {"id", req["id"]}, {"err", "busy"}}.dump(); });
    auto restorer = make_restorer(external(bridge.endpoint(), FallbackPolicy::kNone));
    CHECK_THROWS_AS(restore(masked, *restorer, RestoreContext{}), BridgeError);
  }
  SUBCASE("hang-up falls back to the decoder guess") {
    FakeBridge bridge([](const json&) { return std::nullopt; });
    auto restorer = make_restorer(external(bridge.endpoint(), FallbackPolicy::kPassthrough));
    CHECK(restore(masked, *restorer, RestoreContext{}) == masked.decoder_guess);
    CHECK(restore(masked, *restorer, RestoreContext{}) == masked.decoder_guess);
    CHECK(restorer->fallback_count() == 2);
  }
  SUBCASE("wrong id falls back to a constant") {
    FakeBridge bridge([](const json&) { return json{{"v", 1}, {"id", 999999}, {"tokens", json::array()}}.dump(); });
    RestorerSpec spec = external(bridge.endpoint(), FallbackPolicy::kConstant);
    spec.constant = 3;
    auto restorer = make_restorer(spec);
    const TokenSequence out = restore(masked, *restorer, RestoreContext{});
    CHECK(out[8] == 3);
    CHECK(out[0] == 0);
    CHECK(restorer->fallback_count() == 1);
  }
  SUBCASE("reply that rewrites unmasked tokens is rejected") {
    FakeBridge bridge([](const json& req) {
      json tokens = json::array();
      for (std::size_t i = 0; i < req["tokens"].size(); ++i) tokens.push_back(5);
      return json{{"v", 1}, {"id", req["id"]}, {"tokens", tokens}}.dump();
    });
    auto restorer = make_restorer(external(bridge.endpoint(), FallbackPolicy::kPassthrough));
    CHECK(restore(masked, *restorer, RestoreContext{}) == masked.decoder_guess);
    CHECK(restorer->fallback_count() == 1);
  }
  SUBCASE("nothing listening") {
    auto restorer = make_restorer(external("unix:/nonexistent/tokcom.sock", FallbackPolicy::kNone));
    CHECK_THROWS_AS(restore(masked, *restorer, RestoreContext{}), BridgeError);
  }
  SUBCASE("bad scheme") {
    auto restorer = make_restorer(external("carrier-pigeon:1", FallbackPolicy::kNone));
    CHECK_THROWS_AS(restore(masked, *restorer, RestoreContext{}), BridgeError);
  }
}

TEST_CASE("exec endpoint talks to a child process") {
  const std::string script = std::string(TOKCOM_TEST_DATA) + "/echo_bridge.py";
  auto restorer = make_restorer(external("exec:python3 " + script + " 77", FallbackPolicy::kNone));
  const MaskedTokenSequence masked = masked_example();
  const TokenSequence out = restore(masked, *restorer, RestoreContext{});
  for (std::size_t i = 0; i < 128; ++i) CHECK(out[i] == (i >= 8 && i < 16 ? 77u : i));
  CHECK(restore(masked, *restorer, RestoreContext{}) == out);
}

TEST_CASE("exec endpoint that exits immediately") {
  auto restorer = make_restorer(external("exec:true", FallbackPolicy::kNone));
  CHECK_THROWS_AS(restore(masked_example(), *restorer, RestoreContext{}), BridgeError);
}
