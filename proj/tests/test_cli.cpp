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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tokcom/framing.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(TOKCOM_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / "tokcom_cli_test";
  TempDir() {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("sweep writes CSV and sidecars") {
  TempDir tmp;
  REQUIRE(run("sweep --snr=-1:1:1 --trials 4 --seed 5 --out " + (tmp / "a.csv")) == 0);
  const std::string csv = slurp(tmp / "a.csv");
  CHECK(csv.rfind("snr_db,restorer,trials,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(fs::exists(tmp / "a.csv.meta.json"));
  CHECK(fs::exists(tmp / "a.csv.series.json"));
}

TEST_CASE("identical runs give identical bytes across worker counts") {
  TempDir tmp;
  REQUIRE(run("sweep --snr=-2:2:2 --trials 6 --seed 9 --workers 1 --out " + (tmp / "w1.csv")) == 0);
  REQUIRE(run("sweep --snr=-2:2:2 --trials 6 --seed 9 --workers 3 --out " + (tmp / "w3.csv")) == 0);
  CHECK(slurp(tmp / "w1.csv") == slurp(tmp / "w3.csv"));
  CHECK(slurp(tmp / "w1.csv.meta.json") == slurp(tmp / "w3.csv.meta.json"));
}

TEST_CASE("config file with flag overrides") {
  TempDir tmp;
  std::ofstream(tmp / "cfg.json") << R"({"snr": "inf", "trials": 3, "restorer": "marginal", "seed": 4})";
  REQUIRE(run("sweep --config " + (tmp / "cfg.json") + " --trials 2 --out " + (tmp / "c.csv")) == 0);
  const std::string csv = slurp(tmp / "c.csv");
  CHECK(csv.find("inf,marginal,2,") != std::string::npos);
  CHECK(csv.find(",4,") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("sweep --trials 0") == 2);
  CHECK(run("sweep --restorer bogus --trials 1") == 2);
  CHECK(run("sweep --snr=9:1:1") == 2);
  CHECK(run("sweep --snr=-15 --trials 1 --restorer external:unix:/nonexistent/x.sock --fallback none") == 3);
  CHECK(run("sweep --snr=-15 --trials 1 --restorer external:unix:/nonexistent/x.sock --fallback passthrough") == 0);
  CHECK(run("frobnicate") != 0);
}

TEST_CASE("encode and decode round trip") {
  TempDir tmp;
  tokcom::TokenSequence seq(128);
  for (std::size_t i = 0; i < seq.size(); ++i) seq[i] = static_cast<tokcom::Token>(i * 61 % 8192);
  tokcom::save_tokens(tmp / "in.txt", seq);
  REQUIRE(run("encode " + (tmp / "in.txt") + " --out " + (tmp / "codewords.hex")) == 0);
  const std::string hex = slurp(tmp / "codewords.hex");
  CHECK(std::count(hex.begin(), hex.end(), '\n') == 16);
  CHECK(hex.find('\n') == 64);
  REQUIRE(run("decode " + (tmp / "in.txt") + " --snr inf --out " + (tmp / "out.bin") + " --dump-symbols " +
              (tmp / "sym.csv")) == 0);
  CHECK(tokcom::load_tokens(tmp / "out.bin") == seq);
  const std::string sym = slurp(tmp / "sym.csv");
  CHECK(std::count(sym.begin(), sym.end(), '\n') == 2049);
}

TEST_CASE("conformance against the committed fixture") {
  CHECK(run("conformance --check " + std::string(TOKCOM_TEST_DATA) + "/golden_vectors.txt") == 0);
  TempDir tmp;
  REQUIRE(run("conformance --write " + (tmp / "g.txt") + " --count 2") == 0);
  CHECK(run("conformance --check " + (tmp / "g.txt")) == 0);
  std::string g = slurp(tmp / "g.txt");
  const auto pos = g.find("codeword 256 ");
  g[pos + 13] = g[pos + 13] == '0' ? '1' : '0';
  std::ofstream(tmp / "bad.txt") << g;
  CHECK(run("conformance --check " + (tmp / "bad.txt")) == 1);
}

TEST_CASE("grid subcommand") {
  TempDir tmp;
  REQUIRE(run("grid --trials 3 --image-ter 0,0.5 --text-corruption 0 --out " + (tmp / "g.csv")) == 0);
  const std::string csv = slurp(tmp / "g.csv");
  CHECK(csv.rfind("image_ter_level,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
