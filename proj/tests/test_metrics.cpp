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

#include <cmath>
#include <sstream>

#include "tokcom/metrics.hpp"
#include "tokcom/toy_tokenizer.hpp"

using namespace tokcom;

namespace {

TrialRecord record(double snr, const std::string& restorer, double ter, double psnr_db) {
  TrialRecord r;
  r.snr_db = snr;
  r.restorer = restorer;
  r.ter = ter;
  r.bler = ter;
  r.ber = ter / 2;
  r.psnr_db = psnr_db;
  r.masked_fraction = ter;
  return r;
}

}  // namespace

TEST_CASE("PSNR") {
  const RasterImage a = toy::synthetic_image(1);
  CHECK(std::isinf(psnr(a, a)));
  CHECK(psnr(RasterImage(4, 4, 0), RasterImage(4, 4, 255)) == doctest::Approx(0.0));

  const RasterImage b = toy::synthetic_image(2);
  double sse = 0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = double(a.pixels[i]) - double(b.pixels[i]);
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(a.pixels.size());
  CHECK(psnr(a, b) == doctest::Approx(10 * std::log10(255.0 * 255.0 / mse)));
  CHECK_THROWS(psnr(a, RasterImage(4, 4)));
}

TEST_CASE("token error rate") {
  CHECK(token_error_rate(TokenSequence{1, 2, 3, 4}, TokenSequence{1, 0, 3, 0}) == 0.5);
  CHECK(token_errors(TokenSequence{1, 2}, TokenSequence{1, 2}) == 0);
  CHECK_THROWS(token_error_rate(TokenSequence{1}, TokenSequence{1, 2}));
  CHECK_THROWS(token_error_rate(TokenSequence{}, TokenSequence{}));
}

TEST_CASE("mean and 95% interval") {
  const std::vector<double> v = {1, 2, 3, 4, 5};
  const MeanCi m = mean_ci95(v);
  CHECK(m.mean == doctest::Approx(3.0));
  CHECK(m.ci95 == doctest::Approx(1.96 * std::sqrt(2.5) / std::sqrt(5.0)));
  CHECK(m.n == 5);
  CHECK_FALSE(m.degenerate);
  const MeanCi one = mean_ci95(std::vector<double>{7});
  CHECK(one.degenerate);
  CHECK(one.ci95 == 0.0);
  CHECK_THROWS(mean_ci95(std::vector<double>{}));
}

TEST_CASE("aggregation groups in first-seen order") {
  const std::vector<TrialRecord> recs = {
      record(0, "passthrough", 0.5, 10), record(0, "passthrough", 0.25, INFINITY),
      record(1, "passthrough", 0.0, INFINITY), record(0, "oracle", 0.0, 20),
      record(1, "passthrough", 0.0, INFINITY)};
  const auto rows = aggregate(recs);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].snr_db == 0);
  CHECK(rows[0].restorer == "passthrough");
  CHECK(rows[0].trials == 2);
  CHECK(rows[0].ter.mean == doctest::Approx(0.375));
  REQUIRE(rows[0].psnr.has_value());
  CHECK(rows[0].psnr->mean == 10);
  CHECK(rows[0].psnr_inf_count == 1);
  CHECK(rows[1].snr_db == 1);
  CHECK_FALSE(rows[1].psnr.has_value());
  CHECK(rows[1].psnr_inf_count == 2);
  CHECK(rows[2].restorer == "oracle");
  CHECK_THROWS(aggregate(std::vector<TrialRecord>{}));
}

TEST_CASE("CSV layout") {
  const std::vector<TrialRecord> recs = {record(-1.5, "passthrough", 0.5, 10), record(-1.5, "passthrough", 0.5, 10),
                                         record(2, "marginal", 0, INFINITY)};
  std::ostringstream out;
  write_sweep_csv(out, aggregate(recs), 42, "abc123");
  std::istringstream lines(out.str());
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header == kSweepCsvHeader);
  CHECK(row1 == "-1.500,passthrough,2,0.500000,0.000000,0.500000,0.250000,10.0000,0,0.500000,,,42,abc123");
  CHECK(row2 == "2.000,marginal,1,0.000000,0.000000,0.000000,0.000000,,1,0.000000,,,42,abc123");
}
