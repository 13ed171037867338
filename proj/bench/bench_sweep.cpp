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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <omp.h>

#include "tokcom/sweep.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string csv_of(const tokcom::SweepReport& r) {
  std::ostringstream out;
  tokcom::write_sweep_csv(out, r.rows, 1, "bench");
  return out.str();
}

}  // namespace

int main(int argc, char** argv) {
  tokcom::RunConfig cfg;
  cfg.snr_points = {-2, 0, 2};
  cfg.trials_per_point = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 20;

  auto t0 = Clock::now();
  const auto serial = tokcom::run_sweep_serial(cfg);
  const double serial_s = seconds_since(t0);

  t0 = Clock::now();
  const auto parallel = tokcom::run_sweep(cfg);
  const double parallel_s = seconds_since(t0);

  const std::size_t trials = cfg.snr_points.size() * cfg.trials_per_point;
  std::printf("trials         %zu\n", trials);
  std::printf("threads        %d\n", omp_get_max_threads());
  std::printf("serial         %.3f s  (%.1f trials/s)\n", serial_s, trials / serial_s);
  std::printf("openmp         %.3f s  (%.1f trials/s)\n", parallel_s, trials / parallel_s);
  std::printf("speedup        %.2fx\n", serial_s / parallel_s);
  std::printf("identical csv  %s\n", csv_of(serial) == csv_of(parallel) ? "yes" : "NO");
  return csv_of(serial) == csv_of(parallel) ? 0 : 1;
}
