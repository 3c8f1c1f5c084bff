/**
 * \file bench_parallel.cpp
 *
 * \brief Benchmarks the OpenMP kernels against the serial reference and
 *        verifies that both produce bitwise-identical results.
 *
 * <hr/>
 *
 * Copyright 2026 The coinvest authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <chrono>
#include <cstdio>
#include <vector>

#include "coinvest/dynamics.hpp"
#include "coinvest/harness.hpp"
#include "coinvest/loadgen.hpp"
#include "coinvest/parallel.hpp"
#include "coinvest/planner.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool same_bits(const std::vector<coinvest::PlanResult>& a,
               const std::vector<coinvest::PlanResult>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].capacity != b[i].capacity || a[i].value != b[i].value ||
        a[i].allocations != b[i].allocations) {
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = argc > 1 ? std::atoi(argv[1]) : coinvest::max_threads();
  coinvest::Scenario scenario = coinvest::default_scenario();
  scenario.grid.slots_per_epoch = 336;

  const coinvest::LoadMatrix loads = coinvest::generate_loads(scenario, 1);

  std::printf("benchmark: epoch coalition-table build (%d SPs, %d slots)\n",
              scenario.num_sps(), scenario.grid.slots_per_epoch);

  auto t0 = clock_type::now();
  const coinvest::EpochValueTable serial = coinvest::evaluate_all_coalitions(
      scenario, loads, 1, 0.0, coinvest::Exec::Serial);
  const double t_serial = seconds_since(t0);
  std::printf("  serial reference : %.3f s\n", t_serial);

  coinvest::set_threads(threads);
  t0 = clock_type::now();
  const coinvest::EpochValueTable parallel = coinvest::evaluate_all_coalitions(
      scenario, loads, 1, 0.0, coinvest::Exec::OpenMP);
  const double t_parallel = seconds_since(t0);
  std::printf("  openmp (%d threads): %.3f s  speedup %.2fx\n", threads,
              t_parallel, t_serial / t_parallel);

  if (!same_bits(serial.by_sp_mask, parallel.by_sp_mask)) {
    std::printf("  MISMATCH: parallel results differ from serial reference\n");
    return 1;
  }
  std::printf("  results bitwise identical\n");

  std::printf("benchmark: single-plan slot kernel\n");
  t0 = clock_type::now();
  const coinvest::PlanResult p_serial = coinvest::optimize_capacity(
      scenario, loads, coinvest::full_mask(scenario.num_players()), 0.0,
      coinvest::Exec::Serial);
  std::printf("  serial reference : %.3f s\n", seconds_since(t0));
  t0 = clock_type::now();
  const coinvest::PlanResult p_parallel = coinvest::optimize_capacity(
      scenario, loads, coinvest::full_mask(scenario.num_players()), 0.0,
      coinvest::Exec::OpenMP);
  std::printf("  openmp (%d threads): %.3f s\n", threads, seconds_since(t0));
  if (p_serial.capacity != p_parallel.capacity ||
      p_serial.value != p_parallel.value ||
      p_serial.allocations != p_parallel.allocations) {
    std::printf("  MISMATCH: parallel plan differs from serial reference\n");
    return 1;
  }
  std::printf("  results bitwise identical\n");

  std::printf("benchmark: dynamic-scheme run\n");
  scenario.grid.slots_per_epoch = 168;
  t0 = clock_type::now();
  const coinvest::DynamicRun d_serial =
      coinvest::run_dynamic(scenario, coinvest::Exec::Serial);
  std::printf("  serial reference : %.3f s\n", seconds_since(t0));
  t0 = clock_type::now();
  const coinvest::DynamicRun d_parallel =
      coinvest::run_dynamic(scenario, coinvest::Exec::OpenMP);
  std::printf("  openmp (%d threads): %.3f s\n", threads, seconds_since(t0));
  if (d_serial.v_dyn != d_parallel.v_dyn) {
    std::printf("  MISMATCH: parallel v_dyn differs from serial reference\n");
    return 1;
  }
  std::printf("  results bitwise identical (v_dyn %.6f)\n", d_serial.v_dyn);
  return 0;
}
