/**
 * \file test_parallel.cpp
 *
 * \brief OpenMP kernels against the serial reference: results must be
 *        bitwise identical for any thread count.
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

#include <vector>

#include <doctest.h>

#include "coinvest/dynamics.hpp"
#include "coinvest/loadgen.hpp"
#include "coinvest/parallel.hpp"
#include "coinvest/planner.hpp"
#include "test_scenarios.hpp"

using namespace coinvest;
using coinvest::testing::small_scenario;

TEST_CASE("for_each_index covers every index exactly once") {
  for (Exec exec : {Exec::Serial, Exec::OpenMP}) {
    std::vector<int> hits(1000, 0);
    for_each_index(hits.size(), exec, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("coalition table is bitwise identical across thread counts") {
  const Scenario s = small_scenario(3, 1, 24, 80);
  const LoadMatrix loads = generate_loads(s, 1);
  const EpochValueTable reference =
      evaluate_all_coalitions(s, loads, 1, 0.0, Exec::Serial);
  for (int threads : {1, 2, 7}) {
    set_threads(threads);
    const EpochValueTable parallel =
        evaluate_all_coalitions(s, loads, 1, 0.0, Exec::OpenMP);
    REQUIRE(parallel.by_sp_mask.size() == reference.by_sp_mask.size());
    for (std::size_t m = 0; m < reference.by_sp_mask.size(); ++m) {
      CHECK(parallel.by_sp_mask[m].value == reference.by_sp_mask[m].value);
      CHECK(parallel.by_sp_mask[m].capacity ==
            reference.by_sp_mask[m].capacity);
      CHECK(parallel.by_sp_mask[m].allocations ==
            reference.by_sp_mask[m].allocations);
    }
  }
}

TEST_CASE("slot kernel is bitwise identical across thread counts") {
  const Scenario s = small_scenario(3, 1, 48, 81);
  const LoadMatrix loads = generate_loads(s, 1);
  const PlanResult reference =
      optimize_capacity(s, loads, full_mask(s.num_players()), 7.0,
                        Exec::Serial);
  for (int threads : {2, 5}) {
    set_threads(threads);
    const PlanResult parallel = optimize_capacity(
        s, loads, full_mask(s.num_players()), 7.0, Exec::OpenMP);
    CHECK(parallel.capacity == reference.capacity);
    CHECK(parallel.value == reference.value);
    CHECK(parallel.gross_utility == reference.gross_utility);
    CHECK(parallel.allocations == reference.allocations);
  }
}

TEST_CASE("dynamic runs are bitwise identical across thread counts") {
  const Scenario s = small_scenario(2, 3, 8, 82, 20.0, 150.0);
  const DynamicRun reference = run_dynamic(s, Exec::Serial);
  for (int threads : {2, 3}) {
    set_threads(threads);
    const DynamicRun parallel = run_dynamic(s, Exec::OpenMP);
    CHECK(parallel.v_dyn == reference.v_dyn);
    CHECK(parallel.ledger_total == reference.ledger_total);
    REQUIRE(parallel.epochs.size() == reference.epochs.size());
    for (std::size_t k = 0; k < reference.epochs.size(); ++k) {
      CHECK(parallel.epochs[k].coalition == reference.epochs[k].coalition);
      CHECK(parallel.epochs[k].c_next == reference.epochs[k].c_next);
      CHECK(parallel.epochs[k].net_payoffs == reference.epochs[k].net_payoffs);
      CHECK(parallel.epochs[k].transfers.epsilon ==
            reference.epochs[k].transfers.epsilon);
    }
  }
}
