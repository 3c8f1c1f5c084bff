/**
 * \file test_loadgen.cpp
 *
 * \brief Load generation and opportunity-cost sampling.
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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "coinvest/loadgen.hpp"
#include "coinvest/model.hpp"

using namespace coinvest;

namespace {

Scenario tiny_scenario(int epochs, int slots) {
  Scenario s = default_scenario();
  s.grid.epochs = epochs;
  s.grid.slots_per_epoch = slots;
  for (std::size_t i = 1; i < s.players.size(); ++i) {
    s.players[i].load.traffic_level.assign(static_cast<std::size_t>(epochs),
                                           1.0);
  }
  return s;
}

}  // namespace

TEST_CASE("diurnal baseline: constant and single-harmonic cases") {
  LoadParams lp;
  lp.diurnal_a0 = 1.0;
  CHECK(diurnal_baseline(lp, 0.0) == 1.0);
  CHECK(diurnal_baseline(lp, 17.3) == 1.0);

  lp.diurnal_a0 = 0.0;
  lp.harmonics = {Harmonic{1.0, 0.0}};
  CHECK(diurnal_baseline(lp, 6.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diurnal baseline matches an independent trigonometric sum") {
  LoadParams lp;
  lp.diurnal_a0 = 2.0;
  lp.harmonics = {Harmonic{0.5, 3.0}, Harmonic{0.25, 7.0}};
  const double hour = 12.0;
  // Independent high-precision evaluation of the two-harmonic sum.
  const long double pi = std::numbers::pi_v<long double>;
  long double expected = 2.0L;
  expected += 0.5L * std::sin(2.0L * pi * 1.0L * (hour - 3.0L) / 24.0L);
  expected += 0.25L * std::sin(2.0L * pi * 2.0L * (hour - 7.0L) / 24.0L);
  CHECK(diurnal_baseline(lp, hour) ==
        doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
}

TEST_CASE("zero traffic level produces an all-zero row") {
  Scenario s = tiny_scenario(2, 24);
  s.players[1].load.traffic_level = {0.0, 1.0};
  const LoadMatrix m = generate_loads(s, 1);
  CHECK(m.row_sum(1) == 0.0);
  CHECK(generate_loads(s, 2).row_sum(1) > 0.0);
}

TEST_CASE("constant components multiply through") {
  Scenario s = tiny_scenario(1, 24);
  const double c = 3.5;
  s.players[1].load.traffic_level = {2.0};
  s.players[1].load.diurnal_a0 = c;
  s.players[1].load.harmonics.clear();
  const LoadMatrix m = generate_loads(s, 1);
  for (int t = 0; t < m.num_slots; ++t) {
    CHECK(m.at(1, t) == doctest::Approx(2.0 * c).epsilon(1e-12));
  }
}

TEST_CASE("default scenario dips in epoch 3") {
  const Scenario s = default_scenario();
  const LoadMatrix e2 = generate_loads(s, 2);
  const LoadMatrix e3 = generate_loads(s, 3);
  const LoadMatrix e4 = generate_loads(s, 4);
  double t2 = 0.0, t3 = 0.0, t4 = 0.0;
  for (int i = 1; i <= s.num_sps(); ++i) {
    CHECK(e3.row_sum(i) < e2.row_sum(i));
    CHECK(e3.row_sum(i) < e4.row_sum(i));
    t2 += e2.row_sum(i);
    t3 += e3.row_sum(i);
    t4 += e4.row_sum(i);
  }
  CHECK(t3 < t2);
  CHECK(t3 < t4);
}

TEST_CASE("SP5 has the lowest demand") {
  const Scenario s = default_scenario();
  for (int k = 1; k <= s.grid.epochs; ++k) {
    const LoadMatrix m = generate_loads(s, k);
    for (int i = 1; i <= 4; ++i) {
      CHECK(m.row_sum(5) < m.row_sum(i));
    }
  }
}

TEST_CASE("loads never go negative, clamps are counted") {
  Scenario s = tiny_scenario(1, 48);
  s.players[1].load.diurnal_a0 = 0.1;
  s.players[1].load.harmonics = {Harmonic{1.0, 0.0}};  // dips below zero
  const LoadMatrix m = generate_loads(s, 1);
  for (int t = 0; t < m.num_slots; ++t) {
    CHECK(m.at(1, t) >= 0.0);
  }
  CHECK(m.clamp_count > 0);
}

TEST_CASE("optional traffic noise varies per slot and reproduces") {
  Scenario s = tiny_scenario(1, 48);
  s.players[1].load.harmonics.clear();
  s.players[1].load.noise_amplitude = 0.2;
  const LoadMatrix a = generate_loads(s, 1);
  const LoadMatrix b = generate_loads(s, 1);
  CHECK(a.values == b.values);
  bool varies = false;
  for (int t = 1; t < a.num_slots; ++t) {
    if (a.at(1, t) != a.at(1, 0)) varies = true;
  }
  CHECK(varies);

  s.players[1].load.noise_amplitude = 0.0;  // off by default: flat again
  const LoadMatrix c = generate_loads(s, 1);
  for (int t = 1; t < c.num_slots; ++t) {
    CHECK(c.at(1, t) == c.at(1, 0));
  }
}

TEST_CASE("InP opportunity cost pinned to zero") {
  const Scenario s = default_scenario();
  for (int k = 1; k <= s.grid.epochs; ++k) {
    CHECK(sample_opportunity_costs(s, k)[0] == 0.0);
  }
}

TEST_CASE("degenerate uniform draws the constant") {
  Scenario s = default_scenario();
  s.players[2].opportunity = OpportunityCostModel{5000.0, 5000.0, false};
  for (int k = 1; k <= s.grid.epochs; ++k) {
    CHECK(sample_opportunity_costs(s, k)[2] == 5000.0);
  }
}

TEST_CASE("uniform draws have the right mean over many epochs") {
  Scenario s = tiny_scenario(10000, 1);
  s.players[1].opportunity = OpportunityCostModel{100000.0, 200000.0, false};
  double sum = 0.0;
  for (int k = 1; k <= 10000; ++k) {
    const double v = sample_opportunity_costs(s, k)[1];
    CHECK(v >= 100000.0);
    CHECK(v <= 200000.0);
    sum += v;
  }
  const double mean = sum / 10000.0;
  CHECK(mean > 147000.0);
  CHECK(mean < 153000.0);
}

TEST_CASE("streams are independent across players and epochs") {
  Scenario s = default_scenario();
  const double sp1_e1 = sample_opportunity_costs(s, 1)[1];
  const double sp1_e2 = sample_opportunity_costs(s, 2)[1];
  const double sp2_e1 = sample_opportunity_costs(s, 1)[2];
  CHECK(sp1_e1 != sp1_e2);
  CHECK(sp1_e1 != sp2_e1);

  // Perturbing an unrelated player's parameters leaves the stream alone.
  Scenario t = s;
  t.players[3].opportunity.upper += 1000.0;
  CHECK(sample_opportunity_costs(t, 1)[1] == sp1_e1);
}

TEST_CASE("equal seeds reproduce loads and draws bit for bit") {
  const Scenario a = default_scenario();
  const Scenario b = default_scenario();
  for (int k = 1; k <= a.grid.epochs; ++k) {
    CHECK(generate_loads(a, k).values == generate_loads(b, k).values);
    CHECK(sample_opportunity_costs(a, k) == sample_opportunity_costs(b, k));
  }
  Scenario c = default_scenario();
  c.seed += 1;
  CHECK(sample_opportunity_costs(a, 1) != sample_opportunity_costs(c, 1));
}
