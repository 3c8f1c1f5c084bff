/**
 * \file test_model.cpp
 *
 * \brief Cost and utility primitives: frozen hand-evaluated values,
 *        convexity of the adjusted cost, saturation bounds.
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
#include <stdexcept>

#include <doctest.h>

#include "coinvest/model.hpp"
#include "coinvest/rng.hpp"

using namespace coinvest;

namespace {

CostParams reference_cost_params() {
  CostParams p;
  p.d = 10.94;
  p.kappa = 0.6 * 10.94;
  p.gamma = 2000.0;
  p.d_prime = 0.0225;
  p.delta_hours = 8760.0;
  return p;
}

// Intervention-adjusted cost of the convexity argument: equals cost()
// except that the fixed charge is also applied at the no-change point.
double adjusted_cost(double c_new, double c_prev, const CostParams& p) {
  const double base = cost(c_new, c_prev, p);
  return c_new == c_prev ? base + p.gamma : base;
}

}  // namespace

TEST_CASE("cost matches hand-evaluated values") {
  const CostParams p = reference_cost_params();

  CHECK(cost(0.0, 0.0, p) == 0.0);

  // 100 -> 100: maintenance only, 0.0225 * 8760 * 100.
  CHECK(cost(100.0, 100.0, p) == doctest::Approx(19710.0).epsilon(1e-12));

  // 100 -> 150: 10.94*50 + 2000 + 197.1*150.
  CHECK(cost(150.0, 100.0, p) == doctest::Approx(32112.0).epsilon(1e-12));

  // 100 -> 50: -6.564*50 + 2000 + 197.1*50.
  CHECK(cost(50.0, 100.0, p) == doctest::Approx(11526.8).epsilon(1e-12));
}

TEST_CASE("cost rejects negative capacities") {
  const CostParams p = reference_cost_params();
  CHECK_THROWS_AS(cost(-1.0, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(cost(0.0, -1.0, p), std::domain_error);
}

TEST_CASE("intervention charge keys on decision identity") {
  const CostParams p = reference_cost_params();
  const double c = 123.456;
  CHECK(cost(c, c, p) == p.maintenance_rate() * c);
  CHECK(cost(c + 1e-12, c, p) > p.gamma);  // any actual change pays gamma
}

TEST_CASE("adjusted cost is convex when kappa <= d") {
  const CostParams p = reference_cost_params();
  const double c_prev = 100.0;
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double c1 = 400.0 * uniform01(7, StreamPurpose::TestScratch, i, 1);
    const double c2 = 400.0 * uniform01(7, StreamPurpose::TestScratch, i, 2);
    const double lam = uniform01(7, StreamPurpose::TestScratch, i, 3);
    const double mid = lam * c1 + (1.0 - lam) * c2;
    const double lhs =
        lam * adjusted_cost(c1, c_prev, p) + (1.0 - lam) * adjusted_cost(c2, c_prev, p);
    const double rhs = adjusted_cost(mid, c_prev, p);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (lhs < rhs - 1e-9 * scale) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("kappa > d breaks convexity and the Jensen scan finds it") {
  CostParams p = reference_cost_params();
  p.kappa = 1.5 * p.d;
  const double c_prev = 100.0;
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    const double c1 = 400.0 * uniform01(8, StreamPurpose::TestScratch, i, 1);
    const double c2 = 400.0 * uniform01(8, StreamPurpose::TestScratch, i, 2);
    const double lam = uniform01(8, StreamPurpose::TestScratch, i, 3);
    const double mid = lam * c1 + (1.0 - lam) * c2;
    const double lhs =
        lam * adjusted_cost(c1, c_prev, p) + (1.0 - lam) * adjusted_cost(c2, c_prev, p);
    const double rhs = adjusted_cost(mid, c_prev, p);
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    if (lhs < rhs - 1e-9 * scale) ++violations;
  }
  CHECK(violations > 0);
}

TEST_CASE("utility matches hand-evaluated values") {
  CHECK(utility(6e-6, 0.03, 1e9, 0.0) == 0.0);
  CHECK(utility(6e-6, 0.03, 0.0, 50.0) == 0.0);
  // 6000 * (1 - e^-3)
  const double expected = 6000.0 * (1.0 - std::exp(-3.0));
  CHECK(utility(6e-6, 0.03, 1e9, 100.0) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(utility(6e-6, 0.03, 1e9, 100.0) == doctest::Approx(5701.28).epsilon(1e-5));
}

TEST_CASE("utility is monotone in h and bounded by beta*load") {
  const double beta = 6e-6, xi = 0.03, load = 2e9;
  double prev = -1.0;
  for (int i = 0; i <= 400; ++i) {
    const double h = i * 2.5;
    const double u = utility(beta, xi, load, h);
    CHECK(u >= prev);
    CHECK(u < beta * load);
    prev = u;
  }
}

TEST_CASE("utility rejects negative allocations") {
  CHECK_THROWS_AS(utility(6e-6, 0.03, 1.0, -0.1), std::domain_error);
}

TEST_CASE("scenario validation catches structural mistakes") {
  Scenario s = default_scenario();
  CHECK_NOTHROW(s.validate());

  Scenario bad = s;
  bad.players[2].id.index = 5;  // not contiguous
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = s;
  bad.cost.kappa = bad.cost.d * 1.01;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = s;
  bad.players[1].load.traffic_level.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("time grid scale factor tiles the interval") {
  TimeGrid g;
  g.slots_per_epoch = 168;
  g.rho_hours = 1.0;
  g.delta_hours = 8760.0;
  CHECK(g.slots_per_epoch * g.rho_hours * g.scale_factor() ==
        doctest::Approx(8760.0).epsilon(1e-12));
}
