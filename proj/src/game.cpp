/**
 * \file game.cpp
 *
 * \brief Shapley allocation and stability checks.
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

#include "coinvest/game.hpp"

#include <cmath>
#include <stdexcept>

#include "coinvest/model.hpp"
#include "coinvest/rng.hpp"

namespace coinvest {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

}  // namespace

Allocation shapley(Mask coalition, int num_players, const ValueFn& value_fn) {
  Allocation out;
  out.coalition = coalition;
  out.payoffs.assign(static_cast<std::size_t>(num_players), 0.0);
  if (coalition == 0) {
    return out;
  }
  const std::vector<int> members = mask_members(coalition);
  const int s = static_cast<int>(members.size());
  if (s > 20) {
    throw std::invalid_argument("shapley: coalition too large to enumerate");
  }

  // |T|! (s-|T|-1)! / s! == 1 / (s * C(s-1, |T|)), exact in double here.
  std::vector<double> weight(static_cast<std::size_t>(s), 0.0);
  for (int t = 0; t < s; ++t) {
    weight[static_cast<std::size_t>(t)] = 1.0 / (s * binomial(s - 1, t));
  }

  const std::size_t n_sub = std::size_t{1} << s;
  std::vector<double> v(n_sub, 0.0);
  for (std::size_t j = 0; j < n_sub; ++j) {
    Mask m = 0;
    for (int p = 0; p < s; ++p) {
      if (j & (std::size_t{1} << p)) m |= player_bit(members[static_cast<std::size_t>(p)]);
    }
    v[j] = (j == 0) ? 0.0 : value_fn(m);
  }

  for (std::size_t j = 0; j < n_sub; ++j) {
    const int t = std::popcount(j);
    for (int p = 0; p < s; ++p) {
      const std::size_t bit = std::size_t{1} << p;
      if (j & bit) continue;
      out.payoffs[static_cast<std::size_t>(members[static_cast<std::size_t>(p)])] +=
          weight[static_cast<std::size_t>(t)] * (v[j | bit] - v[j]);
    }
  }
  out.value = v[n_sub - 1];
  return out;
}

StabilityReport check_stability(const Allocation& alloc, const ValueFn& value_fn,
                                std::span<const double> v_out) {
  StabilityReport rep;
  const Mask S = alloc.coalition;
  const std::vector<int> members = mask_members(S);
  const int s = static_cast<int>(members.size());
  const double tol = tol_for(alloc.value);
  rep.sir_slack.assign(v_out.size(), 0.0);

  if (s == 0) {
    return rep;
  }

  // CR: every subset must be weakly covered by the allocation.
  const std::size_t n_sub = std::size_t{1} << s;
  bool first = true;
  double payoff_all = 0.0;
  for (std::size_t j = 1; j < n_sub; ++j) {
    Mask m = 0;
    double x_sum = 0.0;
    for (int p = 0; p < s; ++p) {
      if (j & (std::size_t{1} << p)) {
        const int player = members[static_cast<std::size_t>(p)];
        m |= player_bit(player);
        x_sum += alloc.payoff(player);
      }
    }
    const double slack = x_sum - value_fn(m);
    if (first || slack < rep.worst_cr_slack) {
      rep.worst_cr_slack = slack;
      rep.worst_cr_subset = m;
      first = false;
    }
    if (j == n_sub - 1) payoff_all = x_sum;
  }
  rep.cr_ok = rep.worst_cr_slack >= -tol;

  // GR: full value distributed.
  rep.gr_gap = payoff_all - value_fn(S);
  rep.gr_ok = std::abs(rep.gr_gap) <= tol;

  // SIR: each member beats their outside opportunity.
  for (int player : members) {
    const double slack =
        alloc.payoff(player) - v_out[static_cast<std::size_t>(player)];
    rep.sir_slack[static_cast<std::size_t>(player)] = slack;
    if (slack < -tol) rep.sir_ok = false;
  }

  // Supermodularity scan, diagnostic only. Exhaustive for small
  // coalitions, deterministically sampled otherwise.
  auto probe = [&](Mask small, Mask large, int j) {
    const Mask jb = player_bit(j);
    const double slack = (value_fn(large | jb) - value_fn(large)) -
                         (value_fn(small | jb) - value_fn(small));
    if (slack < rep.worst_sm_slack) {
      rep.worst_sm_slack = slack;
      rep.worst_sm_small = small;
      rep.worst_sm_large = large;
      rep.worst_sm_player = j;
    }
  };
  if (s <= 6) {
    for (int j : members) {
      const Mask rest = S & ~player_bit(j);
      // All nested pairs small <= large within rest.
      for (Mask large = rest;; large = (large - 1) & rest) {
        for (Mask small = large;; small = (small - 1) & large) {
          probe(small, large, j);
          if (small == 0) break;
        }
        if (large == 0) break;
      }
    }
  } else {
    for (std::uint64_t k = 0; k < 4096; ++k) {
      const std::uint64_t w1 = stream_word(0x5eedULL, StreamPurpose::TestScratch,
                                           k, 1);
      const std::uint64_t w2 = stream_word(0x5eedULL, StreamPurpose::TestScratch,
                                           k, 2);
      const int j = members[static_cast<std::size_t>(
          w1 % static_cast<std::uint64_t>(s))];
      const Mask rest = S & ~player_bit(j);
      const Mask large = static_cast<Mask>(w1 >> 8) & rest;
      const Mask small = static_cast<Mask>(w2) & large;
      probe(small, large, j);
    }
  }
  rep.supermodular_ok = rep.worst_sm_slack >= -tol;
  return rep;
}

}  // namespace coinvest
