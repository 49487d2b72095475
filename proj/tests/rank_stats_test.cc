/*
 * Copyright 2026 The SelectorLab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "selectorlab/error.h"
#include "selectorlab/random.h"
#include "selectorlab/rank_stats.h"

namespace selectorlab {
namespace {

int sign(double v) { return (v > 0) - (v < 0); }

double brute_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  double concordant = 0, discordant = 0, tx = 0, ty = 0, pairs = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int a = sign(x[i] - x[j]);
      const int b = sign(y[i] - y[j]);
      pairs += 1;
      if (a == 0) tx += 1;
      if (b == 0) ty += 1;
      if (a * b > 0) concordant += 1;
      if (a * b < 0) discordant += 1;
    }
  }
  return (concordant - discordant) / std::sqrt((pairs - tx) * (pairs - ty));
}

double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double less = 0, equal = 0;
      for (double w : v) {
        less += w < v[i];
        equal += w == v[i];
      }
      r[i] = less + (equal + 1) / 2;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

const std::vector<double> kX{1, 2, 2, 3, 5, 4, 4, 7, 0, 1};
const std::vector<double> kY{2, 1, 3, 3, 6, 5, 4, 8, 1, 0};

TEST(AverageRanks, TiesShareMean) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 10, 5}),
            (std::vector<double>{2.5, 4, 2.5, 1}));
}

TEST(Kendall, KnownValueWithTies) {
  EXPECT_NEAR(kendall_tau(kX, kY), 0.847117449603021, 1e-14);
}

TEST(Spearman, KnownValueWithTies) {
  EXPECT_NEAR(spearman_rho(kX, kY), 0.9230812927028521, 1e-14);
}

TEST(RankStats, PerfectAndReversed) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{-4, -3, -2, -1};
  const std::vector<double> r{4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(kendall_tau(a, b), 1.0);
  EXPECT_DOUBLE_EQ(spearman_rho(a, r), -1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(a, r), -1.0);
}

TEST(RankStats, ConstantInputRejected) {
  const std::vector<double> a{1, 2, 3};
  const std::vector<double> c{2, 2, 2};
  EXPECT_THROW(kendall_tau(a, c), ValidationError);
  EXPECT_THROW(spearman_rho(c, a), ValidationError);
}

TEST(RankStats, MatchBruteForceOnRandomTiedData) {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng.uniform_index(300);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.uniform_index(12));
      y[i] = x[i] + static_cast<double>(rng.uniform_index(6));
    }
    x[0] = 0;
    x[1] = 20;
    y[0] = 0;
    y[1] = 30;
    EXPECT_NEAR(kendall_tau(x, y), brute_tau_b(x, y), 1e-12);
    EXPECT_NEAR(spearman_rho(x, y), brute_spearman(x, y), 1e-12);
  }
}

}  // namespace
}  // namespace selectorlab
