/*
Copyright 2026 The hyperboot Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "hyperboot/branching.hpp"
#include "hyperboot/error.hpp"

using namespace hyperboot;
using doctest::Approx;

namespace {

OffspringDistribution bernoulli(double q) { return OffspringDistribution({{1, q}}); }
OffspringDistribution binomial3(double q) { return OffspringDistribution({{1, q}, {1, q}, {1, q}}); }

}  // namespace

TEST_CASE("offspring pmf") {
  auto b = bernoulli(0.3);
  CHECK(offspring_pmf(b, 0) == Approx(0.7));
  CHECK(offspring_pmf(b, 1) == Approx(0.3));
  CHECK(offspring_pmf(b, 2) == 0.0);
  OffspringDistribution two({{1, 0.5}, {1, 0.5}});
  CHECK(offspring_pmf(two, 1) == 0.5);
  OffspringDistribution w({{2, 0.3}, {1, 0.6}, {3, 0.1}});
  CHECK(w.mu() == Approx(1.5));
  CHECK(w.M() == 3);
  auto table = offspring_pmf_table(w);
  CHECK(table.size() == 7);
  CHECK(std::accumulate(table.begin(), table.end(), 0.0) == Approx(1.0).epsilon(1e-15));
  // P[X = 3]: (2 and 1) or (3 alone)
  CHECK(table[3] == Approx(0.3 * 0.6 * 0.9 + 0.7 * 0.4 * 0.1).epsilon(1e-15));
  CHECK_THROWS_AS(OffspringDistribution({{0, 0.5}}), Error);
  CHECK_THROWS_AS(OffspringDistribution({{1, 1.5}}), Error);
}

TEST_CASE("total progeny by dynamic programming") {
  GWProcess none{OffspringDistribution({{1, 0.0}, {2, 0.0}}), 3};
  CHECK(total_progeny_pmf_dp(none, 3) == 1.0);
  CHECK(total_progeny_pmf_dp(none, 4) == 0.0);
  GWProcess chain{bernoulli(0.5), 1};
  CHECK(total_progeny_pmf_dp(chain, 3) == Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS(total_progeny_pmf_dp(chain, 5000), Error);
}

TEST_CASE("Dwass identity") {
  GWProcess chain{bernoulli(0.5), 1};
  CHECK(dwass_pmf(chain, 3) == Approx(0.125).epsilon(1e-15));
  GWProcess flat{binomial3(0.2), 3};
  CHECK(dwass_pmf(flat, 3) == Approx(std::pow(0.8, 9)).epsilon(1e-14));
  for (int ell = 1; ell <= 3; ++ell) {
    for (auto dist : {bernoulli(0.35), binomial3(0.2), OffspringDistribution({{2, 0.2}, {1, 0.3}})}) {
      GWProcess g{dist, ell};
      for (int m = ell; m <= 20; ++m) CHECK(std::abs(dwass_pmf(g, m) - total_progeny_pmf_dp(g, m)) <= 1e-9);
    }
  }
}

TEST_CASE("Dwass pmf completeness") {
  for (double q : {0.2, 0.5}) {
    GWProcess g{bernoulli(q), 1};
    double s = 0.0;
    for (int m = 1; m <= 200; ++m) s += dwass_pmf(g, m);
    // total progeny is geometric: the mass past 200 is q^200
    CHECK(s == Approx(1.0 - std::pow(q, 200)).epsilon(1e-12));
  }
}

TEST_CASE("sampler") {
  GWProcess none{bernoulli(0.0), 4};
  for (std::uint64_t s = 0; s < 10; ++s) CHECK(sample_total_progeny(none, s) == 4u);
  GWProcess sub{OffspringDistribution({{2, 0.15}, {1, 0.2}}), 2};
  const double mu = sub.offspring.mu();
  const int samples = 100000;
  double sum = 0, sum2 = 0;
  for (int s = 0; s < samples; ++s) {
    auto z = sample_total_progeny(sub, static_cast<std::uint64_t>(s));
    REQUIRE(z.has_value());
    sum += static_cast<double>(*z);
    sum2 += static_cast<double>(*z) * static_cast<double>(*z);
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum2 / samples - mean * mean) / samples);
  CHECK(std::abs(mean - 2.0 / (1.0 - mu)) <= 3 * se);
  GWProcess super{OffspringDistribution({{2, 0.6}}), 1};
  int overflow = 0;
  for (int s = 0; s < 200; ++s) overflow += sample_total_progeny(super, static_cast<std::uint64_t>(s), 10000) ? 0 : 1;
  CHECK(overflow > 0);
  CHECK(sample_total_progeny(super, 1, 10000) == sample_total_progeny(super, 1, 10000));
}

TEST_CASE("tail bound") {
  const double b30 = gw_tail_bound(0.5, 1, 2, 30);
  CHECK(b30 == Approx(std::exp(-30.0 / 36.0) / (1 - std::exp(-1.0 / 36.0))).epsilon(1e-14));
  CHECK(gw_tail_bound(0.5, 1, 2, 31) < b30);
  CHECK(std::isinf(gw_tail_bound(0.5, 1, 1, 10)));
  auto kind_of = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind_of([] { gw_tail_bound(0.5, 1, 0.5, 10); }) == ErrorKind::BadChi);
  CHECK(kind_of([] { gw_tail_bound(1.0, 1, 5, 10); }) == ErrorKind::BadMu);
}
