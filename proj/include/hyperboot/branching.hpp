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

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace hyperboot {

struct OffspringTerm {
  int weight;  // positive integer
  double prob;
};

/// Offspring law sum_i w_i Be(p_i) with integer weights.
class OffspringDistribution {
 public:
  explicit OffspringDistribution(std::vector<OffspringTerm> terms);

  const std::vector<OffspringTerm>& terms() const noexcept { return terms_; }
  double mu() const noexcept { return mu_; }
  int M() const noexcept { return M_; }
  int max_offspring() const noexcept { return support_; }

 private:
  std::vector<OffspringTerm> terms_;
  double mu_ = 0.0;
  int M_ = 0;
  int support_ = 0;
};

struct GWProcess {
  OffspringDistribution offspring;
  int roots;
};

/// Full pmf over 0..max_offspring. Exact rational convolution for at most 20
/// terms, double convolution beyond.
std::vector<double> offspring_pmf_table(const OffspringDistribution& dist);
double offspring_pmf(const OffspringDistribution& dist, int j);

/// P[Z = m | Z_0 = roots] by generation-by-generation dynamic programming
/// over (current generation, running total). TooLarge if m > 4000.
double total_progeny_pmf_dp(const GWProcess& process, int m);

/// (roots/m) P[S_m = m - roots] with S_m the m-fold offspring sum.
double dwass_pmf(const GWProcess& process, int m);

/// Total progeny, or nullopt once the running total reaches cap.
std::optional<std::uint64_t> sample_total_progeny(const GWProcess& process, std::uint64_t seed,
                                                  std::uint64_t cap = 1'000'000);

/// Tail bound on P[Z > (1+chi) ell | Z_0 = ell]; +inf when the exponent is 0.
/// BadMu unless 0 < mu < 1, BadChi if chi < mu/(1-mu).
double gw_tail_bound(double mu, double M, double chi, double ell);

}  // namespace hyperboot
