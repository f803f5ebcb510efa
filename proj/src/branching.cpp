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

#include "hyperboot/branching.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <random>

#include "hyperboot/error.hpp"

namespace hyperboot {

namespace {

using boost::multiprecision::cpp_rational;

constexpr std::size_t kExactTerms = 20;
constexpr int kDpMaxM = 4000;

// Weighted Bernoulli factors of a distribution, repeated `copies` times.
std::vector<OffspringTerm> repeated(const OffspringDistribution& d, int copies) {
  std::vector<OffspringTerm> out;
  out.reserve(d.terms().size() * static_cast<std::size_t>(copies));
  for (int c = 0; c < copies; ++c) out.insert(out.end(), d.terms().begin(), d.terms().end());
  return out;
}

template <class T>
std::vector<T> convolve_terms(const std::vector<OffspringTerm>& terms, int limit, const auto& to_t) {
  std::vector<T> pmf(1, T(1));
  for (const auto& term : terms) {
    const T p = to_t(term.prob);
    const T q = T(1) - p;
    const auto grown = std::min<std::size_t>(pmf.size() + term.weight, static_cast<std::size_t>(limit) + 1);
    std::vector<T> next(grown, T(0));
    for (std::size_t j = 0; j < pmf.size() && j < grown; ++j) {
      next[j] += pmf[j] * q;
      if (j + term.weight < grown) next[j + term.weight] += pmf[j] * p;
    }
    pmf = std::move(next);
  }
  return pmf;
}

// pmf of the sum of all factors, truncated to 0..limit.
std::vector<double> factor_pmf(const std::vector<OffspringTerm>& terms, int limit) {
  if (terms.size() <= kExactTerms) {
    auto exact = convolve_terms<cpp_rational>(terms, limit, [](double p) { return cpp_rational(p); });
    std::vector<double> out;
    out.reserve(exact.size());
    for (const auto& v : exact) out.push_back(v.convert_to<double>());
    return out;
  }
  return convolve_terms<double>(terms, limit, [](double p) { return p; });
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b, std::size_t limit) {
  std::vector<double> out(std::min(a.size() + b.size() - 1, limit + 1), 0.0);
  for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

}  // namespace

OffspringDistribution::OffspringDistribution(std::vector<OffspringTerm> terms) : terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (t.weight < 1) throw Error(ErrorKind::InvalidArgument, "weights must be positive integers");
    if (!(t.prob >= 0.0 && t.prob <= 1.0)) throw Error(ErrorKind::InvalidArgument, "probabilities must lie in [0,1]");
    mu_ += t.weight * t.prob;
    M_ = std::max(M_, t.weight);
    support_ += t.weight;
  }
}

std::vector<double> offspring_pmf_table(const OffspringDistribution& dist) {
  return factor_pmf(dist.terms(), dist.max_offspring());
}

double offspring_pmf(const OffspringDistribution& dist, int j) {
  if (j < 0 || j > dist.max_offspring()) return 0.0;
  return offspring_pmf_table(dist)[static_cast<std::size_t>(j)];
}

double total_progeny_pmf_dp(const GWProcess& process, int m) {
  const int ell = process.roots;
  if (ell < 1 || m < ell) throw Error(ErrorKind::InvalidArgument, "need m >= roots >= 1");
  if (m > kDpMaxM) throw Error(ErrorKind::TooLarge, "dynamic programme limited to m <= 4000");
  const auto limit = static_cast<std::size_t>(m - ell);
  const auto base = offspring_pmf_table(process.offspring);

  // powers[z] = law of the children of a generation of size z, truncated at limit
  std::vector<std::vector<double>> powers(static_cast<std::size_t>(m) + 1);
  powers[0] = {1.0};
  for (std::size_t z = 1; z <= static_cast<std::size_t>(m); ++z) powers[z] = convolve(powers[z - 1], base, limit);

  // state[z][s]: generation of size z with s individuals counted so far (s <= m)
  const auto M = static_cast<std::size_t>(m);
  std::vector<std::vector<double>> state(M + 1, std::vector<double>(M + 1, 0.0));
  state[static_cast<std::size_t>(ell)][static_cast<std::size_t>(ell)] = 1.0;
  double extinct_at_m = 0.0;
  bool alive = true;
  while (alive) {
    alive = false;
    std::vector<std::vector<double>> next(M + 1, std::vector<double>(M + 1, 0.0));
    for (std::size_t z = 1; z <= M; ++z) {
      for (std::size_t s = z; s <= M; ++s) {
        const double w = state[z][s];
        if (w == 0.0) continue;
        const auto& law = powers[z];
        for (std::size_t y = 0; y < law.size() && s + y <= M; ++y) {
          const double v = w * law[y];
          if (v == 0.0) continue;
          if (y == 0) {
            if (s == M) extinct_at_m += v;
          } else {
            next[y][s + y] += v;
            alive = true;
          }
        }
      }
    }
    state = std::move(next);
  }
  return extinct_at_m;
}

double dwass_pmf(const GWProcess& process, int m) {
  const int ell = process.roots;
  if (ell < 1 || m < ell) throw Error(ErrorKind::InvalidArgument, "need m >= roots >= 1");
  const int target = m - ell;
  const auto& terms = process.offspring.terms();
  double at = 0.0;
  if (terms.size() * static_cast<std::size_t>(m) <= kExactTerms) {
    auto pmf = factor_pmf(repeated(process.offspring, m), target);
    at = static_cast<std::size_t>(target) < pmf.size() ? pmf[static_cast<std::size_t>(target)] : 0.0;
  } else {
    // binary powering of the single-individual law
    auto base = offspring_pmf_table(process.offspring);
    std::vector<double> acc{1.0};
    const auto limit = static_cast<std::size_t>(target);
    for (int e = m; e > 0; e >>= 1) {
      if (e & 1) acc = convolve(acc, base, limit);
      if (e > 1) base = convolve(base, base, limit);
    }
    at = limit < acc.size() ? acc[limit] : 0.0;
  }
  return static_cast<double>(ell) / m * at;
}

std::optional<std::uint64_t> sample_total_progeny(const GWProcess& process, std::uint64_t seed,
                                                  std::uint64_t cap) {
  if (process.roots < 0) throw Error(ErrorKind::InvalidArgument, "roots must be non-negative");
  if (cap <= static_cast<std::uint64_t>(process.roots)) throw Error(ErrorKind::InvalidArgument, "cap must exceed roots");
  std::mt19937_64 rng(seed);
  std::uint64_t z = static_cast<std::uint64_t>(process.roots);
  std::uint64_t total = z;
  while (z > 0) {
    std::uint64_t children = 0;
    for (const auto& t : process.offspring.terms()) {
      std::binomial_distribution<std::uint64_t> draw(z, t.prob);
      children += static_cast<std::uint64_t>(t.weight) * draw(rng);
    }
    total += children;
    if (total >= cap) return std::nullopt;
    z = children;
  }
  return total;
}

double gw_tail_bound(double mu, double M, double chi, double ell) {
  if (!(mu > 0.0 && mu < 1.0)) throw Error(ErrorKind::BadMu, "need 0 < mu < 1");
  if (chi < mu / (1.0 - mu)) throw Error(ErrorKind::BadChi, "need chi >= mu/(1-mu)");
  const double gap = 1.0 - 1.0 / (1.0 + chi) - mu;
  const double a = gap * gap * (1.0 + chi) / (3.0 * M);
  if (a <= 0.0) return std::numeric_limits<double>::infinity();
  return std::exp(-a * ell) / -std::expm1(-a);
}

}  // namespace hyperboot
