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

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numeric>
#include <random>
#include <vector>

#include "hyperboot/hypergraph.hpp"
#include "hyperboot/query_process.hpp"

namespace fixtures {

using hyperboot::Hypergraph;
using hyperboot::KSet;
using hyperboot::Vertex;
using hyperboot::VertexSet;

inline Hypergraph graph(std::size_t n, std::size_t k,
                        std::initializer_list<std::initializer_list<Vertex>> es) {
  std::vector<KSet> edges;
  for (auto e : es) edges.push_back(hyperboot::canonical_kset(std::vector<Vertex>(e), k, n));
  return Hypergraph::from_edges(n, k, std::move(edges));
}

inline VertexSet random_subset(std::size_t n, std::size_t a, std::mt19937_64& rng) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  perm.resize(std::min(a, n));
  std::sort(perm.begin(), perm.end());
  return perm;
}

inline bool subset_of(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Random small instance with average degree of a few edges per vertex.
struct Instance {
  Hypergraph h;
  int r;
  VertexSet a0;
};

inline Instance random_instance(std::mt19937_64& rng, std::size_t n_max = 300) {
  std::uniform_int_distribution<std::size_t> nd(8, n_max);
  std::uniform_int_distribution<int> kd(2, 3), rd(2, 3);
  std::uniform_real_distribution<double> deg(0.5, 6.0), frac(0.0, 0.3);
  const std::size_t n = nd(rng);
  const auto k = static_cast<std::size_t>(kd(rng));
  const int r = rd(rng);
  const double edges = deg(rng) * static_cast<double>(n) / static_cast<double>(k);
  const double p = std::min(1.0, edges / static_cast<double>(hyperboot::binomial_count(n, k)));
  auto h = hyperboot::sample_explicit(n, k, p, rng());
  auto a0 = random_subset(n, static_cast<std::size_t>(frac(rng) * static_cast<double>(n)), rng);
  return {std::move(h), r, std::move(a0)};
}

inline double choose(double n, double k) {
  if (k < 0 || k > n) return 0.0;
  return static_cast<double>(hyperboot::binomial_count(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)));
}

// Upper bounds on the family sizes in terms of |B(t)|, |B(t-1)|.
inline hyperboot::FamilySizes family_size_bounds(double n, int k, int r, double b, double b_prev) {
  const double db = b - b_prev;
  const double s = (std::pow(b, r) - std::pow(b_prev, r)) / std::tgamma(r + 1.0) * n * std::pow(choose(n, k - 2), r);
  const double w = b * db * n * n * choose(n, k - 3) * choose(n, k - 3);
  const double hh = b * db * choose(n, k - 2);
  const double nn = 2.0 * k * r * db * b * choose(n, k - 2);
  auto up = [](double x) { return static_cast<std::size_t>(std::floor(x + 1e-9)); };
  return {up(s), up(w), up(hh), up(nn)};
}

}  // namespace fixtures
