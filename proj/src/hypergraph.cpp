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

#include "hyperboot/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

#include "hyperboot/error.hpp"
#include "hyperboot/mix.hpp"

namespace hyperboot {

namespace {

constexpr std::uint64_t kExhaustiveCap = 10'000'000;
constexpr double kExpectedEdgeCap = 1e8;

bool sorted_contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

}  // namespace

bool KSet::contains(Vertex v) const noexcept {
  return std::binary_search(v_.begin(), v_.end(), v);
}

std::size_t KSetHash::operator()(const KSet& s) const noexcept {
  return static_cast<std::size_t>(fold_vertices(s.vertices()));
}

KSet canonical_kset(std::span<const Vertex> vertices, std::size_t k, std::size_t n) {
  if (vertices.size() != k) {
    throw Error(ErrorKind::WrongArity,
                "expected " + std::to_string(k) + " vertices, got " + std::to_string(vertices.size()));
  }
  std::vector<Vertex> v(vertices.begin(), vertices.end());
  std::sort(v.begin(), v.end());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= n) throw Error(ErrorKind::OutOfRange, "vertex " + std::to_string(v[i]) + " >= n");
    if (i > 0 && v[i] == v[i - 1]) {
      throw Error(ErrorKind::DuplicateVertex, "vertex " + std::to_string(v[i]) + " repeated");
    }
  }
  return KSet::from_sorted(std::move(v));
}

std::uint64_t binomial_count(std::uint64_t n, std::uint64_t k) noexcept {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;
    if (acc > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(acc);
}

void for_each_kset(std::size_t n, std::size_t k,
                   const std::function<void(std::span<const Vertex>)>& visit) {
  if (k > n) return;
  std::vector<Vertex> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = static_cast<Vertex>(i);
  while (true) {
    visit(cur);
    // advance to the next combination
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

EdgeOracle::EdgeOracle(std::size_t n_, std::size_t k_, double p_, std::uint64_t seed_)
    : n(n_), k(k_), p(p_), seed(seed_), threshold(0) {
  if (!(p_ >= 0.0 && p_ <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in [0,1]");
  if (p_ >= 1.0) {
    always = true;
    threshold = std::numeric_limits<std::uint64_t>::max();
  } else {
    const long double scaled = std::floor(static_cast<long double>(p_) * 18446744073709551616.0L);
    threshold = scaled >= 18446744073709551615.0L ? std::numeric_limits<std::uint64_t>::max()
                                                  : static_cast<std::uint64_t>(scaled);
  }
}

bool edge_present(const EdgeOracle& oracle, const KSet& e) {
  if (oracle.always) return true;
  return mix64(oracle.seed, fold_vertices(e.vertices())) < oracle.threshold;
}

Hypergraph::Hypergraph(std::size_t n, std::size_t k) : n_(n), k_(k) {
  if (k < 1) throw Error(ErrorKind::BadArity, "k must be >= 1");
  build_incidence();
}

Hypergraph Hypergraph::from_edges(std::size_t n, std::size_t k, std::vector<KSet> edges) {
  Hypergraph h(n, k);
  for (const auto& e : edges) {
    canonical_kset(e.vertices(), k, n);  // validation only
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw Error(ErrorKind::InvalidArgument, "duplicate edge");
  }
  h.flat_.reserve(edges.size() * k);
  for (const auto& e : edges) h.flat_.insert(h.flat_.end(), e.begin(), e.end());
  h.build_incidence();
  return h;
}

void Hypergraph::build_incidence() {
  inc_off_.assign(n_ + 1, 0);
  for (Vertex v : flat_) ++inc_off_[v + 1];
  for (std::size_t v = 0; v < n_; ++v) inc_off_[v + 1] += inc_off_[v];
  inc_ids_.assign(flat_.size(), 0);
  std::vector<std::size_t> fill(inc_off_.begin(), inc_off_.end() - 1);
  const std::size_t m = num_edges();
  for (std::size_t e = 0; e < m; ++e) {
    for (Vertex v : edge(static_cast<EdgeId>(e))) inc_ids_[fill[v]++] = static_cast<EdgeId>(e);
  }
}

KSet Hypergraph::edge_kset(EdgeId e) const {
  auto span = edge(e);
  return KSet::from_sorted({span.begin(), span.end()});
}

std::optional<EdgeId> Hypergraph::find(std::span<const Vertex> kset) const noexcept {
  if (kset.size() != k_) return std::nullopt;
  std::size_t lo = 0, hi = num_edges();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto e = edge(static_cast<EdgeId>(mid));
    if (std::lexicographical_compare(e.begin(), e.end(), kset.begin(), kset.end())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < num_edges()) {
    auto e = edge(static_cast<EdgeId>(lo));
    if (std::equal(e.begin(), e.end(), kset.begin(), kset.end())) return static_cast<EdgeId>(lo);
  }
  return std::nullopt;
}

Hypergraph Hypergraph::with_edge(const KSet& extra) const {
  auto all = edges();
  if (!contains(extra)) all.push_back(extra);
  return from_edges(n_, k_, std::move(all));
}

std::vector<KSet> Hypergraph::edges() const {
  std::vector<KSet> out;
  out.reserve(num_edges());
  for (std::size_t e = 0; e < num_edges(); ++e) out.push_back(edge_kset(static_cast<EdgeId>(e)));
  return out;
}

Hypergraph materialize_from_oracle(const EdgeOracle& oracle) {
  const auto total = binomial_count(oracle.n, oracle.k);
  if (total > kExhaustiveCap) {
    throw Error(ErrorKind::TooLarge, "C(n,k) = " + std::to_string(total) + " exceeds 10^7");
  }
  Hypergraph h(oracle.n, oracle.k);
  std::vector<KSet> kept;
  for_each_kset(oracle.n, oracle.k, [&](std::span<const Vertex> s) {
    KSet ks = KSet::from_sorted({s.begin(), s.end()});
    if (edge_present(oracle, ks)) kept.push_back(std::move(ks));
  });
  // enumeration is already lexicographic and duplicate-free
  return Hypergraph::from_edges(oracle.n, oracle.k, std::move(kept));
}

Hypergraph sample_explicit(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in [0,1]");
  if (k < 1 || k > n) {
    if (k < 1) throw Error(ErrorKind::BadArity, "k must be >= 1");
    return Hypergraph(n, k);
  }
  const auto total = binomial_count(n, k);
  if (static_cast<double>(total) * p > kExpectedEdgeCap ||
      total > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw Error(ErrorKind::TooLarge, "expected edge count exceeds 10^8");
  }
  std::mt19937_64 rng(seed);
  std::int64_t m = 0;
  if (p >= 1.0) {
    m = static_cast<std::int64_t>(total);
  } else if (p > 0.0) {
    std::binomial_distribution<std::int64_t> count(static_cast<std::int64_t>(total), p);
    m = count(rng);
  }

  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  auto draw = [&] {
    std::vector<Vertex> v;
    v.reserve(k);
    while (v.size() < k) {
      const Vertex x = pick(rng);
      if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    }
    std::sort(v.begin(), v.end());
    return KSet::from_sorted(std::move(v));
  };
  auto draw_distinct = [&](std::uint64_t count) {
    std::unordered_set<KSet, KSetHash> chosen;
    chosen.reserve(count * 2 + 1);
    while (chosen.size() < count) chosen.insert(draw());
    return chosen;
  };

  std::vector<KSet> edges;
  const auto mu = static_cast<std::uint64_t>(m);
  if (2 * mu <= total) {
    auto chosen = draw_distinct(mu);
    edges.assign(chosen.begin(), chosen.end());
  } else {
    // dense case: sample the complement and enumerate
    auto excluded = draw_distinct(total - mu);
    edges.reserve(mu);
    for_each_kset(n, k, [&](std::span<const Vertex> s) {
      KSet ks = KSet::from_sorted({s.begin(), s.end()});
      if (!excluded.contains(ks)) edges.push_back(std::move(ks));
    });
  }
  return Hypergraph::from_edges(n, k, std::move(edges));
}

VertexSet neighbours(const Hypergraph& h, Vertex v) {
  if (v >= h.n()) throw Error(ErrorKind::OutOfRange, "vertex " + std::to_string(v) + " >= n");
  VertexSet out;
  for (EdgeId e : h.incidence(v)) {
    for (Vertex w : h.edge(e)) {
      if (w != v) out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint64_t count_intersecting_tuples(const Hypergraph& h, const VertexSet& U,
                                        const VertexSet& Vp, int ell, bool strong) {
  if (ell < 2) throw Error(ErrorKind::InvalidArgument, "ell must be >= 2");
  for (Vertex u : U) {
    if (sorted_contains(Vp, u)) throw Error(ErrorKind::InvalidArgument, "U and Vp intersect");
  }
  auto outside = [&](Vertex v) { return !sorted_contains(U, v) && !sorted_contains(Vp, v); };

  std::vector<EdgeId> cand;
  std::vector<char> is_cand(h.num_edges(), 0);
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    int in_u = 0;
    bool in_vp = false;
    for (Vertex v : h.edge(static_cast<EdgeId>(e))) {
      in_u += sorted_contains(U, v) ? 1 : 0;
      in_vp = in_vp || sorted_contains(Vp, v);
    }
    if (in_u == 1 && !in_vp) {
      cand.push_back(static_cast<EdgeId>(e));
      is_cand[e] = 1;
    }
  }

  // chain adjacency: candidates sharing a vertex outside U and Vp
  std::vector<std::vector<EdgeId>> adj(h.num_edges());
  for (EdgeId e : cand) {
    for (Vertex v : h.edge(e)) {
      if (!outside(v)) continue;
      for (EdgeId f : h.incidence(v)) {
        if (f != e && is_cand[f]) adj[e].push_back(f);
      }
    }
    std::sort(adj[e].begin(), adj[e].end());
    adj[e].erase(std::unique(adj[e].begin(), adj[e].end()), adj[e].end());
  }

  auto shared = [&](EdgeId a, EdgeId b) {
    auto x = h.edge(a);
    auto y = h.edge(b);
    std::size_t i = 0, j = 0, c = 0;
    while (i < x.size() && j < y.size()) {
      if (x[i] < y[j]) ++i;
      else if (y[j] < x[i]) ++j;
      else { ++c; ++i; ++j; }
    }
    return c;
  };

  std::set<std::vector<EdgeId>> seen;
  std::vector<EdgeId> chain;
  const auto target = static_cast<std::size_t>(ell);
  std::function<void()> extend = [&] {
    if (chain.size() == target) {
      std::vector<EdgeId> key = chain;
      std::sort(key.begin(), key.end());
      if (seen.contains(key)) return;
      if (strong) {
        bool any = false;
        for (std::size_t i = 0; i < key.size() && !any; ++i) {
          for (std::size_t j = i + 1; j < key.size() && !any; ++j) any = shared(key[i], key[j]) >= 2;
        }
        if (!any) return;
      }
      seen.insert(std::move(key));
      return;
    }
    for (EdgeId f : adj[chain.back()]) {
      if (std::find(chain.begin(), chain.end(), f) != chain.end()) continue;
      chain.push_back(f);
      extend();
      chain.pop_back();
    }
  };
  for (EdgeId e : cand) {
    chain.assign(1, e);
    extend();
  }
  return seen.size();
}

std::string serialize(const Hypergraph& h) {
  std::ostringstream out;
  out << h.n() << ' ' << h.k() << ' ' << h.num_edges() << '\n';
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto span = h.edge(static_cast<EdgeId>(e));
    for (std::size_t i = 0; i < span.size(); ++i) out << (i ? " " : "") << span[i];
    out << '\n';
  }
  return out.str();
}

Hypergraph parse_hypergraph(const std::string& text) {
  std::istringstream in(text);
  std::size_t n = 0, k = 0, m = 0;
  if (!(in >> n >> k >> m)) throw Error(ErrorKind::ParseError, "missing 'n k m' header");
  std::vector<KSet> edges;
  edges.reserve(m);
  std::vector<Vertex> buf(k);
  for (std::size_t e = 0; e < m; ++e) {
    for (std::size_t i = 0; i < k; ++i) {
      long long x = 0;
      if (!(in >> x) || x < 0) throw Error(ErrorKind::ParseError, "bad vertex on edge line " + std::to_string(e));
      buf[i] = static_cast<Vertex>(x);
    }
    edges.push_back(canonical_kset(buf, k, n));
  }
  return Hypergraph::from_edges(n, k, std::move(edges));
}

}  // namespace hyperboot
