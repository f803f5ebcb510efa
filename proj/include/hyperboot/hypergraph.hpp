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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hyperboot {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

/// A k-element vertex subset in canonical (strictly ascending) form.
class KSet {
 public:
  KSet() = default;

  /// Caller guarantees `sorted` is strictly ascending.
  static KSet from_sorted(std::vector<Vertex> sorted) {
    KSet s;
    s.v_ = std::move(sorted);
    return s;
  }

  std::span<const Vertex> vertices() const noexcept { return v_; }
  std::size_t size() const noexcept { return v_.size(); }
  Vertex operator[](std::size_t i) const noexcept { return v_[i]; }
  auto begin() const noexcept { return v_.begin(); }
  auto end() const noexcept { return v_.end(); }
  bool contains(Vertex v) const noexcept;

  friend auto operator<=>(const KSet&, const KSet&) = default;
  friend bool operator==(const KSet&, const KSet&) = default;

 private:
  std::vector<Vertex> v_;
};

struct KSetHash {
  std::size_t operator()(const KSet& s) const noexcept;
};

/// Sorts and validates; throws WrongArity, DuplicateVertex or OutOfRange.
KSet canonical_kset(std::span<const Vertex> vertices, std::size_t k, std::size_t n);

/// C(n, k) saturated at UINT64_MAX.
std::uint64_t binomial_count(std::uint64_t n, std::uint64_t k) noexcept;

/// Visits every k-subset of [0, n) in lexicographic order.
void for_each_kset(std::size_t n, std::size_t k,
                   const std::function<void(std::span<const Vertex>)>& visit);

/// Deterministic membership oracle for H_k(n, p). Presence of a k-set is
/// mix64(seed, fold_vertices(kset)) < threshold, with threshold = floor(p * 2^64).
struct EdgeOracle {
  EdgeOracle(std::size_t n, std::size_t k, double p, std::uint64_t seed);

  std::size_t n;
  std::size_t k;
  double p;
  std::uint64_t seed;
  std::uint64_t threshold;
  bool always = false;  // p >= 1
};

bool edge_present(const EdgeOracle& oracle, const KSet& e);

/// Immutable k-uniform hypergraph. Edges are kept in lexicographic order, so
/// edge ids order like their k-sets; incidence lists are ascending edge ids.
class Hypergraph {
 public:
  Hypergraph(std::size_t n, std::size_t k);

  /// Validates every edge, sorts them, rejects duplicates.
  static Hypergraph from_edges(std::size_t n, std::size_t k, std::vector<KSet> edges);

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t num_edges() const noexcept { return k_ == 0 ? 0 : flat_.size() / k_; }

  std::span<const Vertex> edge(EdgeId e) const noexcept {
    return {flat_.data() + static_cast<std::size_t>(e) * k_, k_};
  }
  KSet edge_kset(EdgeId e) const;
  std::span<const EdgeId> incidence(Vertex v) const noexcept {
    return {inc_ids_.data() + inc_off_[v], inc_off_[v + 1] - inc_off_[v]};
  }

  std::optional<EdgeId> find(std::span<const Vertex> kset) const noexcept;
  std::optional<EdgeId> find(const KSet& kset) const noexcept { return find(kset.vertices()); }
  bool contains(const KSet& kset) const noexcept { return find(kset).has_value(); }

  /// Copy with one extra edge (no-op if already present).
  Hypergraph with_edge(const KSet& extra) const;

  std::vector<KSet> edges() const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) noexcept {
    return a.n_ == b.n_ && a.k_ == b.k_ && a.flat_ == b.flat_;
  }

 private:
  void build_incidence();

  std::size_t n_;
  std::size_t k_;
  std::vector<Vertex> flat_;
  std::vector<std::size_t> inc_off_;
  std::vector<EdgeId> inc_ids_;
};

/// Exhaustive materialization; TooLarge if C(n, k) > 10^7.
Hypergraph materialize_from_oracle(const EdgeOracle& oracle);

/// Binomial edge count followed by rejection sampling of distinct uniform
/// k-sets. TooLarge if C(n, k) * p > 10^8.
Hypergraph sample_explicit(std::size_t n, std::size_t k, double p, std::uint64_t seed);

VertexSet neighbours(const Hypergraph& h, Vertex v);

/// Number of unordered edge sets {e_1..e_l} (edges with exactly one vertex in U
/// and none in Vp) admitting an ordering where consecutive edges meet outside
/// U and Vp. With strong=true, some pair of the set must share >= 2 vertices.
std::uint64_t count_intersecting_tuples(const Hypergraph& h, const VertexSet& U,
                                        const VertexSet& Vp, int ell, bool strong);

/// "n k m" header, then one ascending line per edge, lines in lexicographic order.
std::string serialize(const Hypergraph& h);
Hypergraph parse_hypergraph(const std::string& text);

}  // namespace hyperboot
