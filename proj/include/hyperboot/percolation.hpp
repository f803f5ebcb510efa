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
#include <string>
#include <vector>

#include "hyperboot/hypergraph.hpp"

namespace hyperboot {

/// Sorts, dedups and range-checks a vertex list; OutOfRange on ids >= n.
VertexSet normalize_vertex_set(std::vector<Vertex> vs, std::size_t n);

struct BootstrapResult {
  VertexSet final_set;
  std::vector<std::size_t> trace;  // trace[t] = |A(t)|
  std::size_t productive_steps = 0;
  std::vector<VertexSet> newly_infected;  // per step, verbose only
};

/// Synchronous r-neighbourhood bootstrap percolation with incrementally
/// maintained distinct-infected-neighbour counts. Holds a reference to the
/// hypergraph, which must outlive the state.
class InfectionState {
 public:
  InfectionState(const Hypergraph& h, int r, const VertexSet& a0, bool verbose = false);

  /// One synchronous round; returns the vertices infected in it.
  VertexSet step();
  /// True when the next step would infect nothing.
  bool stable() const noexcept { return pending_.empty(); }

  const Hypergraph& graph() const noexcept { return *h_; }
  int r() const noexcept { return r_; }
  std::size_t t() const noexcept { return t_; }
  bool infected(Vertex v) const noexcept { return infected_[v] != 0; }
  std::size_t infected_nbr_count(Vertex v) const noexcept { return count_[v]; }
  const VertexSet& frontier() const noexcept { return frontier_; }
  const std::vector<std::size_t>& trace() const noexcept { return trace_; }
  VertexSet infected_set() const;

  BootstrapResult run();

 private:
  void absorb(const VertexSet& fresh);

  const Hypergraph* h_;
  int r_;
  bool verbose_;
  std::vector<char> infected_;
  std::vector<std::uint32_t> count_;
  std::vector<Vertex> stamp_;
  std::vector<Vertex> pending_;
  VertexSet frontier_;
  std::size_t t_ = 0;
  std::vector<std::size_t> trace_;
  std::vector<VertexSet> newly_;
};

BootstrapResult run_bootstrap(const Hypergraph& h, int r, const VertexSet& a0, bool verbose = false);

/// Independent oracle: recounts every neighbourhood from scratch each round.
/// TooLarge if n > 2000.
VertexSet brute_force_fixpoint(const Hypergraph& h, int r, const VertexSet& a0);

std::string bootstrap_trace_json(const Hypergraph& h, int r, std::size_t a0_size,
                                 const BootstrapResult& result);

}  // namespace hyperboot
