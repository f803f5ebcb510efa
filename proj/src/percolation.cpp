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

#include "hyperboot/percolation.hpp"

#include <algorithm>

#include "hyperboot/error.hpp"
#include "json.hpp"

namespace hyperboot {

namespace {

constexpr std::size_t kBruteForceMaxN = 2000;
constexpr Vertex kNoStamp = static_cast<Vertex>(-1);

}  // namespace

VertexSet normalize_vertex_set(std::vector<Vertex> vs, std::size_t n) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  if (!vs.empty() && vs.back() >= n) {
    throw Error(ErrorKind::OutOfRange, "vertex " + std::to_string(vs.back()) + " >= n");
  }
  return vs;
}

InfectionState::InfectionState(const Hypergraph& h, int r, const VertexSet& a0, bool verbose)
    : h_(&h), r_(r), verbose_(verbose) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "r must be positive");
  const std::size_t n = h.n();
  infected_.assign(n, 0);
  count_.assign(n, 0);
  stamp_.assign(n, kNoStamp);
  frontier_ = normalize_vertex_set(a0, n);
  for (Vertex v : frontier_) infected_[v] = 1;
  absorb(frontier_);
  trace_.push_back(frontier_.size());
}

void InfectionState::absorb(const VertexSet& fresh) {
  const auto r = static_cast<std::uint32_t>(r_);
  for (Vertex u : fresh) {
    for (EdgeId e : h_->incidence(u)) {
      for (Vertex w : h_->edge(e)) {
        if (w == u || stamp_[w] == u) continue;
        stamp_[w] = u;
        if (++count_[w] == r && !infected_[w]) pending_.push_back(w);
      }
    }
  }
}

VertexSet InfectionState::step() {
  VertexSet fresh;
  fresh.swap(pending_);
  std::sort(fresh.begin(), fresh.end());
  fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
  // all crossings are decided before any count moves: rounds are synchronous
  for (Vertex v : fresh) infected_[v] = 1;
  absorb(fresh);
  ++t_;
  frontier_ = fresh;
  trace_.push_back(trace_.back() + fresh.size());
  if (verbose_) newly_.push_back(fresh);
  return fresh;
}

VertexSet InfectionState::infected_set() const {
  VertexSet out;
  for (std::size_t v = 0; v < infected_.size(); ++v) {
    if (infected_[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

BootstrapResult InfectionState::run() {
  while (!stable()) step();
  BootstrapResult res;
  res.final_set = infected_set();
  res.trace = trace_;
  res.productive_steps = t_;
  res.newly_infected = newly_;
  return res;
}

BootstrapResult run_bootstrap(const Hypergraph& h, int r, const VertexSet& a0, bool verbose) {
  InfectionState s(h, r, a0, verbose);
  return s.run();
}

VertexSet brute_force_fixpoint(const Hypergraph& h, int r, const VertexSet& a0) {
  const std::size_t n = h.n();
  if (n > kBruteForceMaxN) throw Error(ErrorKind::TooLarge, "brute force limited to n <= 2000");
  std::vector<char> infected(n, 0);
  for (Vertex v : normalize_vertex_set(a0, n)) infected[v] = 1;
  std::vector<std::size_t> seen(n, 0);
  std::size_t mark = 0;
  while (true) {
    std::vector<Vertex> crossing;
    for (Vertex v = 0; v < n; ++v) {
      if (infected[v]) continue;
      ++mark;
      int c = 0;
      for (EdgeId e : h.incidence(v)) {
        for (Vertex w : h.edge(e)) {
          if (w != v && infected[w] && seen[w] != mark) {
            seen[w] = mark;
            ++c;
          }
        }
      }
      if (c >= r) crossing.push_back(v);
    }
    if (crossing.empty()) break;
    for (Vertex v : crossing) infected[v] = 1;
  }
  VertexSet out;
  for (Vertex v = 0; v < n; ++v) {
    if (infected[v]) out.push_back(v);
  }
  return out;
}

std::string bootstrap_trace_json(const Hypergraph& h, int r, std::size_t a0_size,
                                 const BootstrapResult& result) {
  nlohmann::ordered_json j;
  j["process"] = "bootstrap";
  j["n"] = h.n();
  j["k"] = h.k();
  j["r"] = r;
  j["a0_size"] = a0_size;
  j["steps"] = result.trace;
  j["final_size"] = result.final_set.size();
  return j.dump();
}

}  // namespace hyperboot
