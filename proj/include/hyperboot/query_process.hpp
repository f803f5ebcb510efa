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
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hyperboot/hypergraph.hpp"

namespace hyperboot {

enum class Family { Neutron, Heavy, Wide, Star };

std::string_view to_string(Family f) noexcept;

/// Fast mode walks present edges only; exhaustive mode walks every k-set.
enum class EnumerationMode { Fast, Exhaustive };

/// Ids refer to the enumeration universe (the hypergraph's edges in fast
/// mode, all k-sets in lexicographic order in exhaustive mode). Ids are
/// ascending, so comparing `sets` compares the sorted k-set lists.
struct Collection {
  std::vector<EdgeId> sets;
  bool n1 = false;
  bool n2 = false;
};

struct Families {
  std::vector<Collection> star, wide, heavy, neutron;
};

struct FamilySizes {
  std::size_t S = 0, W = 0, H = 0, N = 0;
};

struct SuccessfulQuery {
  Family family;
  std::vector<EdgeId> edges;  // hypergraph edge ids
  bool n1 = false;
  bool n2 = false;
};

struct QueryStepRecord {
  std::size_t t;  // the step executed: t-1 -> t
  FamilySizes sizes;
  std::size_t exposed;  // edges exposed in this step
  VertexSet newly_infected;
  std::vector<SuccessfulQuery> successes;  // verbose only
};

/// Everything forest extraction needs from a finished run.
struct QueryTrace {
  std::size_t n = 0;
  bool verbose = false;
  std::vector<std::int64_t> infected_step;  // -1 if never infected
  std::vector<std::int64_t> exposed_step;   // per hypergraph edge, -1 if never exposed
  std::vector<QueryStepRecord> steps;
};

struct QueryResult {
  VertexSet final_set;
  std::vector<std::size_t> trace;     // |B(t)|
  std::vector<std::size_t> exposed;   // |F(t)|
  std::size_t productive_steps = 0;
  QueryTrace detail;
};

/// Query-process upper coupling. Holds a reference to the hypergraph.
class QueryState {
 public:
  QueryState(const Hypergraph& h, int r, const VertexSet& b0, bool verbose = false);

  /// Families for the coming step, each in canonical order.
  /// TooLarge in exhaustive mode past 10^7 k-sets or collections.
  Families build_families(EnumerationMode mode = EnumerationMode::Fast) const;
  FamilySizes family_sizes_exhaustive() const;

  /// One step. A non-null rng shuffles each family before it is processed.
  const QueryStepRecord& qstep(EnumerationMode mode = EnumerationMode::Fast, std::mt19937_64* shuffle = nullptr);
  QueryResult run(EnumerationMode mode = EnumerationMode::Fast, std::mt19937_64* shuffle = nullptr);

  const Hypergraph& graph() const noexcept { return *h_; }
  int r() const noexcept { return r_; }
  std::size_t t() const noexcept { return t_; }
  bool infected(Vertex v) const noexcept { return infected_step_[v] >= 0; }
  bool exposed(EdgeId e) const noexcept { return exposed_step_[e] >= 0; }
  VertexSet infected_set() const;
  /// B(s) and F(s) for s <= t; s = -1 gives the empty sets.
  VertexSet infected_by(std::int64_t s) const;
  std::vector<EdgeId> exposed_by(std::int64_t s) const;
  const std::vector<QueryStepRecord>& steps() const noexcept { return steps_; }

 private:
  struct Universe;
  Families enumerate(const Universe& u) const;
  const Universe& universe(EnumerationMode mode) const;

  const Hypergraph* h_;
  int r_;
  bool verbose_;
  std::size_t t_ = 0;
  std::vector<std::int64_t> infected_step_;
  std::vector<std::int64_t> exposed_step_;
  std::vector<QueryStepRecord> steps_;
  std::vector<std::size_t> b_trace_;
  std::vector<std::size_t> f_trace_;
  mutable std::shared_ptr<Universe> fast_, full_;
};

QueryResult run_query(const Hypergraph& h, int r, const VertexSet& b0, bool verbose = false);

struct InfectionForest {
  std::size_t t0 = 0;
  VertexSet roots;                  // B(t0) \ B(t0-1)
  std::map<Vertex, Vertex> parent;  // each later-infected vertex -> smallest potential parent
  VertexSet orphans;                // later-infected vertices with no potential parent
};

/// MissingTrace unless the run was verbose.
InfectionForest extract_infection_forest(const Hypergraph& h, const QueryTrace& trace, std::size_t t0 = 0);

std::string query_trace_json(const Hypergraph& h, int r, std::size_t a0_size, const QueryResult& result);

}  // namespace hyperboot
