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
#include <set>
#include <string>
#include <vector>

#include "hyperboot/hypergraph.hpp"
#include "hyperboot/theory.hpp"

namespace hyperboot {

/// Activation schedule for the mild process. c[t] is the trajectory value
/// used by the first batch-size case; past the end of the table c(t) is the
/// last entry, or +inf if the table was cut off by overflow.
struct MildSchedule {
  double zeta = 0.0;
  double t_low = 0.0;
  double t_high = 0.0;
  std::vector<double> c;
  bool c_unbounded_tail = true;
  bool activate_all = false;

  /// Builds zeta, thresholds and the c(t) table with c(0) = c0. The pairing
  /// (1+eps)(1-delta) > 1 is checked here (BadPairing).
  static MildSchedule from_params(const RegimeParams& params, double c0, int table_steps = 200);
  /// Activates all of C(t)\C^(t) every step.
  static MildSchedule all();

  double c_at(std::size_t t) const noexcept;
};

struct MildResult {
  VertexSet final_set;
  std::vector<std::size_t> trace;                   // |C(t)|
  std::vector<std::vector<std::size_t>> levels;     // [|C_0(t)|..|C_r(t)|]
  std::vector<std::size_t> activated;               // |C^'(t)| per step, from t=1
  std::vector<std::size_t> xi;                      // |Xi(t)| per step, from t=1
  std::size_t exposed = 0;
  std::size_t productive_steps = 0;
  bool hard_stopped = false;  // stopped with C(t)\C^(t) non-empty
};

class MildState {
 public:
  MildState(const Hypergraph& h, int r, const VertexSet& c0);

  /// Size of the next activation batch.
  std::size_t batch_size(const MildSchedule& schedule) const;
  /// One step; returns the vertices infected in it.
  VertexSet mstep(const MildSchedule& schedule);
  bool done() const noexcept { return pending_.empty(); }
  MildResult run(const MildSchedule& schedule);

  std::size_t t() const noexcept { return t_; }
  bool infected(Vertex v) const noexcept { return in_c_[v] != 0; }
  bool activated(Vertex v) const noexcept { return in_hat_[v] != 0; }
  /// -1 for C(0) vertices, else the largest i with v in C_i(t).
  int level(Vertex v) const noexcept { return level_[v]; }
  bool exposed(EdgeId e) const noexcept { return exposed_[e] != 0; }
  std::size_t c_size() const noexcept { return c_size_; }
  std::size_t hat_size() const noexcept { return hat_size_; }
  std::size_t xi_size() const noexcept { return xi_size_; }
  std::size_t exposed_count() const noexcept { return exposed_count_; }
  std::vector<std::size_t> level_sizes() const;
  VertexSet infected_set() const;
  /// Edges exposed in the last step, in exposure order.
  const std::vector<EdgeId>& last_exposed() const noexcept { return last_exposed_; }
  /// Activation batch of the last step.
  const VertexSet& last_batch() const noexcept { return last_batch_; }

 private:
  const Hypergraph* h_;
  int r_;
  std::vector<char> in_c_;
  std::vector<char> in_hat_;
  std::vector<int> level_;
  std::vector<std::size_t> level_count_;  // vertices outside C(0) at exactly level i
  std::vector<char> exposed_;
  std::set<Vertex> pending_;  // C(t) \ C^(t)
  std::size_t c_size_ = 0;
  std::size_t hat_size_ = 0;
  std::size_t xi_size_ = 0;
  std::size_t exposed_count_ = 0;
  std::size_t t_ = 0;
  std::vector<EdgeId> last_exposed_;
  VertexSet last_batch_;
};

/// Three-case batch size, clamped to [0, |C(t)\C^(t)|].
std::size_t activation_batch_size(const MildState& state, const MildSchedule& schedule);

MildResult run_mild(const Hypergraph& h, int r, const VertexSet& c0, const MildSchedule& schedule);

std::string mild_trace_json(const Hypergraph& h, int r, std::size_t a0_size, const MildResult& result);

}  // namespace hyperboot
