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

#include "hyperboot/mild_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "hyperboot/error.hpp"
#include "hyperboot/percolation.hpp"
#include "json.hpp"

namespace hyperboot {

MildSchedule MildSchedule::from_params(const RegimeParams& params, double c0, int table_steps) {
  RegimeParams prm = params;
  prm.side = Side::Supercritical;
  validate(prm);
  MildSchedule s;
  const double n = static_cast<double>(prm.n);
  const double m1 = std::pow(n, prm.k - 1) * prm.p;  // n^{k-1} p
  const double m2 = std::pow(n, prm.k - 2) * prm.p;  // n^{k-2} p
  s.zeta = std::pow(m1, 1.0 / (prm.r + 1));
  s.t_low = 1.0 / (m2 * s.zeta);
  s.t_high = std::sqrt(s.zeta) / m2;
  const GammaTable tab = gamma_trajectory(prm, table_steps, c0);
  s.c.reserve(tab.rows.size());
  for (const auto& row : tab.rows) s.c.push_back(row.c);
  s.c_unbounded_tail = tab.truncated;
  return s;
}

MildSchedule MildSchedule::all() {
  MildSchedule s;
  s.activate_all = true;
  return s;
}

double MildSchedule::c_at(std::size_t t) const noexcept {
  if (t < c.size()) return c[t];
  if (c_unbounded_tail || c.empty()) return std::numeric_limits<double>::infinity();
  return c.back();
}

MildState::MildState(const Hypergraph& h, int r, const VertexSet& c0) : h_(&h), r_(r) {
  if (r < 2) throw Error(ErrorKind::BadArity, "mild process needs r >= 2");
  const std::size_t n = h.n();
  const VertexSet start = normalize_vertex_set(c0, n);
  in_c_.assign(n, 0);
  in_hat_.assign(n, 0);
  level_.assign(n, 0);
  level_count_.assign(r + 1, 0);
  exposed_.assign(h.num_edges(), 0);
  for (Vertex v : start) {
    in_c_[v] = 1;
    level_[v] = -1;
    pending_.insert(v);
  }
  c_size_ = start.size();
  level_count_[0] = n - start.size();
}

std::size_t activation_batch_size(const MildState& state, const MildSchedule& schedule) {
  const std::size_t avail = state.c_size() - state.hat_size();
  if (avail == 0) return 0;
  if (schedule.activate_all) return avail;
  const double x = static_cast<double>(avail);
  double want;
  if (x < schedule.t_low) {
    want = std::min(schedule.c_at(state.t()), static_cast<double>(state.c_size())) -
           static_cast<double>(state.hat_size());
  } else if (x < schedule.t_high) {
    want = schedule.t_low;
  } else {
    want = schedule.t_high;
  }
  want = std::ceil(want);
  if (!(want > 0.0)) return 0;
  if (want >= x) return avail;
  return static_cast<std::size_t>(want);
}

std::size_t MildState::batch_size(const MildSchedule& schedule) const { return activation_batch_size(*this, schedule); }

VertexSet MildState::mstep(const MildSchedule& schedule) {
  const std::size_t s = batch_size(schedule);
  last_batch_.clear();
  last_exposed_.clear();
  for (auto it = pending_.begin(); last_batch_.size() < s; ++it) last_batch_.push_back(*it);

  // An edge is exposed when its only C(t) vertex is the batch vertex it was
  // reached from.
  std::vector<std::tuple<Vertex, Vertex, EdgeId>> touch;  // (w, u, e)
  for (Vertex u : last_batch_) {
    for (EdgeId e : h_->incidence(u)) {
      if (exposed_[e]) continue;
      bool clean = true;
      for (Vertex w : h_->edge(e)) {
        if (w != u && in_c_[w]) {
          clean = false;
          break;
        }
      }
      if (!clean) continue;
      exposed_[e] = 1;
      last_exposed_.push_back(e);
      for (Vertex w : h_->edge(e)) {
        if (w != u) touch.emplace_back(w, u, e);
      }
    }
  }
  exposed_count_ += last_exposed_.size();
  std::sort(touch.begin(), touch.end());

  // Xi': edges sharing both their batch vertex and an uninfected vertex with
  // another newly exposed edge.
  std::vector<EdgeId> xi_edges;
  for (std::size_t i = 0; i < touch.size();) {
    std::size_t j = i;
    while (j < touch.size() && std::get<0>(touch[j]) == std::get<0>(touch[i]) &&
           std::get<1>(touch[j]) == std::get<1>(touch[i])) {
      ++j;
    }
    if (j - i >= 2) {
      for (std::size_t q = i; q < j; ++q) xi_edges.push_back(std::get<2>(touch[q]));
    }
    i = j;
  }
  std::sort(xi_edges.begin(), xi_edges.end());
  xi_edges.erase(std::unique(xi_edges.begin(), xi_edges.end()), xi_edges.end());
  xi_size_ += xi_edges.size();

  // Level promotion by distinct batch neighbours.
  VertexSet promoted_to_r;
  for (std::size_t i = 0; i < touch.size();) {
    const Vertex w = std::get<0>(touch[i]);
    int gain = 0;
    Vertex last_u = static_cast<Vertex>(-1);
    std::size_t j = i;
    for (; j < touch.size() && std::get<0>(touch[j]) == w; ++j) {
      if (std::get<1>(touch[j]) != last_u) {
        ++gain;
        last_u = std::get<1>(touch[j]);
      }
    }
    i = j;
    const int old = level_[w];
    const int now = std::min(r_, old + gain);
    if (now != old) {
      --level_count_[old];
      ++level_count_[now];
      level_[w] = now;
      if (now == r_) promoted_to_r.push_back(w);
    }
  }

  VertexSet fresh;
  auto infect = [&](Vertex v) {
    if (!in_c_[v]) {
      in_c_[v] = 1;
      fresh.push_back(v);
    }
  };
  for (Vertex q : promoted_to_r) {
    infect(q);
    if (r_ == 2) {
      for (EdgeId e : h_->incidence(q)) {
        if (!exposed_[e]) continue;
        for (Vertex w : h_->edge(e)) infect(w);
      }
    }
  }
  std::sort(fresh.begin(), fresh.end());

  for (Vertex u : last_batch_) {
    in_hat_[u] = 1;
    pending_.erase(u);
  }
  hat_size_ += last_batch_.size();
  for (Vertex v : fresh) pending_.insert(v);
  c_size_ += fresh.size();
  ++t_;
  return fresh;
}

std::vector<std::size_t> MildState::level_sizes() const {
  std::vector<std::size_t> out(r_ + 1, 0);
  std::size_t acc = 0;
  for (int i = r_; i >= 0; --i) {
    acc += level_count_[i];
    out[i] = acc;
  }
  return out;
}

VertexSet MildState::infected_set() const {
  VertexSet out;
  out.reserve(c_size_);
  for (Vertex v = 0; v < in_c_.size(); ++v) {
    if (in_c_[v]) out.push_back(v);
  }
  return out;
}

MildResult MildState::run(const MildSchedule& schedule) {
  MildResult res;
  res.trace.push_back(c_size_);
  res.levels.push_back(level_sizes());
  const std::size_t cap = 10 * h_->n();
  while (!pending_.empty() && t_ < cap) {
    const std::size_t s = batch_size(schedule);
    // Past the trajectory table with a finite tail, a zero batch stays zero.
    if (s == 0 && t_ >= schedule.c.size() && !schedule.activate_all) break;
    const VertexSet fresh = mstep(schedule);
    if (!fresh.empty()) ++res.productive_steps;
    res.trace.push_back(c_size_);
    res.levels.push_back(level_sizes());
    res.activated.push_back(last_batch_.size());
    res.xi.push_back(xi_size_);
  }
  res.hard_stopped = !pending_.empty();
  res.exposed = exposed_count_;
  res.final_set = infected_set();
  return res;
}

MildResult run_mild(const Hypergraph& h, int r, const VertexSet& c0, const MildSchedule& schedule) {
  MildState st(h, r, c0);
  return st.run(schedule);
}

std::string mild_trace_json(const Hypergraph& h, int r, std::size_t a0_size, const MildResult& result) {
  nlohmann::ordered_json j;
  j["process"] = "mild";
  j["n"] = h.n();
  j["k"] = h.k();
  j["r"] = r;
  j["a0_size"] = a0_size;
  j["steps"] = result.trace;
  j["final_size"] = result.final_set.size();
  j["levels"] = result.levels;
  j["activated"] = result.activated;
  j["xi"] = result.xi;
  j["exposed"] = result.exposed;
  return j.dump();
}

}  // namespace hyperboot
