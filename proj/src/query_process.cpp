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

#include "hyperboot/query_process.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "hyperboot/error.hpp"
#include "hyperboot/percolation.hpp"
#include "json.hpp"

namespace hyperboot {

namespace {

constexpr std::uint64_t kExhaustiveCap = 10'000'000;

std::size_t overlap(std::span<const Vertex> a, std::span<const Vertex> b) {
  std::size_t i = 0, j = 0, c = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++c;
      ++i;
      ++j;
    }
  }
  return c;
}

void sort_canonical(std::vector<Collection>& fam) {
  std::sort(fam.begin(), fam.end(), [](const Collection& a, const Collection& b) { return a.sets < b.sets; });
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Neutron: return "N";
    case Family::Heavy: return "H";
    case Family::Wide: return "W";
    case Family::Star: return "S";
  }
  return "?";
}

struct QueryState::Universe {
  const Hypergraph* sets = nullptr;
  std::unique_ptr<Hypergraph> owned;
  std::vector<std::int64_t> to_h;  // empty when sets is the hypergraph itself

  std::int64_t edge_of(EdgeId i) const { return to_h.empty() ? static_cast<std::int64_t>(i) : to_h[i]; }
};

QueryState::QueryState(const Hypergraph& h, int r, const VertexSet& b0, bool verbose)
    : h_(&h), r_(r), verbose_(verbose) {
  if (r < 1) throw Error(ErrorKind::InvalidArgument, "r must be positive");
  infected_step_.assign(h.n(), -1);
  exposed_step_.assign(h.num_edges(), -1);
  const auto start = normalize_vertex_set(b0, h.n());
  for (Vertex v : start) infected_step_[v] = 0;
  b_trace_.push_back(start.size());
  f_trace_.push_back(0);
}

const QueryState::Universe& QueryState::universe(EnumerationMode mode) const {
  if (mode == EnumerationMode::Fast) {
    if (!fast_) {
      fast_ = std::make_shared<Universe>();
      fast_->sets = h_;
    }
    return *fast_;
  }
  if (!full_) {
    if (binomial_count(h_->n(), h_->k()) > kExhaustiveCap) {
      throw Error(ErrorKind::TooLarge, "exhaustive mode needs C(n,k) <= 10^7");
    }
    auto u = std::make_shared<Universe>();
    std::vector<KSet> all;
    for_each_kset(h_->n(), h_->k(), [&](std::span<const Vertex> s) { all.push_back(KSet::from_sorted({s.begin(), s.end()})); });
    u->owned = std::make_unique<Hypergraph>(Hypergraph::from_edges(h_->n(), h_->k(), std::move(all)));
    u->sets = u->owned.get();
    u->to_h.resize(u->sets->num_edges());
    for (std::size_t i = 0; i < u->to_h.size(); ++i) {
      auto found = h_->find(u->sets->edge(static_cast<EdgeId>(i)));
      u->to_h[i] = found ? static_cast<std::int64_t>(*found) : -1;
    }
    full_ = std::move(u);
  }
  return *full_;
}

Families QueryState::build_families(EnumerationMode mode) const { return enumerate(universe(mode)); }

Families QueryState::enumerate(const Universe& uni) const {
  const Hypergraph& U = *uni.sets;
  const auto t = static_cast<std::int64_t>(t_);
  const std::size_t n = h_->n();
  auto in_b = [&](Vertex v) { return infected_step_[v] >= 0 && infected_step_[v] <= t; };
  auto fresh = [&](Vertex v) { return infected_step_[v] == t; };

  std::vector<Vertex> fresh_list;
  for (Vertex v = 0; v < n; ++v) {
    if (fresh(v)) fresh_list.push_back(v);
  }
  // vertices lying on F(t) and on F(t) \ F(t-1)
  std::vector<char> touch(n, 0), touch_new(n, 0);
  for (EdgeId e = 0; e < h_->num_edges(); ++e) {
    if (exposed_step_[e] < 0 || exposed_step_[e] > t) continue;
    for (Vertex v : h_->edge(e)) {
      touch[v] = 1;
      if (exposed_step_[e] == t) touch_new[v] = 1;
    }
  }

  std::vector<int> cnt_b(U.num_edges(), -1);
  auto infected_in = [&](EdgeId i) {
    if (cnt_b[i] < 0) {
      int c = 0;
      for (Vertex v : U.edge(i)) c += in_b(v) ? 1 : 0;
      cnt_b[i] = c;
    }
    return cnt_b[i];
  };
  auto has_fresh = [&](EdgeId i) {
    for (Vertex v : U.edge(i)) {
      if (fresh(v)) return true;
    }
    return false;
  };

  std::uint64_t budget = kExhaustiveCap;
  auto charge = [&](std::uint64_t c) {
    if (c > budget) throw Error(ErrorKind::TooLarge, "more than 10^7 candidate collections");
    budget -= c;
  };

  Families fam;

  // heavily infected and N1 both need a fresh vertex in K
  std::vector<EdgeId> near_fresh;
  for (Vertex u : fresh_list) {
    for (EdgeId i : U.incidence(u)) near_fresh.push_back(i);
  }
  std::sort(near_fresh.begin(), near_fresh.end());
  near_fresh.erase(std::unique(near_fresh.begin(), near_fresh.end()), near_fresh.end());
  charge(near_fresh.size());

  for (EdgeId i : near_fresh) {
    if (infected_in(i) >= 2) fam.heavy.push_back({{i}});
  }

  std::map<EdgeId, Collection> neutron;
  for (EdgeId i : near_fresh) {
    for (Vertex w : U.edge(i)) {
      if (!in_b(w) && touch[w]) {
        neutron[i].sets = {i};
        neutron[i].n1 = true;
        break;
      }
    }
  }
  for (Vertex w = 0; w < n; ++w) {
    if (in_b(w) || !touch_new[w]) continue;
    for (EdgeId i : U.incidence(w)) {
      if (infected_in(i) >= 1) {
        neutron[i].sets = {i};
        neutron[i].n2 = true;
      }
    }
  }
  for (auto& [i, c] : neutron) fam.neutron.push_back(std::move(c));

  if (U.k() >= 3) {
    std::set<std::pair<EdgeId, EdgeId>> pairs;
    std::unordered_map<EdgeId, int> shared;
    for (EdgeId i : near_fresh) {
      shared.clear();
      for (Vertex w : U.edge(i)) {
        if (in_b(w)) continue;
        for (EdgeId j : U.incidence(w)) {
          if (j != i) ++shared[j];
        }
      }
      for (auto [j, c] : shared) {
        if (c >= 2 && infected_in(j) >= 1) pairs.emplace(std::min(i, j), std::max(i, j));
      }
      charge(shared.size());
    }
    for (auto [a, b] : pairs) fam.wide.push_back({{a, b}});
  }

  // hubs: uninfected vertices sharing a single-infected k-set with a fresh vertex
  std::set<Vertex> hubs;
  for (EdgeId i : near_fresh) {
    if (infected_in(i) != 1) continue;
    for (Vertex w : U.edge(i)) {
      if (!in_b(w)) hubs.insert(w);
    }
  }
  const auto r = static_cast<std::size_t>(r_);
  for (Vertex v : hubs) {
    std::vector<EdgeId> arms;
    for (EdgeId i : U.incidence(v)) {
      if (infected_in(i) == 1) arms.push_back(i);
    }
    std::vector<EdgeId> pick;
    std::function<void(std::size_t, bool)> grow = [&](std::size_t from, bool any_fresh) {
      if (pick.size() == r) {
        if (any_fresh) fam.star.push_back({pick});
        charge(1);
        return;
      }
      for (std::size_t a = from; a + (r - pick.size()) <= arms.size(); ++a) {
        const EdgeId cand = arms[a];
        bool ok = true;
        for (EdgeId q : pick) {
          if (overlap(U.edge(q), U.edge(cand)) != 1) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        pick.push_back(cand);
        grow(a + 1, any_fresh || has_fresh(cand));
        pick.pop_back();
      }
    };
    grow(0, false);
  }
  sort_canonical(fam.star);
  return fam;
}

FamilySizes QueryState::family_sizes_exhaustive() const {
  auto fam = build_families(EnumerationMode::Exhaustive);
  return {fam.star.size(), fam.wide.size(), fam.heavy.size(), fam.neutron.size()};
}

const QueryStepRecord& QueryState::qstep(EnumerationMode mode, std::mt19937_64* shuffle) {
  const Universe& uni = universe(mode);
  Families fam = enumerate(uni);
  if (shuffle) {
    for (auto* f : {&fam.neutron, &fam.heavy, &fam.wide, &fam.star}) std::shuffle(f->begin(), f->end(), *shuffle);
  }
  const auto t = static_cast<std::int64_t>(t_);
  const auto next = t + 1;
  const Hypergraph& h = *h_;
  auto in_b = [&](Vertex v) { return infected_step_[v] >= 0 && infected_step_[v] <= t; };
  auto in_f = [&](EdgeId e) { return exposed_step_[e] >= 0 && exposed_step_[e] <= t; };

  std::vector<char> phi_touch(h.n(), 0);
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    if (in_f(e)) {
      for (Vertex v : h.edge(e)) phi_touch[v] = 1;
    }
  }

  QueryStepRecord rec;
  rec.t = t_ + 1;
  rec.sizes = {fam.star.size(), fam.wide.size(), fam.heavy.size(), fam.neutron.size()};
  rec.exposed = 0;

  auto infect = [&](Vertex v) {
    if (infected_step_[v] < 0) {
      infected_step_[v] = next;
      rec.newly_infected.push_back(v);
    }
  };
  auto expose = [&](EdgeId e) {
    exposed_step_[e] = next;
    ++rec.exposed;
    for (Vertex v : h.edge(e)) phi_touch[v] = 1;
  };
  auto in_phi = [&](std::int64_t e) { return e >= 0 && exposed_step_[static_cast<std::size_t>(e)] >= 0; };
  // hypergraph ids of the collection, or empty if some k-set is not an edge
  auto resolve = [&](const Collection& c) {
    std::vector<EdgeId> ids;
    for (EdgeId i : c.sets) {
      const auto e = uni.edge_of(i);
      if (e < 0) return std::vector<EdgeId>{};
      ids.push_back(static_cast<EdgeId>(e));
    }
    return ids;
  };
  auto record = [&](Family f, const std::vector<EdgeId>& ids, const Collection& c) {
    if (verbose_) rec.successes.push_back({f, ids, c.n1, c.n2});
  };

  for (const auto& c : fam.neutron) {
    const auto e = uni.edge_of(c.sets[0]);
    if (in_phi(e)) continue;
    if (e < 0) continue;  // query fails
    const auto K = static_cast<EdgeId>(e);
    expose(K);
    for (Vertex u : h.edge(K)) {
      if (in_b(u)) continue;
      for (EdgeId f : h.incidence(u)) {
        if (!in_f(f)) continue;
        for (Vertex w : h.edge(f)) infect(w);
      }
    }
    for (Vertex w : h.edge(K)) infect(w);
    record(Family::Neutron, {K}, c);
  }

  for (const auto& c : fam.heavy) {
    const auto e = uni.edge_of(c.sets[0]);
    if (in_phi(e) || e < 0) continue;
    const auto K = static_cast<EdgeId>(e);
    expose(K);
    for (Vertex w : h.edge(K)) infect(w);
    record(Family::Heavy, {K}, c);
  }

  for (const auto& c : fam.wide) {
    if (in_phi(uni.edge_of(c.sets[0])) || in_phi(uni.edge_of(c.sets[1]))) continue;
    const auto ids = resolve(c);
    if (ids.empty()) continue;
    for (EdgeId K : ids) {
      expose(K);
      for (Vertex w : h.edge(K)) infect(w);
    }
    record(Family::Wide, ids, c);
  }

  for (const auto& c : fam.star) {
    bool discard = false;
    for (EdgeId i : c.sets) discard = discard || in_phi(uni.edge_of(i));
    if (discard) continue;
    const Hypergraph& U = *uni.sets;
    for (EdgeId i : c.sets) {
      for (Vertex u : U.edge(i)) {
        if (!in_b(u) && phi_touch[u]) discard = true;
      }
    }
    if (discard) continue;
    const auto ids = resolve(c);
    if (ids.empty()) continue;
    for (EdgeId K : ids) expose(K);
    if (r_ == 2) {
      for (EdgeId K : ids) {
        for (Vertex w : h.edge(K)) infect(w);
      }
    } else {
      // the hub is the one vertex common to all arms
      for (Vertex w : h.edge(ids[0])) {
        bool everywhere = true;
        for (EdgeId K : ids) everywhere = everywhere && std::binary_search(h.edge(K).begin(), h.edge(K).end(), w);
        if (everywhere) infect(w);
      }
    }
    record(Family::Star, ids, c);
  }

  std::sort(rec.newly_infected.begin(), rec.newly_infected.end());
  ++t_;
  b_trace_.push_back(b_trace_.back() + rec.newly_infected.size());
  f_trace_.push_back(f_trace_.back() + rec.exposed);
  steps_.push_back(std::move(rec));
  return steps_.back();
}

QueryResult QueryState::run(EnumerationMode mode, std::mt19937_64* shuffle) {
  std::size_t productive = 0;
  while (true) {
    const auto& rec = qstep(mode, shuffle);
    if (rec.exposed == 0 && rec.newly_infected.empty()) break;
    ++productive;
  }
  QueryResult res;
  res.final_set = infected_set();
  res.trace = b_trace_;
  res.exposed = f_trace_;
  res.productive_steps = productive;
  res.detail = {h_->n(), verbose_, infected_step_, exposed_step_, steps_};
  return res;
}

VertexSet QueryState::infected_set() const { return infected_by(static_cast<std::int64_t>(t_)); }

VertexSet QueryState::infected_by(std::int64_t s) const {
  VertexSet out;
  for (Vertex v = 0; v < infected_step_.size(); ++v) {
    if (infected_step_[v] >= 0 && infected_step_[v] <= s) out.push_back(v);
  }
  return out;
}

std::vector<EdgeId> QueryState::exposed_by(std::int64_t s) const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < exposed_step_.size(); ++e) {
    if (exposed_step_[e] >= 0 && exposed_step_[e] <= s) out.push_back(e);
  }
  return out;
}

QueryResult run_query(const Hypergraph& h, int r, const VertexSet& b0, bool verbose) {
  QueryState s(h, r, b0, verbose);
  return s.run();
}

InfectionForest extract_infection_forest(const Hypergraph& h, const QueryTrace& trace, std::size_t t0) {
  if (!trace.verbose) throw Error(ErrorKind::MissingTrace, "forest extraction needs a verbose run");
  const auto& inf = trace.infected_step;
  const auto& exp = trace.exposed_step;
  InfectionForest forest;
  forest.t0 = t0;
  for (Vertex v = 0; v < inf.size(); ++v) {
    if (inf[v] == static_cast<std::int64_t>(t0)) forest.roots.push_back(v);
  }

  for (const auto& rec : trace.steps) {
    const auto t = static_cast<std::int64_t>(rec.t) - 1;  // families built from B(t), F(t)
    if (t < static_cast<std::int64_t>(t0)) continue;
    auto in_b = [&](Vertex v) { return inf[v] >= 0 && inf[v] <= t; };
    auto fresh = [&](Vertex v) { return inf[v] == t; };
    auto in_f = [&](EdgeId e) { return exp[e] >= 0 && exp[e] <= t; };
    auto newly = [&](Vertex v) { return inf[v] == t + 1; };

    std::map<Vertex, Vertex> best;
    auto offer = [&](Vertex child, Vertex parent) {
      if (!newly(child)) return;
      auto it = best.find(child);
      if (it == best.end() || parent < it->second) best[child] = parent;
    };

    for (const auto& q : rec.successes) {
      if (q.family != Family::Neutron) {
        VertexSet parents, targets;
        for (EdgeId e : q.edges) {
          for (Vertex v : h.edge(e)) {
            if (fresh(v)) parents.push_back(v);
            targets.push_back(v);
          }
        }
        for (Vertex v : targets) {
          for (Vertex u : parents) offer(v, u);
        }
        continue;
      }
      const EdgeId K = q.edges[0];
      VertexSet targets(h.edge(K).begin(), h.edge(K).end());
      VertexSet parents;
      if (q.n1) {
        for (Vertex u : h.edge(K)) {
          if (fresh(u)) parents.push_back(u);
        }
      }
      for (Vertex w : h.edge(K)) {
        if (in_b(w)) continue;
        for (EdgeId e : h.incidence(w)) {
          if (!in_f(e)) continue;
          for (Vertex v : h.edge(e)) {
            targets.push_back(v);
            if (q.n2 && exp[e] == t && fresh(v)) parents.push_back(v);
          }
        }
      }
      for (Vertex v : targets) {
        for (Vertex u : parents) offer(v, u);
      }
    }
    for (Vertex v : rec.newly_infected) {
      auto it = best.find(v);
      if (it == best.end()) {
        forest.orphans.push_back(v);
      } else {
        forest.parent[v] = it->second;
      }
    }
  }
  return forest;
}

std::string query_trace_json(const Hypergraph& h, int r, std::size_t a0_size, const QueryResult& result) {
  nlohmann::ordered_json j;
  j["process"] = "query";
  j["n"] = h.n();
  j["k"] = h.k();
  j["r"] = r;
  j["a0_size"] = a0_size;
  j["steps"] = result.trace;
  j["final_size"] = result.final_set.size();
  auto fams = nlohmann::ordered_json::array();
  for (const auto& rec : result.detail.steps) {
    nlohmann::ordered_json f;
    f["t"] = rec.t;
    f["S"] = rec.sizes.S;
    f["W"] = rec.sizes.W;
    f["H"] = rec.sizes.H;
    f["N"] = rec.sizes.N;
    fams.push_back(std::move(f));
  }
  j["families"] = std::move(fams);
  j["exposed"] = result.exposed;
  return j.dump();
}

}  // namespace hyperboot
