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

#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "hyperboot/error.hpp"
#include "hyperboot/mild_process.hpp"
#include "hyperboot/percolation.hpp"

using namespace hyperboot;
using fixtures::graph;

namespace {

RegimeParams schedule_params(const Hypergraph& h, int r) {
  RegimeParams prm;
  prm.n = h.n();
  prm.k = static_cast<int>(h.k());
  prm.r = r;
  const double total = static_cast<double>(binomial_count(h.n(), h.k()));
  prm.p = std::clamp(static_cast<double>(h.num_edges()) / total, 1e-9, 0.5);
  prm.side = Side::Supercritical;
  return prm;
}

}  // namespace

TEST_CASE("schedule constants") {
  RegimeParams prm{10000, 2, 2, 1e-3};
  const auto s = MildSchedule::from_params(prm, 300.0);
  CHECK(s.zeta == doctest::Approx(2.154434690).epsilon(1e-9));
  CHECK(s.t_low == doctest::Approx(464.1588834).epsilon(1e-9));
  CHECK(s.t_high == doctest::Approx(1467.799268).epsilon(1e-9));
  CHECK(s.t_low < s.t_high);
  CHECK(s.c.front() == 300.0);

  prm.eps = 0.05;
  prm.delta = 0.2;
  CHECK_THROWS_AS(MildSchedule::from_params(prm, 300.0), Error);
}

TEST_CASE("batch size cases") {
  RegimeParams prm{10000, 2, 2, 1e-3};
  auto empty = graph(3000, 2, {});
  auto first = [&](std::size_t c_size, double c0) {
    VertexSet c(c_size);
    for (std::size_t i = 0; i < c_size; ++i) c[i] = static_cast<Vertex>(i);
    MildState st(empty, 2, c);
    return activation_batch_size(st, MildSchedule::from_params(prm, c0));
  };
  CHECK(first(0, 1.0) == 0);
  CHECK(first(300, 300.0) == 300);
  CHECK(first(300, 100.0) == 100);
  CHECK(first(300, 100.5) == 101);
  CHECK(first(1000, 1000.0) == 465);
  CHECK(first(2000, 2000.0) == 1468);

  MildState st(empty, 2, {0, 1, 2});
  CHECK(activation_batch_size(st, MildSchedule::all()) == 3);
}

TEST_CASE("two batch vertices on one edge block exposure") {
  auto h = graph(3, 3, {{0, 1, 2}});
  const auto res = run_mild(h, 2, {0, 1}, MildSchedule::all());
  CHECK(res.final_set == VertexSet{0, 1});
  CHECK(res.exposed == 0);
  CHECK(run_bootstrap(h, 2, {0, 1}).final_set == VertexSet{0, 1, 2});
}

TEST_CASE("graph case hand trace") {
  auto g = graph(4, 2, {{0, 2}, {1, 2}, {2, 3}});
  MildState st(g, 2, {0, 1});
  const auto sched = MildSchedule::all();
  CHECK(st.mstep(sched) == VertexSet{2});
  CHECK(st.last_batch() == VertexSet{0, 1});
  CHECK(st.last_exposed().size() == 2);
  CHECK(st.level(2) == 2);
  CHECK(st.level(0) == -1);
  CHECK(st.mstep(sched).empty());
  CHECK(st.level(3) == 1);
  CHECK(st.done());
  CHECK(st.infected_set() == VertexSet{0, 1, 2});
}

TEST_CASE("r = 2 infects the closed neighbourhood in exposed edges") {
  auto h = graph(6, 3, {{0, 2, 3}, {1, 2, 4}, {4, 5, 0}});
  MildState st(h, 2, {0, 1});
  // {0,4,5} is exposed from 0 along with {0,2,3}; {1,2,4} from 1.
  CHECK(st.mstep(MildSchedule::all()) == VertexSet{2, 3, 4, 5});
  CHECK(st.level(2) == 2);
  CHECK(st.level(3) == 1);
  CHECK(st.level(4) == 2);
}

TEST_CASE("r = 3 needs three distinct batch neighbours") {
  auto h = graph(5, 3, {{0, 3, 4}, {1, 3, 4}});
  const auto res = run_mild(h, 3, {0, 1, 2}, MildSchedule::all());
  CHECK(res.final_set == VertexSet{0, 1, 2});
  CHECK(res.levels.back() == std::vector<std::size_t>{2, 2, 2, 0});

  auto g = graph(5, 2, {{0, 4}, {1, 4}, {2, 4}});
  const auto ok = run_mild(g, 3, {0, 1, 2}, MildSchedule::all());
  CHECK(ok.final_set == VertexSet{0, 1, 2, 4});
}

TEST_CASE("Xi counts edges sharing batch and uninfected vertices") {
  auto h = graph(5, 3, {{0, 2, 3}, {0, 2, 4}});
  MildState st(h, 2, {0});
  st.mstep(MildSchedule::all());
  CHECK(st.xi_size() == 2);
  CHECK(st.level(2) == 1);

  auto disjoint = graph(5, 3, {{0, 1, 2}, {0, 3, 4}});
  MildState d(disjoint, 2, {0});
  d.mstep(MildSchedule::all());
  CHECK(d.xi_size() == 0);
}

TEST_CASE("trivial starts") {
  auto h = graph(5, 2, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(run_mild(h, 2, {}, MildSchedule::all()).final_set.empty());
  CHECK(run_mild(h, 2, {0, 1, 2, 3, 4}, MildSchedule::all()).final_set.size() == 5);
  auto empty = graph(5, 2, {});
  CHECK(run_mild(empty, 2, {1, 3}, MildSchedule::all()).final_set == VertexSet{1, 3});
  CHECK_THROWS_AS(MildState(h, 1, {0}), Error);
  CHECK_THROWS_AS(MildState(h, 2, {7}), Error);
}

TEST_CASE("random instances: coupling, discipline, nesting") {
  std::mt19937_64 rng(505);
  for (int it = 0; it < 150; ++it) {
    const auto inst = fixtures::random_instance(rng, 200);
    const auto& h = inst.h;
    const auto a_f = run_bootstrap(h, inst.r, inst.a0).final_set;
    const double c0 = std::max<double>(1.0, static_cast<double>(inst.a0.size()));
    for (const auto& sched : {MildSchedule::all(), MildSchedule::from_params(schedule_params(h, inst.r), c0)}) {
      MildState st(h, inst.r, inst.a0);
      std::size_t guard = 0;
      while (!st.done() && guard++ < 10 * h.n()) {
        std::vector<char> before(h.n());
        for (Vertex v = 0; v < h.n(); ++v) before[v] = st.infected(v);
        std::vector<int> lv(h.n());
        for (Vertex v = 0; v < h.n(); ++v) lv[v] = st.level(v);
        const auto fresh = st.mstep(sched);
        const auto& batch = st.last_batch();
        for (EdgeId e : st.last_exposed()) {
          int in_batch = 0, in_c = 0;
          for (Vertex w : h.edge(e)) {
            in_batch += std::binary_search(batch.begin(), batch.end(), w);
            in_c += before[w];
          }
          CHECK(in_batch == 1);
          CHECK(in_c == 1);
        }
        if (inst.r >= 3) {
          VertexSet promoted;
          for (Vertex v = 0; v < h.n(); ++v) {
            if (!before[v] && lv[v] < inst.r && st.level(v) == inst.r) promoted.push_back(v);
          }
          CHECK(fresh == promoted);
        }
        const auto ls = st.level_sizes();
        for (int i = 0; i < inst.r; ++i) CHECK(ls[i] >= ls[i + 1]);
        CHECK(ls[0] == h.n() - inst.a0.size());
      }
      CHECK(fixtures::subset_of(st.infected_set(), a_f));
      const auto again = run_mild(h, inst.r, inst.a0, sched);
      CHECK(fixtures::subset_of(again.final_set, a_f));
      CHECK(again.final_set == run_mild(h, inst.r, inst.a0, sched).final_set);
    }
  }
}

TEST_CASE("trace json") {
  auto g = graph(4, 2, {{0, 2}, {1, 2}, {2, 3}});
  const auto res = run_mild(g, 2, {0, 1}, MildSchedule::all());
  CHECK(mild_trace_json(g, 2, 2, res) ==
        R"({"process":"mild","n":4,"k":2,"r":2,"a0_size":2,"steps":[2,3,3],"final_size":3,)"
        R"("levels":[[2,0,0],[2,1,1],[2,2,1]],"activated":[2,1],"xi":[0,0],"exposed":3})");
}
