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

// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hyperboot/branching.hpp"
#include "hyperboot/experiments.hpp"
#include "hyperboot/mild_process.hpp"
#include "hyperboot/percolation.hpp"
#include "hyperboot/query_process.hpp"
#include "hyperboot/theory.hpp"

using namespace hyperboot;

namespace {

// Pinned tolerances and sizes.
constexpr std::size_t kPhaseTrials = 20;
constexpr std::size_t kPhaseNeeded = 18;
constexpr double kPhaseLow = 0.8;
constexpr double kPhaseHigh = 1.2;
constexpr std::uint64_t kPhaseSeed = 20261018;
constexpr double kHyperMinAStar = 2000.0;

constexpr std::size_t kSandwichTrials = 500;
constexpr std::size_t kSandwichShuffleInstances = 20;
constexpr std::size_t kSandwichShuffles = 50;

constexpr int kOracleInstances = 500;

constexpr double kDwassTol = 1e-9;
constexpr int kDwassMaxM = 20;

constexpr int kTrajTuples = 20;
constexpr int kTrajSteps = 50;
constexpr double kTrajRelTol = 1e-12;
constexpr double kX0ResidualTol = 1e-10;

constexpr int kFamilyStates = 100;

constexpr int kTailSamples = 100000;
constexpr double kTailSigmas = 3.0;

constexpr double kOdeBelow = 0.9;
constexpr double kOdeAbove = 1.1;

int failures = 0;

void report(int id, bool pass, const std::string& what, double seconds) {
  std::printf("criterion %d: %s  %s  [%.1fs]\n", id, pass ? "PASS" : "FAIL", what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class F>
void timed(int id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string what;
  bool pass = false;
  try {
    pass = body(what);
  } catch (const std::exception& e) {
    what += std::string(" exception: ") + e.what();
  }
  report(id, pass, what, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool phase(const RegimeParams& prm, std::string& what) {
  const auto rows = phase_scan(prm, {kPhaseLow, kPhaseHigh}, kPhaseTrials, kPhaseSeed);
  const auto small = static_cast<std::size_t>(std::lround(rows[0].frac_small * kPhaseTrials));
  const auto large = static_cast<std::size_t>(std::lround(rows[1].frac_large * kPhaseTrials));
  what = fmt("n=%zu k=%d r=%d p=%.6g a*=%.1f: small %zu/%zu at %.1f a_c (mean final %.1f), "
             "large %zu/%zu at %.1f a_c (mean final %.1f), need %zu",
             prm.n, prm.k, prm.r, prm.p, a_star(prm), small, kPhaseTrials, kPhaseLow, rows[0].mean_final, large,
             kPhaseTrials, kPhaseHigh, rows[1].mean_final, kPhaseNeeded);
  return small >= kPhaseNeeded && large >= kPhaseNeeded;
}

}  // namespace

int main() {
  timed(1, [](std::string& what) {
    RegimeParams prm;
    prm.n = 100000;
    prm.k = 2;
    prm.r = 2;
    prm.p = std::pow(1e5, -0.9);
    return phase(prm, what);
  });

  timed(2, [](std::string& what) { return phase(smallest_regime_params(3, 2, kHyperMinAStar), what); });

  timed(3, [](std::string& what) {
    // 20 settings x 25 trials: k, r in {2,3}, five average degrees, n <= 300.
    const double degrees[] = {0.5, 1.5, 3.0, 6.0, 12.0};
    const std::size_t starts[] = {10, 25, 50};
    std::size_t violations = 0, trials = 0, shuffled = 0, setting = 0;
    std::size_t strict_lower = 0, strict_upper = 0;
    for (int k = 2; k <= 3; ++k) {
      for (int r = 2; r <= 3; ++r) {
        for (double d : degrees) {
          RegimeParams prm;
          prm.n = k == 2 ? 300 : 200;
          prm.k = k;
          prm.r = r;
          prm.p = std::min(0.5, d * static_cast<double>(prm.n) / k /
                                    static_cast<double>(binomial_count(prm.n, static_cast<std::uint64_t>(k))));
          const std::size_t per = kSandwichTrials / 20;
          const auto rep = sandwich_check(prm, starts[setting % 3], per, 1000 + setting, 1, kSandwichShuffles);
          violations += rep.violations;
          trials += rep.trials;
          shuffled += rep.shuffled_runs;
          for (const auto& t : rep.rows) {
            strict_lower += t.c_size < t.a_size;
            strict_upper += t.a_size < t.b_size;
          }
          ++setting;
        }
      }
    }
    what = fmt("%zu trials, %zu shuffled query runs on %zu instances, %zu violations "
               "(C_f strictly smaller in %zu, B_f strictly larger in %zu)",
               trials, shuffled, kSandwichShuffleInstances, violations, strict_lower, strict_upper);
    return violations == 0 && trials == kSandwichTrials && shuffled == kSandwichShuffleInstances * kSandwichShuffles;
  });

  timed(4, [](std::string& what) {
    std::mt19937_64 rng(404);
    int mismatches = 0;
    for (int i = 0; i < kOracleInstances; ++i) {
      const auto inst = fixtures::random_instance(rng, 300);
      if (run_bootstrap(inst.h, inst.r, inst.a0).final_set != brute_force_fixpoint(inst.h, inst.r, inst.a0)) {
        ++mismatches;
      }
    }
    what = fmt("%d instances, %d mismatches", kOracleInstances, mismatches);
    return mismatches == 0;
  });

  timed(5, [](std::string& what) {
    std::vector<std::vector<OffspringTerm>> dists;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) dists.push_back({{1, q}});
    for (double q : {0.05, 0.2, 0.33, 0.5, 0.8}) dists.push_back({{1, q}, {1, q}, {1, q}});
    const double pairs[5][2] = {{0.1, 0.2}, {0.25, 0.25}, {0.4, 0.1}, {0.05, 0.9}, {0.6, 0.6}};
    for (const auto& pr : pairs) dists.push_back({{2, pr[0]}, {1, pr[1]}});
    double worst = 0.0;
    int checked = 0;
    for (const auto& terms : dists) {
      for (int ell = 1; ell <= 3; ++ell) {
        const GWProcess proc{OffspringDistribution(terms), ell};
        for (int m = ell; m <= kDwassMaxM; ++m) {
          worst = std::max(worst, std::abs(dwass_pmf(proc, m) - total_progeny_pmf_dp(proc, m)));
          ++checked;
        }
      }
    }
    what = fmt("%zu distributions, %d (ell, m) pairs, max |dwass - dp| = %.3g (tol %.0e)", dists.size(), checked,
               worst, kDwassTol);
    return worst <= kDwassTol;
  });

  timed(6, [](std::string& what) {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_beta = 0.0, worst_gamma = 0.0, worst_resid = 0.0, min_margin = INFINITY;
    bool below = true;
    for (int i = 0; i < kTrajTuples; ++i) {
      RegimeParams prm;
      prm.k = 2 + static_cast<int>(rng() % 3);
      prm.r = 2 + static_cast<int>(rng() % 3);
      prm.n = static_cast<std::size_t>(std::pow(10.0, 3.0 + 4.0 * unit(rng)));
      const double m_low = std::pow(10.0, 1.0 + 2.0 * unit(rng));
      prm.p = std::min(0.5, m_low / std::pow(static_cast<double>(prm.n), prm.k - 1));
      prm.eps = 0.05 + 0.55 * unit(rng);
      prm.delta = (0.05 + 0.9 * unit(rng)) * prm.eps / (1.0 + prm.eps);

      prm.side = Side::Subcritical;
      const auto bt = beta_trajectory(prm, kTrajSteps);
      for (const auto& row : bt.rows) {
        worst_beta = std::max(worst_beta, std::abs(row.b / bt.a_star - row.beta) / row.beta);
      }
      below = below && bt.below_x0;
      worst_resid =
          std::max(worst_resid, std::abs(bt.x0 - (1.0 + prm.delta) * std::pow(bt.x0, prm.r) / prm.r - bt.beta0));

      prm.side = Side::Supercritical;
      const auto gt = gamma_trajectory(prm, kTrajSteps);
      for (std::size_t t = 0; t < gt.rows.size(); ++t) {
        const auto& row = gt.rows[t];
        for (int j = 0; j <= prm.r; ++j) {
          const double x = row.c_def[j], y = row.c_closed[j];
          if (x != y) worst_gamma = std::max(worst_gamma, std::abs(x - y) / std::max(std::abs(x), std::abs(y)));
        }
        worst_gamma = std::max(worst_gamma, std::abs(row.c / gt.a_star - row.gamma) / row.gamma);
        if (t > 0) min_margin = std::min(min_margin, row.gamma - gt.rows[t - 1].gamma - gt.Delta);
      }
    }
    what = fmt("%d tuples: beta rel err %.3g, gamma/c_i rel err %.3g (tol %.0e), x0 residual %.3g, "
               "beta below x0 %s, min(gamma gain - Delta) = %.4g",
               kTrajTuples, worst_beta, worst_gamma, kTrajRelTol, worst_resid, below ? "yes" : "no", min_margin);
    return worst_beta <= kTrajRelTol && worst_gamma <= kTrajRelTol && worst_resid <= kX0ResidualTol && below &&
           min_margin > 0.0;
  });

  timed(7, [](std::string& what) {
    std::mt19937_64 rng(707);
    int states = 0, bad = 0, instances = 0;
    while (states < kFamilyStates) {
      const std::size_t n = 6 + rng() % 7;
      const std::size_t k = 2 + rng() % 2;
      const int r = 2 + static_cast<int>(rng() % 2);
      const double p = 0.15 + 0.5 * static_cast<double>(rng() % 100) / 100.0;
      const auto h = materialize_from_oracle(EdgeOracle(n, k, p, rng()));
      const auto a0 = fixtures::random_subset(n, 1 + rng() % 4, rng);
      QueryState st(h, r, a0);
      ++instances;
      while (states < kFamilyStates) {
        const auto t = static_cast<std::int64_t>(st.t());
        const auto sz = st.family_sizes_exhaustive();
        const auto bd = fixtures::family_size_bounds(static_cast<double>(n), static_cast<int>(k), r,
                                                     static_cast<double>(st.infected_by(t).size()),
                                                     static_cast<double>(st.infected_by(t - 1).size()));
        ++states;
        bad += !(sz.S <= bd.S && sz.W <= bd.W && sz.H <= bd.H && sz.N <= bd.N);
        const auto& rec = st.qstep(EnumerationMode::Exhaustive);
        if (rec.exposed == 0 && rec.newly_infected.empty()) break;
      }
    }
    what = fmt("%d exhaustive states over %d instances, %d over a family-size bound", states, instances, bad);
    return bad == 0;
  });

  timed(8, [](std::string& what) {
    std::mt19937_64 rng(808);
    // McDiarmid: Binomial(N, q) sums, unit increments.
    const int Ns[] = {50, 100, 200, 400, 1000, 50, 100, 200, 400, 1000};
    const double qs[] = {0.1, 0.3, 0.5, 0.05, 0.02, 0.5, 0.2, 0.1, 0.3, 0.01};
    const double zs[] = {1.0, 1.5, 2.0, 2.5, 3.0, 3.0, 2.5, 2.0, 1.5, 1.0};
    int mc_bad = 0;
    double mc_worst = -INFINITY;
    for (int s = 0; s < 10; ++s) {
      std::binomial_distribution<int> bin(Ns[s], qs[s]);
      const double mean = Ns[s] * qs[s], var = mean * (1.0 - qs[s]);
      const double theta = zs[s] * std::sqrt(var);
      int hits = 0;
      for (int i = 0; i < kTailSamples; ++i) hits += bin(rng) - mean >= theta;
      const double f = static_cast<double>(hits) / kTailSamples;
      const double se = std::sqrt(f * (1.0 - f) / kTailSamples);
      const double slack = f - mcdiarmid_bound(var, 1.0, theta) - kTailSigmas * se;
      mc_worst = std::max(mc_worst, slack);
      mc_bad += slack > 0.0;
    }
    // GW tail: subcritical offspring laws, P[Z > (1+chi) ell].
    struct Setting {
      std::vector<OffspringTerm> terms;
      int ell;
      double chi_scale;
    };
    const std::vector<Setting> gw = {
        {{{1, 0.3}}, 10, 2.0},           {{{1, 0.5}}, 20, 2.0},           {{{1, 0.2}, {1, 0.2}, {1, 0.2}}, 10, 2.0},
        {{{1, 0.1}, {1, 0.1}, {1, 0.1}}, 40, 3.0}, {{{2, 0.2}, {1, 0.3}}, 20, 2.0}, {{{2, 0.1}, {1, 0.1}}, 40, 4.0},
        {{{1, 0.6}}, 30, 1.5},           {{{2, 0.3}}, 20, 2.0},           {{{3, 0.1}, {1, 0.2}}, 30, 3.0},
        {{{1, 0.25}, {1, 0.25}}, 50, 2.5}};
    int gw_bad = 0;
    double gw_worst = -INFINITY;
    for (std::size_t s = 0; s < gw.size(); ++s) {
      const GWProcess proc{OffspringDistribution(gw[s].terms), gw[s].ell};
      const double mu = proc.offspring.mu();
      const double chi = gw[s].chi_scale * mu / (1.0 - mu);
      const double threshold = (1.0 + chi) * gw[s].ell;
      int hits = 0;
      for (int i = 0; i < kTailSamples; ++i) {
        const auto z = sample_total_progeny(proc, derive_seed(900 + s, static_cast<std::uint64_t>(i)));
        hits += !z || static_cast<double>(*z) > threshold;
      }
      const double f = static_cast<double>(hits) / kTailSamples;
      const double se = std::sqrt(f * (1.0 - f) / kTailSamples);
      const double slack = f - gw_tail_bound(mu, proc.offspring.M(), chi, gw[s].ell) - kTailSigmas * se;
      gw_worst = std::max(gw_worst, slack);
      gw_bad += slack > 0.0;
    }
    // FKG on n=4, k=2, p=3/10: A = triangle on {0,1,2} present (up-set),
    // B = vertex 3 isolated (down-set), exact rational arithmetic.
    using boost::multiprecision::cpp_rational;
    const cpp_rational p(3, 10);
    const auto kedges = [] {
      std::vector<std::pair<int, int>> e;
      for (int u = 0; u < 4; ++u)
        for (int v = u + 1; v < 4; ++v) e.emplace_back(u, v);
      return e;
    }();
    cpp_rational pa = 0, pb = 0, pab = 0;
    for (unsigned mask = 0; mask < (1u << kedges.size()); ++mask) {
      cpp_rational w = 1;
      bool has01 = false, has12 = false, has02 = false, touches3 = false;
      for (std::size_t i = 0; i < kedges.size(); ++i) {
        const bool on = (mask >> i) & 1u;
        w *= on ? p : 1 - p;
        if (!on) continue;
        const auto [u, v] = kedges[i];
        has01 |= u == 0 && v == 1;
        has12 |= u == 1 && v == 2;
        has02 |= u == 0 && v == 2;
        touches3 |= v == 3;
      }
      const bool a = has01 && has12 && has02, b = !touches3;
      if (a) pa += w;
      if (b) pb += w;
      if (a && b) pab += w;
    }
    const cpp_rational pa_pb = pa * pb;
    const bool fkg = pab <= pa_pb;
    what = fmt("McDiarmid 10 settings, %d over (max excess %.3g); GW tail 10 settings, %d over (max excess %.3g); "
               "FKG P[AB]=%s P[A]P[B]=%s %s",
               mc_bad, mc_worst, gw_bad, gw_worst, pab.str().c_str(), pa_pb.str().c_str(), fkg ? "ok" : "violated");
    return mc_bad == 0 && gw_bad == 0 && fkg;
  });

  timed(9, [](std::string& what) {
    bool ok = true;
    std::string detail;
    for (int r = 2; r <= 4; ++r) {
      const double pc = phi_crit(r);
      const auto lo = ode_heuristic(r, kOdeBelow * pc);
      const auto hi = ode_heuristic(r, kOdeAbove * pc);
      ok = ok && lo.stalled && !lo.escaped && hi.escaped;
      detail += fmt("r=%d phi_c=%.6g stall=%s escape=%s(x=%.3g); ", r, pc, lo.stalled ? "yes" : "no",
                    hi.escaped ? "yes" : "no", hi.x_end);
    }
    what = detail;
    return ok;
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
