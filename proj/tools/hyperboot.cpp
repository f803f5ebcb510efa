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

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hyperboot/branching.hpp"
#include "hyperboot/error.hpp"
#include "hyperboot/experiments.hpp"
#include "hyperboot/theory.hpp"
#include "json.hpp"

using namespace hyperboot;

namespace {

void add_regime(CLI::App* cmd, RegimeParams& prm) {
  cmd->add_option("--n", prm.n, "number of vertices")->required();
  cmd->add_option("--k", prm.k, "edge size")->required();
  cmd->add_option("--r", prm.r, "infection threshold")->required();
  cmd->add_option("--p", prm.p, "edge probability")->required();
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v;
    if (!(is >> v) || !(is >> std::ws).eof()) {
      throw Error(ErrorKind::ParseError, std::string("bad ") + what + " entry '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::ParseError, std::string("empty ") + what + " list");
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot open " + path);
  os << text;
}

nlohmann::ordered_json num_or_null(double x) {
  return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

int cmd_theory(RegimeParams prm, int steps, bool csv, const std::string& traj) {
  prm.side = Side::Subcritical;
  const auto margin = regime_margin(prm);
  if (!csv) {
    nlohmann::ordered_json j;
    j["n"] = prm.n;
    j["k"] = prm.k;
    j["r"] = prm.r;
    j["p"] = prm.p;
    j["eps"] = prm.eps;
    j["delta"] = prm.delta;
    j["eta"] = eta(prm.k, prm.r);
    j["a_star"] = num_or_null(a_star(prm));
    j["a_c"] = num_or_null(a_crit(prm));
    j["m_low"] = margin.m_low;
    j["m_high"] = margin.m_high;
    j["regime_ok"] = margin.ok;
    try {
      j["x0"] = beta_trajectory(prm, 0).x0;
    } catch (const Error&) {
      j["x0"] = nullptr;
    }
    try {
      j["Delta"] = delta_floor(prm.eps, prm.delta, prm.r);
    } catch (const Error&) {
      j["Delta"] = nullptr;
    }
    j["phi_c"] = phi_crit(prm.r);
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  if (traj == "beta") {
    const auto tab = beta_trajectory(prm, steps);
    std::cout << "t,b,beta\n";
    for (const auto& row : tab.rows) std::cout << row.t << ',' << fmt12(row.b) << ',' << fmt12(row.beta) << '\n';
    return 0;
  }
  prm.side = Side::Supercritical;
  const auto tab = gamma_trajectory(prm, steps);
  std::cout << "t,c,gamma";
  for (int i = 0; i <= prm.r; ++i) std::cout << ",c_" << i;
  std::cout << '\n';
  for (const auto& row : tab.rows) {
    std::cout << row.t << ',' << fmt12(row.c) << ',' << fmt12(row.gamma);
    for (double ci : row.c_def) std::cout << ',' << fmt12(ci);
    std::cout << '\n';
  }
  return 0;
}

int cmd_gw(const std::string& weights, const std::string& probs, int roots, int m_max, std::uint64_t samples,
           double chi, std::uint64_t seed) {
  const auto w = parse_list<int>(weights, "weight");
  const auto q = parse_list<double>(probs, "probability");
  if (w.size() != q.size()) throw Error(ErrorKind::InvalidArgument, "weights and probs differ in length");
  std::vector<OffspringTerm> terms;
  for (std::size_t i = 0; i < w.size(); ++i) terms.push_back({w[i], q[i]});
  const GWProcess proc{OffspringDistribution(terms), roots};

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(m_max) + 1, 0);
  std::vector<std::uint64_t> sizes;
  sizes.reserve(samples);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const auto z = sample_total_progeny(proc, derive_seed(seed, s));
    const std::uint64_t v = z ? *z : std::numeric_limits<std::uint64_t>::max();
    sizes.push_back(v);
    if (v <= static_cast<std::uint64_t>(m_max)) ++counts[v];
  }
  const double ns = samples == 0 ? 1.0 : static_cast<double>(samples);

  std::cout << "m,pmf_dp,pmf_dwass,abs_diff,empirical\n";
  for (int m = std::max(roots, 1); m <= m_max; ++m) {
    const double dp = total_progeny_pmf_dp(proc, m);
    const double dw = dwass_pmf(proc, m);
    std::cout << m << ',' << fmt12(dp) << ',' << fmt12(dw) << ',' << fmt12(std::abs(dp - dw)) << ','
              << fmt12(static_cast<double>(counts[m]) / ns) << '\n';
  }

  const double mu = proc.offspring.mu();
  if (!(mu > 0.0 && mu < 1.0)) {
    std::cerr << "mu = " << fmt12(mu) << " is not subcritical; tail bound skipped\n";
    return 0;
  }
  if (!(chi > 0.0)) chi = 2.0 * mu / (1.0 - mu);
  const double threshold = (1.0 + chi) * roots;
  std::uint64_t above = 0;
  for (auto v : sizes) above += static_cast<double>(v) > threshold;
  const double freq = static_cast<double>(above) / ns;
  const double se = std::sqrt(freq * (1.0 - freq) / ns);
  const double bound = gw_tail_bound(mu, proc.offspring.M(), chi, roots);
  std::cout << "\nchi,threshold,empirical_tail,std_error,tail_bound,within\n";
  std::cout << fmt12(chi) << ',' << fmt12(threshold) << ',' << fmt12(freq) << ',' << fmt12(se) << ','
            << fmt12(bound) << ',' << (freq <= bound + 3.0 * se ? "true" : "false") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bootstrap percolation on random hypergraphs"};
  app.require_subcommand(1);

  RegimeParams prm;
  int steps = 50;
  bool as_json = false, as_csv = false;
  std::string traj = "beta";
  auto* theory = app.add_subcommand("theory", "threshold quantities and trajectories");
  add_regime(theory, prm);
  theory->add_option("--eps", prm.eps, "epsilon")->capture_default_str();
  theory->add_option("--delta", prm.delta, "delta")->capture_default_str();
  theory->add_option("--steps", steps, "trajectory length")->capture_default_str();
  auto* json_flag = theory->add_flag("--json", as_json, "print scalars as JSON (default)");
  theory->add_flag("--csv", as_csv, "print a trajectory as CSV")->excludes(json_flag);
  theory->add_option("--traj", traj, "trajectory for --csv")->check(CLI::IsMember({"beta", "gamma"}))
      ->capture_default_str();

  std::size_t a = 0;
  std::uint64_t seed = 0;
  std::string process = "bootstrap", trace_file;
  auto* simulate = app.add_subcommand("simulate", "one trial");
  add_regime(simulate, prm);
  simulate->add_option("--a", a, "initial infection size")->required();
  simulate->add_option("--seed", seed, "master seed")->required();
  simulate->add_option("--process", process, "process")
      ->check(CLI::IsMember({"bootstrap", "query", "mild"}))
      ->capture_default_str();
  simulate->add_option("--trace", trace_file, "write the step trace as JSON");

  std::string ratios, out_file;
  std::size_t trials = 0;
  unsigned threads = 0;
  auto* scan = app.add_subcommand("scan", "phase scan over a/a_c");
  add_regime(scan, prm);
  scan->add_option("--ratios", ratios, "LO:HI:STEP")->required();
  scan->add_option("--trials", trials, "trials per ratio")->required();
  scan->add_option("--seed", seed, "master seed")->required();
  scan->add_option("--out", out_file, "CSV output")->required();
  scan->add_option("--process", process, "process")
      ->check(CLI::IsMember({"bootstrap", "query", "mild"}))
      ->capture_default_str();
  scan->add_option("--threads", threads, "worker threads, 0 = hardware")->capture_default_str();

  auto* couple = app.add_subcommand("couple", "check C_f, A_f, B_f nesting");
  add_regime(couple, prm);
  couple->add_option("--a", a, "initial infection size")->required();
  couple->add_option("--trials", trials, "trials")->required();
  couple->add_option("--seed", seed, "master seed")->required();

  std::string weights, probs;
  int roots = 1, m_max = 50;
  std::uint64_t samples = 100000, gw_seed = 1;
  double chi = 0.0;
  auto* gw = app.add_subcommand("gw", "Galton-Watson total progeny");
  gw->add_option("--weights", weights, "comma-separated integer weights")->required();
  gw->add_option("--probs", probs, "comma-separated probabilities")->required();
  gw->add_option("--roots", roots, "initial population")->required()->check(CLI::PositiveNumber);
  gw->add_option("--m-max", m_max, "largest m in the pmf table")->capture_default_str();
  gw->add_option("--samples", samples, "Monte Carlo samples")->capture_default_str();
  gw->add_option("--chi", chi, "tail parameter, default 2 mu/(1-mu)");
  gw->add_option("--seed", gw_seed, "sampling seed")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (theory->parsed()) {
      return cmd_theory(prm, steps, as_csv, traj);
    }
    if (simulate->parsed()) {
      TrialConfig cfg{prm, a, parse_process(process), seed, 0, !trace_file.empty()};
      const auto rec = run_trial(cfg);
      if (!trace_file.empty()) write_file(trace_file, rec.trace_json + "\n");
      std::cout << trial_record_json(rec) << '\n';
      return 0;
    }
    if (scan->parsed()) {
      const auto rows = phase_scan(prm, parse_ratios(ratios), trials, seed, parse_process(process), threads);
      write_file(out_file, scan_csv(rows));
      return 0;
    }
    if (couple->parsed()) {
      const auto rep = sandwich_check(prm, a, trials, seed);
      std::cout << "trial,c_size,a_size,b_size,ok\n";
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& t = rep.rows[i];
        std::cout << i << ',' << t.c_size << ',' << t.a_size << ',' << t.b_size << ',' << (t.ok ? "true" : "false")
                  << '\n';
      }
      std::cerr << "trials=" << rep.trials << " violations=" << rep.violations << '\n';
      return rep.violations == 0 ? 0 : 1;
    }
    if (gw->parsed()) return cmd_gw(weights, probs, roots, m_max, samples, chi, gw_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
