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

#include "hyperboot/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "hyperboot/error.hpp"
#include "hyperboot/mild_process.hpp"
#include "hyperboot/mix.hpp"
#include "hyperboot/percolation.hpp"
#include "hyperboot/query_process.hpp"
#include "json.hpp"

namespace hyperboot {

namespace {

constexpr double kLargeFraction = 0.9;

std::size_t size_for_ratio(double ratio, double a_c, std::size_t n) {
  const double a = std::round(ratio * a_c);
  if (!(a > 0.0)) return 0;
  return std::min<std::size_t>(n, static_cast<std::size_t>(a));
}

/// Partial Fisher-Yates over [0, n); the first a entries are the A(0) prefix.
std::vector<Vertex> permutation_prefix(std::size_t n, std::size_t a, std::uint64_t seed) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < a && i + 1 < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(perm[i], perm[pick(rng)]);
  }
  perm.resize(std::min(a, n));
  return perm;
}

VertexSet sorted_prefix(const std::vector<Vertex>& perm, std::size_t a) {
  VertexSet out(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(std::min(a, perm.size())));
  std::sort(out.begin(), out.end());
  return out;
}

MildSchedule schedule_for(const RegimeParams& params, std::size_t a) {
  return MildSchedule::from_params(params, std::max(1.0, static_cast<double>(a)));
}

struct RunOut {
  std::size_t final_size;
  std::size_t steps;
};

RunOut run_one(const Hypergraph& h, const RegimeParams& params, ProcessKind process, const VertexSet& a0) {
  switch (process) {
    case ProcessKind::Query: {
      const auto res = run_query(h, params.r, a0);
      return {res.final_set.size(), res.productive_steps};
    }
    case ProcessKind::Mild: {
      const auto res = run_mild(h, params.r, a0, schedule_for(params, a0.size()));
      return {res.final_set.size(), res.productive_steps};
    }
    default: {
      const auto res = run_bootstrap(h, params.r, a0);
      return {res.final_set.size(), res.productive_steps};
    }
  }
}

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace

std::string_view to_string(ProcessKind p) noexcept {
  switch (p) {
    case ProcessKind::Bootstrap:
      return "bootstrap";
    case ProcessKind::Query:
      return "query";
    case ProcessKind::Mild:
      return "mild";
    case ProcessKind::All:
      return "all";
  }
  return "?";
}

std::string_view to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::Small:
      return "small";
    case Outcome::Large:
      return "large";
    case Outcome::Other:
      return "other";
  }
  return "?";
}

ProcessKind parse_process(std::string_view s) {
  if (s == "bootstrap") return ProcessKind::Bootstrap;
  if (s == "query") return ProcessKind::Query;
  if (s == "mild") return ProcessKind::Mild;
  if (s == "all") return ProcessKind::All;
  throw Error(ErrorKind::InvalidArgument, "unknown process '" + std::string(s) + "'");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept { return mix64(master, index); }

VertexSet initial_set(std::size_t n, std::size_t a, std::uint64_t seed) {
  if (a > n) throw Error(ErrorKind::InvalidArgument, "a exceeds n");
  return sorted_prefix(permutation_prefix(n, a, seed), a);
}

Outcome classify(std::size_t final_size, std::size_t n, double a_star) {
  if (static_cast<double>(final_size) >= kLargeFraction * static_cast<double>(n)) return Outcome::Large;
  if (static_cast<double>(final_size) <= a_star) return Outcome::Small;
  return Outcome::Other;
}

TrialRecord run_trial(const TrialConfig& cfg) {
  const auto& prm = cfg.params;
  if (cfg.a > prm.n) throw Error(ErrorKind::InvalidArgument, "a exceeds n");
  const auto t_start = std::chrono::steady_clock::now();
  TrialRecord rec;
  rec.k = prm.k;
  rec.r = prm.r;
  rec.n = prm.n;
  rec.p = prm.p;
  rec.a = cfg.a;
  rec.a_star = a_star(prm);
  rec.a_over_ac = static_cast<double>(cfg.a) / a_crit(prm);
  rec.seed = cfg.master_seed;
  rec.process = cfg.process;
  rec.regime_warning = !regime_margin(prm).ok;

  const auto h = sample_explicit(prm.n, static_cast<std::size_t>(prm.k), prm.p,
                                 derive_seed(cfg.master_seed, 2 * cfg.trial_index));
  const auto a0 = initial_set(prm.n, cfg.a, derive_seed(cfg.master_seed, 2 * cfg.trial_index + 1));

  switch (cfg.process) {
    case ProcessKind::Bootstrap:
    case ProcessKind::All: {
      const auto res = run_bootstrap(h, prm.r, a0);
      rec.final_size = res.final_set.size();
      rec.productive_steps = res.productive_steps;
      if (cfg.verbose_trace) rec.trace_json = bootstrap_trace_json(h, prm.r, a0.size(), res);
      if (cfg.process == ProcessKind::All) {
        rec.bootstrap_size = rec.final_size;
        rec.mild_size = run_mild(h, prm.r, a0, schedule_for(prm, a0.size())).final_set.size();
        rec.query_size = run_query(h, prm.r, a0).final_set.size();
      }
      break;
    }
    case ProcessKind::Query: {
      const auto res = run_query(h, prm.r, a0, cfg.verbose_trace);
      rec.final_size = res.final_set.size();
      rec.productive_steps = res.productive_steps;
      if (cfg.verbose_trace) rec.trace_json = query_trace_json(h, prm.r, a0.size(), res);
      break;
    }
    case ProcessKind::Mild: {
      const auto res = run_mild(h, prm.r, a0, schedule_for(prm, a0.size()));
      rec.final_size = res.final_set.size();
      rec.productive_steps = res.productive_steps;
      if (cfg.verbose_trace) rec.trace_json = mild_trace_json(h, prm.r, a0.size(), res);
      break;
    }
  }
  rec.outcome = classify(rec.final_size, prm.n, rec.a_star);
  rec.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_start).count();
  return rec;
}

std::string trial_record_json(const TrialRecord& rec) {
  nlohmann::ordered_json j;
  j["k"] = rec.k;
  j["r"] = rec.r;
  j["n"] = rec.n;
  j["p"] = rec.p;
  j["a"] = rec.a;
  j["a_over_ac"] = rec.a_over_ac;
  j["a_star"] = rec.a_star;
  j["seed"] = rec.seed;
  j["process"] = to_string(rec.process);
  j["final_size"] = rec.final_size;
  j["productive_steps"] = rec.productive_steps;
  j["runtime_ms"] = rec.runtime_ms;
  j["outcome"] = to_string(rec.outcome);
  j["regime_warning"] = rec.regime_warning;
  if (rec.mild_size) j["mild_size"] = *rec.mild_size;
  if (rec.bootstrap_size) j["bootstrap_size"] = *rec.bootstrap_size;
  if (rec.query_size) j["query_size"] = *rec.query_size;
  return j.dump();
}

std::vector<double> parse_ratios(const std::string& spec) {
  double v[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? spec.find(':', pos) : spec.size();
    if (end == std::string::npos) throw Error(ErrorKind::InvalidArgument, "ratios must be LO:HI:STEP");
    const std::string part = spec.substr(pos, end - pos);
    try {
      std::size_t used = 0;
      v[i] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad number in ratios: '" + part + "'");
    }
    pos = end + 1;
  }
  const double lo = v[0], hi = v[1], step = v[2];
  if (!(step > 0.0) || lo < 0.0 || hi < lo) throw Error(ErrorKind::InvalidArgument, "need 0 <= LO <= HI and STEP > 0");
  std::vector<double> out;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<ScanRow> phase_scan(const RegimeParams& params, const std::vector<double>& ratios, std::size_t trials,
                                std::uint64_t master_seed, ProcessKind process, unsigned threads) {
  const double ac = a_crit(params);
  const double astar = a_star(params);
  std::vector<std::size_t> sizes;
  for (double ratio : ratios) {
    if (ratio < 0.0) throw Error(ErrorKind::InvalidArgument, "ratios must be non-negative");
    sizes.push_back(size_for_ratio(ratio, ac, params.n));
  }
  const std::size_t a_max = sizes.empty() ? 0 : *std::max_element(sizes.begin(), sizes.end());
  std::vector<RunOut> out(trials * ratios.size());

  parallel_for(trials, threads, [&](std::size_t i) {
    const auto h =
        sample_explicit(params.n, static_cast<std::size_t>(params.k), params.p, derive_seed(master_seed, 2 * i));
    const auto perm = permutation_prefix(params.n, a_max, derive_seed(master_seed, 2 * i + 1));
    for (std::size_t j = 0; j < ratios.size(); ++j) {
      out[i * ratios.size() + j] = run_one(h, params, process, sorted_prefix(perm, sizes[j]));
    }
  });

  std::vector<ScanRow> rows;
  for (std::size_t j = 0; j < ratios.size(); ++j) {
    std::size_t large = 0, small = 0, other = 0;
    double sum_final = 0.0, sum_steps = 0.0;
    for (std::size_t i = 0; i < trials; ++i) {
      const auto& o = out[i * ratios.size() + j];
      switch (classify(o.final_size, params.n, astar)) {
        case Outcome::Large:
          ++large;
          break;
        case Outcome::Small:
          ++small;
          break;
        case Outcome::Other:
          ++other;
          break;
      }
      sum_final += static_cast<double>(o.final_size);
      sum_steps += static_cast<double>(o.steps);
    }
    const double tr = trials == 0 ? 1.0 : static_cast<double>(trials);
    rows.push_back({ratios[j], sizes[j], trials, large / tr, small / tr, other / tr, sum_final / tr, sum_steps / tr});
  }
  return rows;
}

std::string fmt12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "ratio,a,trials,frac_large,frac_small,frac_other,mean_final,mean_steps\n";
  for (const auto& r : rows) {
    os << fmt12(r.ratio) << ',' << r.a << ',' << r.trials << ',' << fmt12(r.frac_large) << ','
       << fmt12(r.frac_small) << ',' << fmt12(r.frac_other) << ',' << fmt12(r.mean_final) << ','
       << fmt12(r.mean_steps) << '\n';
  }
  return os.str();
}

SandwichReport sandwich_check(const RegimeParams& params, std::size_t a, std::size_t trials, std::uint64_t master_seed,
                              std::size_t shuffle_instances, std::size_t shuffles) {
  if (a > params.n) throw Error(ErrorKind::InvalidArgument, "a exceeds n");
  const auto sched = schedule_for(params, a);
  SandwichReport rep;
  rep.trials = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto h =
        sample_explicit(params.n, static_cast<std::size_t>(params.k), params.p, derive_seed(master_seed, 2 * i));
    const auto a0 = initial_set(params.n, a, derive_seed(master_seed, 2 * i + 1));
    const auto c_f = run_mild(h, params.r, a0, sched).final_set;
    const auto a_f = run_bootstrap(h, params.r, a0).final_set;
    const auto b_f = run_query(h, params.r, a0).final_set;
    auto within = [](const VertexSet& x, const VertexSet& y) {
      return std::includes(y.begin(), y.end(), x.begin(), x.end());
    };
    bool ok = within(c_f, a_f) && within(a_f, b_f);
    if (i < shuffle_instances) {
      std::mt19937_64 rng(derive_seed(master_seed, 2 * trials + i));
      for (std::size_t s = 0; s < shuffles; ++s) {
        QueryState qs(h, params.r, a0);
        ok = within(a_f, qs.run(EnumerationMode::Fast, &rng).final_set) && ok;
        ++rep.shuffled_runs;
      }
    }
    if (!ok) ++rep.violations;
    rep.rows.push_back({c_f.size(), a_f.size(), b_f.size(), ok});
  }
  return rep;
}

RegimeParams smallest_regime_params(int k, int r, double min_a_star, std::size_t n_start) {
  for (double n = static_cast<double>(std::max<std::size_t>(n_start, static_cast<std::size_t>(k))); n <= 1e8;
       n = std::ceil(n * 1.01)) {
    RegimeParams prm;
    prm.n = static_cast<std::size_t>(n);
    prm.k = k;
    prm.r = r;
    prm.p = 10.0001 / std::pow(n, k - 1);
    if (!(prm.p < 1.0)) continue;
    if (regime_margin(prm).ok && a_star(prm) >= min_a_star) return prm;
  }
  throw Error(ErrorKind::NoRoot, "no admissible n up to 1e8");
}

}  // namespace hyperboot
