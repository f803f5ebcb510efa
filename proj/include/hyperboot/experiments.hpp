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
#include <optional>
#include <string>
#include <vector>

#include "hyperboot/hypergraph.hpp"
#include "hyperboot/theory.hpp"

namespace hyperboot {

enum class ProcessKind { Bootstrap, Query, Mild, All };
enum class Outcome { Small, Large, Other };

std::string_view to_string(ProcessKind p) noexcept;
std::string_view to_string(Outcome o) noexcept;
/// InvalidArgument on anything but bootstrap|query|mild|all.
ProcessKind parse_process(std::string_view s);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// First a entries of a seeded partial Fisher-Yates shuffle of [0, n), sorted.
/// Prefixes are nested: a smaller a gives a subset of a larger one.
VertexSet initial_set(std::size_t n, std::size_t a, std::uint64_t seed);

/// Large first (final >= 0.9 n), then small (final <= a*), else other.
Outcome classify(std::size_t final_size, std::size_t n, double a_star);

struct TrialConfig {
  RegimeParams params;
  std::size_t a = 0;
  ProcessKind process = ProcessKind::Bootstrap;
  std::uint64_t master_seed = 0;
  std::size_t trial_index = 0;
  bool verbose_trace = false;
};

struct TrialRecord {
  int k = 0;
  int r = 0;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t a = 0;
  double a_over_ac = 0.0;
  double a_star = 0.0;
  std::uint64_t seed = 0;
  ProcessKind process = ProcessKind::Bootstrap;
  std::size_t final_size = 0;
  std::size_t productive_steps = 0;
  double runtime_ms = 0.0;
  Outcome outcome = Outcome::Small;
  bool regime_warning = false;
  // Filled when process == All: |C_f|, |A_f|, |B_f|.
  std::optional<std::size_t> mild_size, bootstrap_size, query_size;
  std::string trace_json;  // verbose only; for All, the bootstrap trace
};

/// Samples the hypergraph with derive_seed(master, 2i) and A(0) with
/// derive_seed(master, 2i+1). For All the record's final size is |A_f|.
TrialRecord run_trial(const TrialConfig& config);
std::string trial_record_json(const TrialRecord& rec);

struct ScanRow {
  double ratio;
  std::size_t a;
  std::size_t trials;
  double frac_large;
  double frac_small;
  double frac_other;
  double mean_final;
  double mean_steps;
};

/// Ratios LO:HI:STEP, inclusive of HI up to rounding. InvalidArgument on a
/// malformed spec, non-positive step or negative bounds.
std::vector<double> parse_ratios(const std::string& spec);

/// Trial i uses one hypergraph and one vertex permutation for every ratio,
/// so A(0) sets are nested across ratios. threads = 0 picks the hardware count.
std::vector<ScanRow> phase_scan(const RegimeParams& params, const std::vector<double>& ratios, std::size_t trials,
                                std::uint64_t master_seed, ProcessKind process = ProcessKind::Bootstrap,
                                unsigned threads = 0);
std::string scan_csv(const std::vector<ScanRow>& rows);

struct SandwichTrial {
  std::size_t c_size, a_size, b_size;
  bool ok;
};

struct SandwichReport {
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t shuffled_runs = 0;
  std::vector<SandwichTrial> rows;
};

/// Runs mild, bootstrap and query on the same instance per trial and checks
/// C_f ⊆ A_f ⊆ B_f. The first shuffle_instances trials also rerun the query
/// process with `shuffles` random within-family orders.
SandwichReport sandwich_check(const RegimeParams& params, std::size_t a, std::size_t trials, std::uint64_t master_seed,
                              std::size_t shuffle_instances = 0, std::size_t shuffles = 0);

/// Smallest n on a 1% geometric grid from n_start with p = 10.0001 / n^{k-1}
/// such that the regime margins pass and a* >= min_a_star. NoRoot past 10^8.
RegimeParams smallest_regime_params(int k, int r, double min_a_star, std::size_t n_start = 1000);

/// "%.12g"
std::string fmt12(double x);

}  // namespace hyperboot
