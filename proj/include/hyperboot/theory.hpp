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
#include <optional>
#include <vector>

namespace hyperboot {

enum class Side { Subcritical, Supercritical };

struct RegimeParams {
  std::size_t n = 0;
  int k = 2;
  int r = 2;
  double p = 0.0;
  double eps = 0.1;
  double delta = 0.05;
  Side side = Side::Subcritical;
};

/// BadArity / InvalidArgument on malformed fields, BadPairing when (eps, delta)
/// violate the side's pairing condition.
void validate(const RegimeParams& params);

int eta(int k, int r);

/// ln C(n, k). Exact when n*k <= 1000, a sum of log ratios when min(k, n-k) <= 1000,
/// log-gamma otherwise.
double log_binomial(double n, double k);

double a_star(const RegimeParams& params);
double a_crit(const RegimeParams& params);

struct RegimeMargin {
  double m_low;
  double m_high;
  bool ok;
};
RegimeMargin regime_margin(const RegimeParams& params);

/// Smallest positive root of x - (1+delta) x^r / r = beta0. NoRoot if the
/// bracket [beta0, (1+delta)^{-1/(r-1)}] does not straddle it.
double x0_solve(int r, double delta, double beta0);

struct BetaRow {
  int t;
  double b;     // by definition
  double beta;  // by the rescaled recursion
};

struct BetaTable {
  double a_star;
  double a_c;
  double beta0;
  double x0;
  double chi;
  double xi_prime;
  std::optional<int> t0;  // first t with beta(t-1) >= (1 - xi') x0
  double min_gain;        // (r-1) xi'^2 x0 / r
  // beta(t) < x0 for every row, decided in extended precision: beta converges
  // to x0 geometrically and the double rounding of late rows can land on x0
  bool below_x0 = false;
  std::vector<BetaRow> rows;
};

/// Subcritical trajectory for t = 0..T. Validates the pairing.
BetaTable beta_trajectory(const RegimeParams& params, int T);

struct GammaRow {
  int t;
  double c;      // by definition
  double gamma;  // by the rescaled recursion
  std::vector<double> c_def;     // c_0..c_r by the recursive definition
  std::vector<double> c_closed;  // c_0..c_r by the closed forms (from c(t-1))
};

struct GammaTable {
  double a_star;
  double a_c;
  double gamma0;
  double Delta;
  bool truncated = false;  // stopped early once values left double range
  std::vector<GammaRow> rows;
};

/// Supercritical trajectory with c(0) = c0 (default (1+eps) a_c), t = 0..T.
GammaTable gamma_trajectory(const RegimeParams& params, int T, std::optional<double> c0 = std::nullopt);

/// (1 + eps - 1/(1-delta)) (1 - 1/r); BadPairing unless (1+eps)(1-delta) > 1.
double delta_floor(double eps, double delta, int r);

double phi_crit(int r);

struct OdePoint {
  double x;
  double phi;
};

struct OdeResult {
  std::vector<OdePoint> curve;
  double phi_c;
  bool stalled;    // phi' dropped to ~0 before x_max
  bool escaped;    // phi reached phi_cap
  double x_end;
  double dt_used;
};

/// RK4 for phi' = phi^r/r! - phi + phi0 from phi(0) = phi0. The step is halved
/// from dt until two successive resolutions agree to 1e-8 on the sampled curve.
OdeResult ode_heuristic(int r, double phi0, double x_max = 200.0, double dt = 1e-3,
                        double phi_cap = 10.0);

double mcdiarmid_bound(double variance, double M, double theta);
double dependent_bound(double lambda, double var_hat, double theta);
double azuma_bound(const std::vector<double>& increments, double theta);

}  // namespace hyperboot
