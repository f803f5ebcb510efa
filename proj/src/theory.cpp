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

#include "hyperboot/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hyperboot/error.hpp"
#include "hyperboot/hypergraph.hpp"

namespace hyperboot {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kStallTol = 1e-8;
constexpr double kSampleDx = 0.01;
constexpr int kMaxHalvings = 4;

using real = long double;

constexpr double kExactProduct = 1000.0;
constexpr double kShortProduct = 1000.0;

template <class T>
T log_binomial_t(T n, T k) {
  if (k < 0 || k > n) return -std::numeric_limits<T>::infinity();
  if (n * k <= kExactProduct) {
    return std::log(static_cast<T>(
        binomial_count(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k))));
  }
  k = std::min(k, n - k);
  if (k <= kShortProduct) {
    // lgamma differences cancel catastrophically for large n and small k
    T acc = 0;
    for (T i = 1; i <= k; i += 1) acc += std::log((n - k + i) / i);
    return acc;
  }
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1);
}

double log_factorial(int m) { return std::lgamma(static_cast<double>(m) + 1.0); }

double factorial(int m) { return std::exp(log_factorial(m)); }

real factorial_ld(int m) { return std::exp(std::lgamma(static_cast<real>(m) + 1.0L)); }

// ln(C(n,k-2) p)
double log_cp(const RegimeParams& prm) {
  return log_binomial(static_cast<double>(prm.n), prm.k - 2) + std::log(prm.p);
}

// Extended-precision variants for the trajectories. In the escape phase the
// gamma map multiplies relative rounding error by r per step, so double
// working precision cannot keep b/a* and c/a* within 1e-12 of the rescaled
// recursions; the tables are still reported in double.
real log_cp_ld(const RegimeParams& prm) {
  return log_binomial_t<real>(static_cast<real>(prm.n), static_cast<real>(prm.k - 2)) +
         std::log(static_cast<real>(prm.p));
}

real log_coeff_ld(const RegimeParams& prm) {
  // ln(eta n (C p)^r / r!)
  return std::log(static_cast<real>(eta(prm.k, prm.r))) + std::log(static_cast<real>(prm.n)) +
         prm.r * log_cp_ld(prm) - std::lgamma(static_cast<real>(prm.r) + 1.0L);
}

real a_star_ld(const RegimeParams& prm) {
  // a*^(r-1) = (r-1)!/(eta n (Cp)^r) = 1/(r * coeff)
  return std::exp(-(std::log(static_cast<real>(prm.r)) + log_coeff_ld(prm)) / (prm.r - 1));
}

bool fits_double(real v) { return std::isfinite(v) && std::abs(v) <= std::numeric_limits<double>::max(); }

}  // namespace

void validate(const RegimeParams& prm) {
  if (prm.k < 2 || prm.r < 2) throw Error(ErrorKind::BadArity, "need k >= 2 and r >= 2");
  if (prm.n < static_cast<std::size_t>(prm.k)) throw Error(ErrorKind::InvalidArgument, "need n >= k");
  if (!(prm.p > 0.0 && prm.p < 1.0)) throw Error(ErrorKind::InvalidArgument, "p must lie in (0,1)");
  if (!(prm.eps > 0.0 && prm.eps < 1.0) || !(prm.delta > 0.0 && prm.delta < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "eps and delta must lie in (0,1)");
  }
  if (prm.side == Side::Subcritical) {
    if (!(1.0 / (1.0 + prm.delta) > std::pow(1.0 - prm.eps, prm.r - 1))) {
      throw Error(ErrorKind::BadPairing, "need 1/(1+delta) > (1-eps)^(r-1)");
    }
  } else if (!((1.0 + prm.eps) * (1.0 - prm.delta) > 1.0)) {
    throw Error(ErrorKind::BadPairing, "need (1+eps)(1-delta) > 1");
  }
}

int eta(int k, int r) {
  if (k < 2 || r < 2) throw Error(ErrorKind::BadArity, "need k >= 2 and r >= 2");
  return r == 2 ? 2 * k - 3 : 1;
}

double log_binomial(double n, double k) { return log_binomial_t<double>(n, k); }

double a_star(const RegimeParams& prm) {
  const double log_num = log_factorial(prm.r - 1);
  const double log_den = std::log(static_cast<double>(eta(prm.k, prm.r))) +
                         std::log(static_cast<double>(prm.n)) + prm.r * log_cp(prm);
  return std::exp((log_num - log_den) / (prm.r - 1));
}

double a_crit(const RegimeParams& prm) { return (1.0 - 1.0 / prm.r) * a_star(prm); }

RegimeMargin regime_margin(const RegimeParams& prm) {
  const double ln = std::log(static_cast<double>(prm.n));
  const double m_low = std::exp((prm.k - 1) * ln + std::log(prm.p));
  const double m_high = std::exp((prm.k - 2 + 1.0 / prm.r) * ln + std::log(prm.p));
  return {m_low, m_high, m_low >= 10.0 && m_high <= 0.1};
}

double x0_solve(int r, double delta, double beta0) {
  if (r < 2) throw Error(ErrorKind::BadArity, "need r >= 2");
  auto h = [&](double x) { return x - (1.0 + delta) * std::pow(x, r) / r; };
  double lo = beta0;
  double hi = std::pow(1.0 + delta, -1.0 / (r - 1));
  // h is increasing on [0, hi]
  if (!(beta0 > 0.0) || !(lo < hi) || h(hi) < beta0) {
    throw Error(ErrorKind::NoRoot, "no root of x - (1+delta)x^r/r = beta0 below (1+delta)^(-1/(r-1))");
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) < beta0 ? lo : hi) = mid;
  }
  // the upper end, nudged in extended precision, keeps x0 on or above the true root
  auto h_ld = [&](real x) { return x - (1.0L + delta) * std::pow(x, r) / r; };
  while (h_ld(hi) < static_cast<real>(beta0)) hi = std::nextafter(hi, 2.0);
  const double x = hi;
  if (std::abs(h(x) - beta0) > kResidualTol) throw Error(ErrorKind::NoRoot, "bisection did not converge");
  return x;
}

BetaTable beta_trajectory(const RegimeParams& prm, int T) {
  RegimeParams sub = prm;
  sub.side = Side::Subcritical;
  validate(sub);
  const int r = prm.r;
  BetaTable tab;
  tab.a_star = a_star(prm);
  tab.a_c = a_crit(prm);
  tab.beta0 = (1.0 - prm.eps) * (1.0 - 1.0 / r);
  tab.x0 = x0_solve(r, prm.delta, tab.beta0);
  tab.chi = 4.0 / prm.delta;
  const double ceiling =
      (std::pow((1.0 + prm.delta) / (1.0 + prm.delta / 2.0), 1.0 / (r - 1)) - 1.0) / tab.chi;
  tab.xi_prime = 0.5 * ceiling;
  tab.min_gain = (r - 1) * tab.xi_prime * tab.xi_prime * tab.x0 / r;

  const real log_coeff = std::log1p(static_cast<real>(prm.delta)) + log_coeff_ld(prm);
  const real beta0 = tab.beta0;
  const real b0 = beta0 * a_star_ld(prm);
  real b = b0;
  real beta = beta0;
  tab.below_x0 = true;
  for (int t = 0; t <= T; ++t) {
    tab.below_x0 = tab.below_x0 && beta < static_cast<real>(tab.x0);
    tab.rows.push_back({t, static_cast<double>(b), static_cast<double>(beta)});
    if (!tab.t0 && t >= 1 && tab.rows[t - 1].beta >= (1.0 - tab.xi_prime) * tab.x0) tab.t0 = t;
    b = std::exp(log_coeff + r * std::log(b)) + b0;
    beta = (1.0L + prm.delta) * std::pow(beta, r) / r + beta0;
  }
  return tab;
}

double delta_floor(double eps, double delta, int r) {
  if (!((1.0 + eps) * (1.0 - delta) > 1.0)) throw Error(ErrorKind::BadPairing, "need (1+eps)(1-delta) > 1");
  return (1.0 + eps - 1.0 / (1.0 - delta)) * (1.0 - 1.0 / r);
}

GammaTable gamma_trajectory(const RegimeParams& prm, int T, std::optional<double> c0_in) {
  RegimeParams sup = prm;
  sup.side = Side::Supercritical;
  validate(sup);
  const int r = prm.r;
  const real n = static_cast<real>(prm.n);
  const real cp = std::exp(log_cp_ld(prm));
  const real et = eta(prm.k, r);
  const real astar = a_star_ld(prm);

  GammaTable tab;
  tab.a_star = a_star(prm);
  tab.a_c = a_crit(prm);
  tab.Delta = delta_floor(prm.eps, prm.delta, r);
  const real c0 = c0_in ? static_cast<real>(*c0_in) : (1.0L + prm.eps) * (1.0L - 1.0L / r) * astar;
  const real gamma0 = c0 / astar;
  tab.gamma0 = static_cast<double>(gamma0);

  auto closed = [&](real c_prev) {
    std::vector<real> out(r + 1);
    out[0] = n;
    for (int i = 1; i <= r; ++i) out[i] = n * std::pow(c_prev * cp, i) / factorial_ld(i);
    out[r] *= 1.0L - prm.delta;
    return out;
  };
  auto to_double = [](const std::vector<real>& v) { return std::vector<double>(v.begin(), v.end()); };

  std::vector<real> cd(r + 1, 0.0L);
  cd[0] = n;
  real c_prev = 0.0L;  // c(-1)
  real c = c0;
  real gamma = gamma0;
  for (int t = 0; t <= T; ++t) {
    const auto cc = closed(c_prev);
    const bool finite = fits_double(c) && fits_double(gamma) && std::all_of(cd.begin(), cd.end(), fits_double) &&
                        std::all_of(cc.begin(), cc.end(), fits_double);
    if (!finite) {
      tab.truncated = true;
      break;
    }
    tab.rows.push_back({t, static_cast<double>(c), static_cast<double>(gamma), to_double(cd), to_double(cc)});

    const real step = (c - c_prev) * cp;
    std::vector<real> next(r + 1);
    next[0] = n;
    for (int i = 1; i <= r; ++i) {
      real sum = 0.0L;
      for (int j = 0; j < i; ++j) sum += cd[j] * std::pow(step, i - j) / factorial_ld(i - j);
      if (i == r) sum *= 1.0L - prm.delta;
      next[i] = sum + cd[i];
    }
    cd = std::move(next);
    c_prev = c;
    c = et * cd[r] + c0;
    gamma = (1.0L - prm.delta) * std::pow(gamma, r) / r + gamma0;
  }
  return tab;
}

double phi_crit(int r) {
  return (1.0 - 1.0 / r) * std::pow(factorial(r - 1), 1.0 / (r - 1));
}

namespace {

OdeResult integrate(int r, double phi0, double x_max, double dt, double phi_cap) {
  const double rf = factorial(r);
  auto f = [&](double phi) { return std::pow(phi, r) / rf - phi + phi0; };
  const auto every = std::max<long long>(1, std::llround(kSampleDx / dt));
  OdeResult res{{}, phi_crit(r), false, false, 0.0, dt};
  double phi = phi0;
  double x = 0.0;
  res.curve.push_back({x, phi});
  for (long long i = 1; x < x_max; ++i) {
    const double k1 = f(phi);
    const double k2 = f(phi + 0.5 * dt * k1);
    const double k3 = f(phi + 0.5 * dt * k2);
    const double k4 = f(phi + dt * k3);
    phi += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    x = static_cast<double>(i) * dt;
    if (i % every == 0) res.curve.push_back({x, phi});
    if (phi >= phi_cap) {
      res.escaped = true;
      break;
    }
    if (f(phi) <= kStallTol) {
      res.stalled = true;
      break;
    }
  }
  res.x_end = x;
  return res;
}

}  // namespace

OdeResult ode_heuristic(int r, double phi0, double x_max, double dt, double phi_cap) {
  if (r < 2) throw Error(ErrorKind::BadArity, "need r >= 2");
  if (!(phi0 > 0.0) || !(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "need phi0 > 0 and dt > 0");
  OdeResult coarse = integrate(r, phi0, x_max, dt, phi_cap);
  for (int h = 0; h < kMaxHalvings; ++h) {
    OdeResult fine = integrate(r, phi0, x_max, coarse.dt_used / 2, phi_cap);
    const std::size_t m = std::min(coarse.curve.size(), fine.curve.size());
    double diff = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      // past phi_cap the curve is stiff and not informative
      if (coarse.curve[i].phi < phi_cap) diff = std::max(diff, std::abs(coarse.curve[i].phi - fine.curve[i].phi));
    }
    if (diff < kStallTol) return coarse;
    coarse = std::move(fine);
  }
  return coarse;
}

double mcdiarmid_bound(double variance, double M, double theta) {
  return std::exp(-theta * theta / (2.0 * (variance + M * theta / 3.0)));
}

double dependent_bound(double lambda, double var_hat, double theta) {
  return lambda * std::exp(-theta * theta / (2.0 * (var_hat + theta / 3.0)));
}

double azuma_bound(const std::vector<double>& increments, double theta) {
  if (increments.empty()) throw Error(ErrorKind::EmptyIncrements, "no increments");
  double s = 0.0;
  for (double c : increments) s += c * c;
  return std::exp(-theta * theta / (2.0 * s));
}

}  // namespace hyperboot
