#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wmstab/frobenius.hpp"
#include "wmstab/linear_ode.hpp"

namespace wmstab {

// ---- gauge mode lambda = 1 -------------------------------------------------
// v(rho) = rho^2/(1+rho^2) solves the mode equation at lambda = 1 (blowup-time
// shift freedom); residual of the cleared-denominator form with closed-form
// derivatives.

template <class T>
T gauge_mode_equation_residual_at(T rho, T perturb_cubic = T(0)) {
  using C = std::complex<T>;
  const auto ode = spectral_ode(C(1));
  const T q = T(1) + rho * rho;
  T v = rho * rho / q;
  T dv = T(2) * rho / (q * q);
  T ddv = (T(2) - T(6) * rho * rho) / (q * q * q);
  if (perturb_cubic != T(0)) {
    v += perturb_cubic * rho * rho * rho;
    dv += T(3) * perturb_cubic * rho * rho;
    ddv += T(6) * perturb_cubic * rho;
  }
  const C res = ode.c2(C(rho)) * C(ddv) + ode.c1(C(rho)) * C(dv) + ode.c0(C(rho)) * C(v);
  return std::abs(res);
}

template <class T>
T gauge_mode_residual(std::size_t n_samples, T perturb_cubic = T(0)) {
  if (n_samples < 10) throw std::invalid_argument("gauge_mode_residual: n_samples >= 10");
  T worst(0);
  for (std::size_t i = 1; i <= n_samples; ++i) {
    const T rho = T(i) / T(n_samples + 1);
    worst = std::max(worst, gauge_mode_equation_residual_at(rho, perturb_cubic));
  }
  return worst;
}

// ---- Sturm-Liouville map ----------------------------------------------------
// v = (1-rho^2)^{-lambda/2} z puts the mode equation into self-adjoint form
// with spectral parameter mu = lambda(2-lambda); admissibility exponents of z
// at rho = 1 are (1 +- sqrt(1-mu))/2.

template <class T>
struct SLMap {
  std::complex<T> mu;
  std::complex<T> exp_plus, exp_minus;
};

template <class T>
SLMap<T> sl_map(std::complex<T> lambda) {
  using C = std::complex<T>;
  SLMap<T> m;
  m.mu = lambda * (C(2) - lambda);
  const C s = std::sqrt(C(1) - m.mu);
  m.exp_plus = (C(1) + s) / C(2);
  m.exp_minus = (C(1) - s) / C(2);
  return m;
}

// z(rho) = sqrt(1-rho^2) rho^2/(1+rho^2), the mu = 1 solution; positivity on
// (0,1) underlies the absence of spectrum below mu = 1
template <class T>
T sl_gauge_mode(T rho) {
  return std::sqrt(T(1) - rho * rho) * rho * rho / (T(1) + rho * rho);
}

template <class T>
bool sl_gauge_positivity(std::size_t n_samples, T sign = T(1)) {
  for (std::size_t i = 1; i <= n_samples; ++i) {
    const T rho = T(i) / T(n_samples + 1);
    if (!(sign * sl_gauge_mode(rho) > T(0))) return false;
  }
  return true;
}

// ---- log-free resonance at x = 1 -------------------------------------------

template <class T>
struct ResonanceReport {
  int N = 0;                      // 1 - lambda
  std::complex<T> obstruction{};  // order-N consistency value (b_0 = 1 scale)
  T scale{};
  bool log_required = false;
};

// At lambda = 1 - N the x = 1 exponents of the transformed equation are 0 and
// N. The smaller-exponent series is log-free iff the order-N consistency value
// vanishes; that happens exactly at N = 3 (lambda = -2), which is why -2 is an
// eigenvalue despite the Wronskian criterion not seeing it.
template <class T>
ResonanceReport<T> resonance_check(int N) {
  using C = std::complex<T>;
  if (N < 1 || N > 8) throw std::invalid_argument("resonance_check: 1 <= N <= 8");
  const auto ode = transformed_ode(C(T(1 - N)));
  const auto att = attempt_log_free_series(ode, T(1), static_cast<std::size_t>(N + 2), -1);
  ResonanceReport<T> r;
  r.N = N;
  r.obstruction = att.obstruction;
  r.scale = att.scale;
  r.log_required = att.log_required;
  return r;
}

// ---- apparent singularity at lambda = -2 -------------------------------------

// Reconstructs the x = 0 analytic solution from local branches at x = 1 and
// reports the worst relative mismatch at the probe points. At lambda = -2 the
// two log-free branches (exponents 3 and 0) span all solutions, so the
// mismatch vanishes; at generic lambda the analytic branch alone fails unless
// the (1-x)^{1-lambda} branch is included.
template <class T>
T apparent_singularity_mismatch(std::complex<T> lambda, bool include_nonanalytic_branch,
                                std::size_t n_terms = 800) {
  using C = std::complex<T>;
  const auto ode = transformed_ode(lambda);
  const T x_match = T(0.8);
  const T probes[2] = {T(0.75), T(0.85)};

  // the solution analytic at x = 0 (exponent 1; seed of the three-term recurrence)
  const auto y0 = frobenius_series(ode, T(0), C(1), n_terms, +1);
  const auto e_match = evaluate_series(y0, x_match, T(1e-13));

  SeriesBuilder<T> sb(ode, T(1), -1);
  std::vector<FrobeniusSeries<T>> branches;
  const auto sep = sb.integer_separation();
  if (sep) {
    // larger-exponent branch u^N (analytic for integer N); log-free smaller
    // branch exists only when the obstruction vanishes
    branches.push_back(frobenius_series(ode, T(1), sb.larger_exponent(), n_terms, -1));
    const auto att = attempt_log_free_series(ode, T(1), n_terms, -1);
    if (!att.log_required) branches.push_back(att.series);
  } else {
    if (include_nonanalytic_branch)
      branches.push_back(frobenius_series(ode, T(1), sb.larger_exponent(), n_terms, -1));
    branches.push_back(frobenius_series(ode, T(1), sb.smaller_exponent(), n_terms, -1));
  }

  // match value (and derivative when two branches) at x_match
  std::vector<C> gamma(branches.size(), C(0));
  std::vector<SeriesEval<T>> bm(branches.size());
  for (std::size_t k = 0; k < branches.size(); ++k)
    bm[k] = evaluate_series(branches[k], x_match, T(1e-13));
  if (branches.size() == 1) {
    gamma[0] = e_match.value / bm[0].value;
  } else {
    const C a = bm[0].value, b = bm[1].value;
    const C c = bm[0].dvalue, d = bm[1].dvalue;
    const C det = a * d - b * c;
    gamma[0] = (e_match.value * d - b * e_match.dvalue) / det;
    gamma[1] = (a * e_match.dvalue - e_match.value * c) / det;
  }

  T worst(0);
  for (const T xp : probes) {
    const auto y = evaluate_series(y0, xp, T(1e-13));
    C rec(0);
    for (std::size_t k = 0; k < branches.size(); ++k)
      rec += gamma[k] * evaluate_series(branches[k], xp, T(1e-13)).value;
    worst = std::max(worst, std::abs(y.value - rec) / std::max(T(1), std::abs(y.value)));
  }
  return worst;
}

template <class T>
T apparent_singularity_check(T /*tol*/ = T(1e-8)) {
  return apparent_singularity_mismatch<T>(std::complex<T>(-2), false);
}

}  // namespace wmstab
