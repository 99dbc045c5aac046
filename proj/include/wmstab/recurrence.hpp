#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wmstab {

// Three-term recurrence of the power series about x = 0 of the transformed
// equation:
//   p2(0) a_2 + p1(0) a_1 = 0,
//   p2(n) a_{n+2} + p1(n) a_{n+1} + p0(n) a_n = 0,  n = 1, 2, ...
// with a_0 = 0, a_1 = 1.
template <class T>
struct RecurrenceCoeffs {
  std::complex<T> p0, p1, p2;
};

template <class T>
RecurrenceCoeffs<T> recurrence_coeffs(std::complex<T> lambda, T n) {
  using C = std::complex<T>;
  RecurrenceCoeffs<T> rc;
  rc.p2 = C(T(8) * n * n + T(28) * n + T(20));
  rc.p1 = C(T(-12) * n * n) - (C(20) + C(8) * lambda) * C(n) - lambda * lambda -
          C(8) * lambda + C(9);
  rc.p0 = C(T(4) * n * n) + C(4) * lambda * C(n) + lambda * lambda - C(9);
  return rc;
}

// seed ratio a_2/a_1 = (lambda^2 + 8 lambda - 9)/20
template <class T>
std::complex<T> seed_ratio(std::complex<T> lambda) {
  return (lambda * lambda + std::complex<T>(8) * lambda - std::complex<T>(9)) /
         std::complex<T>(20);
}

// a_1 .. a_{n_max} by forward recursion (a_0 = 0, a_1 = 1)
template <class T>
std::vector<std::complex<T>> forward_sequence(std::complex<T> lambda, std::size_t n_max) {
  using C = std::complex<T>;
  std::vector<C> a(n_max + 1, C(0));
  if (n_max >= 1) a[1] = C(1);
  if (n_max >= 2) a[2] = seed_ratio(lambda);
  for (std::size_t n = 1; n + 2 <= n_max; ++n) {
    const auto rc = recurrence_coeffs(lambda, T(n));
    a[n + 2] = -(rc.p1 * a[n + 1] + rc.p0 * a[n]) / rc.p2;
  }
  return a;
}

enum class RatioClass { minimal, dominant, inconclusive };

// Result of the forward-recurrence ratio dichotomy. The asymptotic ratio is 1
// for the dominant branch (n^{lambda-2} tail) and 1/2 for the minimal branch
// (2^{-n} n^{-3/2} tail). plateau_value extrapolates the pre-re-excitation
// plateau; at an exact eigenvalue roundoff eventually re-excites the dominant
// branch, so only the first smooth run of ratios is used.
template <class T>
struct RatioProbe {
  RatioClass cls = RatioClass::inconclusive;
  bool terminating = false;  // coefficients identically zero beyond some order
  T plateau_value{};
  T plateau_median{};
  std::size_t window_lo = 0, window_hi = 0;
};

namespace detail {

// least squares fit r_n ~ L + c1/n^2 + c2/n^3 on window [lo, hi)
template <class T>
T fit_plateau(const std::vector<T>& r, std::size_t lo, std::size_t hi, T comp_expo) {
  // compensate the known power-law part of the ratio first
  // (r_n -> r_n (1+1/n)^{comp_expo} removes the 1/n term)
  long double S[3][3] = {};
  long double b[3] = {};
  for (std::size_t i = lo; i < hi; ++i) {
    const long double n = static_cast<long double>(i + 1);  // r[i] = ratio at index n
    const long double y =
        static_cast<long double>(r[i]) * std::pow(1.0L + 1.0L / n, (long double)comp_expo);
    const long double f[3] = {1.0L, 1.0L / (n * n), 1.0L / (n * n * n)};
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) S[p][q] += f[p] * f[q];
      b[p] += f[p] * y;
    }
  }
  // 3x3 Cramer
  const auto det3 = [](long double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const long double D = det3(S);
  if (std::abs(D) < 1e-300L) return std::numeric_limits<T>::quiet_NaN();
  long double M[3][3];
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) M[p][q] = S[p][q];
  for (int p = 0; p < 3; ++p) M[p][0] = b[p];
  return static_cast<T>(det3(M) / D);
}

}  // namespace detail

// Classify the forward solution started from a_0 = 0, a_1 = 1 by its ratio
// plateau. n_probe >= 100.
template <class T>
RatioProbe<T> minimal_ratio_test(std::complex<T> lambda, std::size_t n_probe) {
  using C = std::complex<T>;
  if (n_probe < 100) throw std::invalid_argument("minimal_ratio_test: n_probe >= 100");

  RatioProbe<T> out;

  // forward recursion with ratios; rescale to dodge underflow
  std::vector<T> r;
  r.reserve(n_probe);
  C an(1), anp(seed_ratio(lambda));
  r.push_back(std::abs(an) > T(0) ? std::abs(anp / an) * ((anp / an).real() < T(0) ? T(-1) : T(1))
                                  : T(0));
  for (std::size_t n = 1; n + 1 < n_probe; ++n) {
    const auto rc = recurrence_coeffs(lambda, T(n));
    const C next = -(rc.p1 * anp + rc.p0 * an) / rc.p2;
    if (std::abs(anp) == T(0)) {
      if (std::abs(next) == T(0)) {  // terminated: ratios exactly zero onward
        out.terminating = true;
        out.cls = RatioClass::minimal;
        out.plateau_value = T(0);
        out.plateau_median = T(0);
        return out;
      }
      r.push_back(std::numeric_limits<T>::quiet_NaN());
    } else {
      const C q = next / anp;
      r.push_back(std::abs(q.imag()) < T(1e-12) * std::max(T(1), std::abs(q.real()))
                      ? q.real()
                      : std::abs(q));
    }
    an = anp;
    anp = next;
    const T mag = std::max(std::abs(an), std::abs(anp));
    if (mag != T(0) && mag < T(1e-200)) {
      an *= T(1e100);
      anp *= T(1e100);
    }
  }

  // first smooth run of the ratio sequence (the plateau before re-excitation)
  const T eps_run = T(0.008);
  const std::size_t min_len = 8;
  std::size_t lo = 0, hi = 0, start = 0;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    const T d = std::abs(r[i + 1] - r[i]);
    const bool ok = std::isfinite(d) && d < eps_run;
    if (!ok) {
      if (i > start && i - start >= min_len) {
        lo = start;
        hi = i + 1;
        break;
      }
      start = i + 1;
    } else if (i + 2 == r.size() && r.size() - start >= min_len) {
      lo = start;
      hi = r.size();
    }
  }
  if (hi <= lo) {
    out.cls = RatioClass::inconclusive;
    return out;
  }
  // trim run edges
  const std::size_t m = hi - lo;
  std::size_t lo2 = lo + std::max<std::size_t>(2, m / 6);
  std::size_t hi2 = hi - std::max<std::size_t>(1, m / 8);
  if (hi2 <= lo2 + 3) {
    lo2 = lo;
    hi2 = hi;
  }
  out.window_lo = lo2 + 1;  // ratio index n
  out.window_hi = hi2;

  std::vector<T> w(r.begin() + lo2, r.begin() + hi2);
  std::nth_element(w.begin(), w.begin() + w.size() / 2, w.end());
  out.plateau_median = w[w.size() / 2];

  // classification window +-0.1 about the two candidate limits
  if (std::abs(out.plateau_median - T(0.5)) < T(0.1))
    out.cls = RatioClass::minimal;
  else if (std::abs(out.plateau_median - T(1)) < T(0.1))
    out.cls = RatioClass::dominant;
  else {
    out.cls = RatioClass::inconclusive;
    out.plateau_value = out.plateau_median;
    return out;
  }

  const T comp = out.cls == RatioClass::minimal ? T(1.5) : T(2) - lambda.real();
  out.plateau_value = detail::fit_plateau(r, lo2, hi2, comp);
  if (!std::isfinite(out.plateau_value)) out.plateau_value = out.plateau_median;
  return out;
}

}  // namespace wmstab
