#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wmstab/linear_ode.hpp"
#include "wmstab/polynomial.hpp"

namespace wmstab {

// Frobenius expansion v(x) = u^s sum_n a_n u^n in the local variable
// u = direction * (x - x0), u >= 0 on the working side of x0.
template <class T>
struct FrobeniusSeries {
  using C = std::complex<T>;
  T x0{};
  int direction = 1;
  C exponent{};
  std::vector<C> coeffs;  // a_0 = 1 normalization
  T radius{};
  std::size_t n_terms() const { return coeffs.size(); }
};

template <class T>
struct SeriesEval {
  std::complex<T> value{};
  std::complex<T> dvalue{};  // derivative w.r.t. the original variable
  T err{};
  bool converged = false;
};

template <class T>
struct LogFreeAttempt {
  FrobeniusSeries<T> series;
  int order = 0;                  // resonant order N = (larger - smaller exponent)
  std::complex<T> obstruction{};  // value that must vanish for a log-free series
  T scale{};                      // magnitude of the terms feeding the obstruction
  bool log_required = false;
};

// Recurrence generator for one expansion point. Substituting the ansatz into
// c2 v'' + c1 v' + c0 v = 0 gives the band relation
//   sum_{d=0..width} a_{m-d} G_d(s + m - d) = 0,
// with G_d(sig) = A_d sig(sig-1) + B_d sig + C_d read off the shifted
// coefficient polynomials. G_0 is the indicial polynomial.
template <class T>
class SeriesBuilder {
 public:
  using C = std::complex<T>;

  SeriesBuilder(const LinearODE<T>& ode, T x0, int direction)
      : x0_(x0), direction_(direction) {
    if (direction != 1 && direction != -1)
      throw std::invalid_argument("SeriesBuilder: direction must be +1 or -1");
    auto sh2 = ode.c2.shifted(C(x0));
    auto sh1 = ode.c1.is_zero() ? std::vector<C>{} : ode.c1.shifted(C(x0));
    auto sh0 = ode.c0.is_zero() ? std::vector<C>{} : ode.c0.shifted(C(x0));
    if (direction < 0) {
      flip_odd(sh2);
      flip_odd(sh1);
      flip_odd(sh0);
      for (auto& c : sh1) c = -c;  // d/dx = -d/du
    }
    clean(sh2);
    clean(sh1);
    clean(sh0);

    const int low2 = lowest(sh2), low1 = lowest(sh1), low0 = lowest(sh0);
    if (low2 <= 0) throw std::invalid_argument("SeriesBuilder: not a singular point");
    int d0 = low2 - 2;
    if (low1 >= 0) d0 = std::min(d0, low1 - 1);
    if (low0 >= 0) d0 = std::min(d0, low0);

    const int hi2 = static_cast<int>(sh2.size()) - 1 - 2;
    const int hi1 = static_cast<int>(sh1.size()) - 1 - 1;
    const int hi0 = static_cast<int>(sh0.size()) - 1;
    const int dmax = std::max({hi2, hi1, hi0}) - d0;
    A_.assign(dmax + 1, C(0));
    B_.assign(dmax + 1, C(0));
    Cc_.assign(dmax + 1, C(0));
    for (int d = 0; d <= dmax; ++d) {
      const int i2 = d + d0 + 2, i1 = d + d0 + 1, i0 = d + d0;
      if (i2 >= 0 && i2 < static_cast<int>(sh2.size())) A_[d] = sh2[i2];
      if (i1 >= 0 && i1 < static_cast<int>(sh1.size())) B_[d] = sh1[i1];
      if (i0 >= 0 && i0 < static_cast<int>(sh0.size())) Cc_[d] = sh0[i0];
    }

    // indicial roots from G_0
    const C a = A_[0], b = B_[0] - A_[0], c = Cc_[0];
    const C sq = std::sqrt(b * b - C(4) * a * c);
    s1_ = (-b + sq) / (C(2) * a);
    s2_ = (-b - sq) / (C(2) * a);
    if (s1_.real() < s2_.real()) std::swap(s1_, s2_);
  }

  C G(int d, const C& sig) const { return (A_[d] * (sig - C(1)) + B_[d]) * sig + Cc_[d]; }
  int band_width() const { return static_cast<int>(A_.size()) - 1; }
  C larger_exponent() const { return s1_; }
  C smaller_exponent() const { return s2_; }

  // N >= 1 when the exponents differ by a positive integer (N = 0: double root)
  std::optional<int> integer_separation(T tol = T(1e-8)) const {
    const C diff = s1_ - s2_;
    const T n = std::round(diff.real());
    if (std::abs(diff.imag()) < tol && std::abs(diff.real() - n) < tol && n >= T(1))
      return static_cast<int>(n);
    return std::nullopt;
  }

  // Extend coeffs (a_0 = 1 assumed) up to n terms from exponent s.
  // resonant_order >= 1: at that order the pivot vanishes; the obstruction is
  // recorded and the free coefficient is set to zero (canonical choice).
  void extend(std::vector<C>& a, const C& s, std::size_t n, int resonant_order,
              C* obstruction, T* scale) const {
    if (a.empty()) a.push_back(C(1));
    const int width = band_width();
    for (std::size_t m = a.size(); m < n; ++m) {
      C rhs(0);
      T mag(0);
      const int dm = std::min<int>(width, static_cast<int>(m));
      for (int d = 1; d <= dm; ++d) {
        const C term = a[m - d] * G(d, s + C(T(m - d)));
        rhs += term;
        mag += std::abs(term);
      }
      if (resonant_order >= 0 && static_cast<int>(m) == resonant_order) {
        if (obstruction) *obstruction = rhs;
        if (scale) *scale = mag;
        a.push_back(C(0));
        continue;
      }
      const C piv = G(0, s + C(T(m)));
      a.push_back(-rhs / piv);
    }
  }

 private:
  static void flip_odd(std::vector<C>& v) {
    for (std::size_t j = 1; j < v.size(); j += 2) v[j] = -v[j];
  }
  static void clean(std::vector<C>& v) {
    T mx(0);
    for (const auto& c : v) mx = std::max(mx, std::abs(c));
    if (mx == T(0)) return;
    for (auto& c : v)
      if (std::abs(c) < T(1e-14) * mx) c = C(0);
  }
  static int lowest(const std::vector<C>& v) {
    for (std::size_t j = 0; j < v.size(); ++j)
      if (v[j] != C(0)) return static_cast<int>(j);
    return -1;
  }

  T x0_;
  int direction_;
  std::vector<C> A_, B_, Cc_;
  C s1_{}, s2_{};
};

template <class T>
T convergence_radius(const LinearODE<T>& ode, T x0) {
  auto roots = polynomial_roots(ode.c2);
  T r = std::numeric_limits<T>::infinity();
  for (const auto& z : roots) {
    const T d = std::abs(z - std::complex<T>(x0));
    if (d > T(1e-7)) r = std::min(r, d);
  }
  return r;
}

inline int default_direction(double point) { return point <= 0.0 ? 1 : -1; }

// Series from one indicial exponent. When the exponents differ by a positive
// integer only the larger one is accepted here; the smaller-exponent case goes
// through attempt_log_free_series, which reports the order-N obstruction.
template <class T>
FrobeniusSeries<T> frobenius_series(const LinearODE<T>& ode, T point,
                                    std::complex<T> exponent, std::size_t n_terms,
                                    int direction = 0) {
  using C = std::complex<T>;
  if (direction == 0) direction = default_direction(static_cast<double>(point));
  SeriesBuilder<T> sb(ode, point, direction);
  const T tol = T(1e-8);
  const bool is_larger = std::abs(exponent - sb.larger_exponent()) < tol;
  const bool is_smaller = std::abs(exponent - sb.smaller_exponent()) < tol;
  if (!is_larger && !is_smaller)
    throw std::invalid_argument("frobenius_series: exponent is not an indicial root");
  if (auto n = sb.integer_separation(); n && !is_larger)
    throw std::domain_error(
        "frobenius_series: smaller exponent with integer separation; series is "
        "obstructed (see attempt_log_free_series)");

  FrobeniusSeries<T> s;
  s.x0 = point;
  s.direction = direction;
  s.exponent = is_larger ? sb.larger_exponent() : sb.smaller_exponent();
  s.radius = convergence_radius(ode, point);
  s.coeffs.reserve(n_terms);
  s.coeffs.push_back(C(1));
  sb.extend(s.coeffs, s.exponent, n_terms, -1, nullptr, nullptr);
  return s;
}

// Attempt the log-free series from the smaller exponent of an
// integer-separated pair. log_required is true when the order-N consistency
// value does not vanish; the series beyond that order uses the canonical
// choice a_N = 0 and is meaningful only when log_required is false.
template <class T>
LogFreeAttempt<T> attempt_log_free_series(const LinearODE<T>& ode, T point,
                                          std::size_t n_terms, int direction = 0) {
  using C = std::complex<T>;
  if (direction == 0) direction = default_direction(static_cast<double>(point));
  SeriesBuilder<T> sb(ode, point, direction);
  auto n = sb.integer_separation();
  if (!n)
    throw std::invalid_argument(
        "attempt_log_free_series: exponents do not differ by a positive integer");
  LogFreeAttempt<T> out;
  out.order = *n;
  out.series.x0 = point;
  out.series.direction = direction;
  out.series.exponent = sb.smaller_exponent();
  out.series.radius = convergence_radius(ode, point);
  out.series.coeffs.push_back(C(1));
  sb.extend(out.series.coeffs, out.series.exponent,
            std::max<std::size_t>(n_terms, static_cast<std::size_t>(*n) + 1), *n,
            &out.obstruction, &out.scale);
  out.log_required = std::abs(out.obstruction) > T(1e-10) * std::max(out.scale, T(1));
  return out;
}

// Partial sum with a geometric tail estimate. Rejects evaluation outside the
// convergence disk or on the wrong side of the expansion point.
template <class T>
SeriesEval<T> evaluate_series(const FrobeniusSeries<T>& s, T at, T tol) {
  using C = std::complex<T>;
  const T u = T(s.direction) * (at - s.x0);
  if (u < T(0)) throw std::domain_error("evaluate_series: wrong side of expansion point");
  if (u >= s.radius) throw std::domain_error("evaluate_series: outside convergence radius");

  SeriesEval<T> out;
  if (u == T(0)) {
    const T re = s.exponent.real();
    out.value = (std::abs(s.exponent) < T(1e-14)) ? s.coeffs[0] : C(0);
    out.dvalue = (std::abs(s.exponent - C(1)) < T(1e-14))
                     ? C(T(s.direction)) * s.coeffs[0]
                     : (re > T(1) ? C(0) : C(std::numeric_limits<T>::quiet_NaN()));
    out.err = T(0);
    out.converged = true;
    return out;
  }

  const T q = u / s.radius;
  const T thresh = tol * (T(1) - q) / T(8);
  const C us = std::pow(C(u), s.exponent);

  C sum(0), dsum(0);
  T un(1);
  T ring[4] = {};  // last nonzero |term| magnitudes
  int ring_pos = 0;
  int small_run = 0, zero_run = 0;
  std::size_t n = 0;
  for (; n < s.coeffs.size(); ++n) {
    const C term = s.coeffs[n] * C(un);
    sum += term;
    dsum += term * (s.exponent + C(T(n)));
    const T mag = std::abs(term) * std::abs(us);
    un *= u;
    if (mag == T(0)) {
      ++zero_run;
    } else {
      zero_run = 0;
      ring[ring_pos++ & 3] = mag;
    }
    small_run = (mag < thresh) ? small_run + 1 : 0;
    if (small_run >= 8 && zero_run < 8) {
      ++n;
      break;
    }
  }
  // tail scale: largest of the last nonzero terms; a run of exact zeros
  // means the series terminated (structural zero runs here are shorter)
  T tail_mag = std::max(std::max(ring[0], ring[1]), std::max(ring[2], ring[3]));
  if (zero_run >= 8) tail_mag = T(0);
  out.value = us * sum;
  out.dvalue = C(T(s.direction)) * us * dsum / C(u);
  out.err = tail_mag * (q / (T(1) - q) + T(4));
  out.converged = out.err < tol;
  return out;
}

// Doubles the series length until the evaluation settles (change < tol), per
// the truncation-control policy; cap 2^20 terms.
template <class T>
SeriesEval<T> adaptive_series_eval(const LinearODE<T>& ode, T point,
                                   std::complex<T> exponent, T at, T tol,
                                   int direction = 0,
                                   std::size_t n_cap = std::size_t(1) << 20,
                                   std::size_t* n_used = nullptr) {
  using C = std::complex<T>;
  if (direction == 0) direction = default_direction(static_cast<double>(point));
  SeriesBuilder<T> sb(ode, point, direction);
  FrobeniusSeries<T> s;
  s.x0 = point;
  s.direction = direction;
  s.exponent = std::abs(exponent - sb.larger_exponent()) <
                       std::abs(exponent - sb.smaller_exponent())
                   ? sb.larger_exponent()
                   : sb.smaller_exponent();
  s.radius = convergence_radius(ode, point);
  s.coeffs.push_back(C(1));

  SeriesEval<T> prev{};
  bool have_prev = false;
  for (std::size_t n = 64; n <= n_cap; n *= 2) {
    sb.extend(s.coeffs, s.exponent, n, -1, nullptr, nullptr);
    SeriesEval<T> cur = evaluate_series(s, at, tol);
    if (n_used) *n_used = n;
    if (cur.converged &&
        (!have_prev || std::abs(cur.value - prev.value) < tol * std::max(T(1), std::abs(cur.value))))
      if (have_prev) return cur;
    prev = cur;
    have_prev = true;
  }
  prev.converged = false;
  return prev;
}

}  // namespace wmstab
