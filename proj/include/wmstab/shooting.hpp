#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wmstab/eigensolver.hpp"
#include "wmstab/frobenius.hpp"
#include "wmstab/linear_ode.hpp"
#include "wmstab/structural.hpp"

namespace wmstab {

template <class T>
struct WronskianProbe {
  std::complex<T> lambda{};
  T midpoint{};
  std::size_t n_terms_left = 0, n_terms_right = 0;
  std::complex<T> W{};       // raw Wronskian v0 v1' - v0' v1 at the midpoint
  std::complex<T> W_norm{};  // scale-free: W / (|v0||v1'| + |v0'||v1|)
  T err_estimate{};
  bool low_confidence = false;
  bool near_resonant = false;
};

namespace detail {

enum class RightBranch { generic_analytic, larger_exponent };

template <class T>
WronskianProbe<T> wronskian_mid_raw(std::complex<T> lambda, T midpoint, T tol,
                                    std::size_t n_cap,
                                    RightBranch rb = RightBranch::generic_analytic) {
  using C = std::complex<T>;
  WronskianProbe<T> p;
  p.lambda = lambda;
  p.midpoint = midpoint;

  const auto ode = spectral_ode(lambda);
  std::size_t n0 = 0, n1 = 0;

  // left series: exponent 2 about rho = 0; right series: the branch analytic
  // at rho = 1 (exponent 0 away from integer resonances)
  SeriesBuilder<T> sb0(ode, T(0), +1);
  FrobeniusSeries<T> s0;
  s0.x0 = T(0);
  s0.direction = +1;
  s0.exponent = sb0.larger_exponent();
  s0.radius = convergence_radius(ode, T(0));
  s0.coeffs.push_back(C(1));

  SeriesBuilder<T> sb1(ode, T(1), -1);
  FrobeniusSeries<T> s1;
  s1.x0 = T(1);
  s1.direction = -1;
  s1.exponent = rb == RightBranch::larger_exponent
                    ? sb1.larger_exponent()
                    : (std::abs(sb1.larger_exponent()) < std::abs(sb1.smaller_exponent())
                           ? sb1.larger_exponent()
                           : sb1.smaller_exponent());
  s1.radius = convergence_radius(ode, T(1));
  s1.coeffs.push_back(C(1));

  SeriesEval<T> e0{}, e1{};
  SeriesEval<T> prev0{}, prev1{};
  bool settled = false;
  for (std::size_t n = 64; n <= n_cap; n *= 2) {
    sb0.extend(s0.coeffs, s0.exponent, n, -1, nullptr, nullptr);
    sb1.extend(s1.coeffs, s1.exponent, n, -1, nullptr, nullptr);
    e0 = evaluate_series(s0, midpoint, tol);
    e1 = evaluate_series(s1, midpoint, tol);
    n0 = n1 = n;
    if (e0.converged && e1.converged && n > 64 &&
        std::abs(e0.value - prev0.value) < tol * std::max(T(1), std::abs(e0.value)) &&
        std::abs(e1.value - prev1.value) < tol * std::max(T(1), std::abs(e1.value))) {
      settled = true;
      break;
    }
    prev0 = e0;
    prev1 = e1;
  }
  p.n_terms_left = n0;
  p.n_terms_right = n1;
  p.low_confidence = !settled;

  p.W = e0.value * e1.dvalue - e0.dvalue * e1.value;
  const T scale = std::abs(e0.value) * std::abs(e1.dvalue) +
                  std::abs(e0.dvalue) * std::abs(e1.value);
  p.W_norm = scale > T(0) ? p.W / C(scale) : p.W;
  p.err_estimate = (e0.err + e1.err) / std::max(scale, T(1e-300));
  return p;
}

}  // namespace detail

// Wronskian of the two endpoint series at an interior matching point.
// At lambda = 1 - N (positive integer N) the exponents at rho = 1 differ by
// the integer N and the generic exponent-0 branch is obstructed. When the
// obstruction is nonzero the analytic branch is the exponent-N one, and the
// Wronskian criterion works with that branch. When the obstruction vanishes
// (N = 3) every local solution is analytic, the criterion degenerates, and W
// is reported as the two-sided limit of the generic branch with the
// near_resonant flag set: such lambda are decided by the resonance test, not
// by W.
template <class T>
WronskianProbe<T> wronskian_mid(std::complex<T> lambda, T midpoint = T(0.5),
                                T tol = T(1e-12),
                                std::size_t n_cap = std::size_t(1) << 16) {
  using C = std::complex<T>;
  if (!(midpoint > T(0) && midpoint < T(1)))
    throw std::invalid_argument("wronskian_mid: midpoint in (0,1)");

  if (std::abs(lambda.imag()) < T(1e-12)) {
    const T lr = lambda.real();
    const T Nf = std::round(T(1) - lr);
    if (Nf >= T(1) && std::abs(lr - (T(1) - Nf)) < T(1e-8)) {
      const int N = static_cast<int>(Nf);
      const T lc = T(1) - Nf;
      const auto att =
          attempt_log_free_series(spectral_ode(C(lc)), T(1),
                                  static_cast<std::size_t>(N) + 2, -1);
      if (att.log_required) {
        // unique analytic branch is u^N
        auto p = detail::wronskian_mid_raw(C(lc), midpoint, tol, n_cap,
                                           detail::RightBranch::larger_exponent);
        p.lambda = lambda;
        p.near_resonant = true;
        return p;
      }
      const T d = T(1e-5);
      auto pp = detail::wronskian_mid_raw(C(lc + d), midpoint, tol, n_cap);
      auto pm = detail::wronskian_mid_raw(C(lc - d), midpoint, tol, n_cap);
      WronskianProbe<T> p = pp;
      p.lambda = lambda;
      p.W = (pp.W + pm.W) / C(2);
      p.W_norm = (pp.W_norm + pm.W_norm) / C(2);
      p.err_estimate = std::max(pp.err_estimate, pm.err_estimate) +
                       std::abs(pp.W_norm - pm.W_norm);
      p.low_confidence = pp.low_confidence || pm.low_confidence;
      p.near_resonant = true;
      return p;
    }
  }
  return detail::wronskian_mid_raw(lambda, midpoint, tol, n_cap);
}

// documented reliable window for the double-precision series oracle
template <class T>
constexpr T oracle_window_min() {
  return T(-7.5);
}
template <class T>
constexpr T oracle_window_max() {
  return T(1.5);
}

// Bracket-and-secant root finding on the normalized real Wronskian, plus the
// log-free resonance test at integer lambda = 1 - N: there the Wronskian
// against the generic analytic branch does not vanish even when lambda is an
// eigenvalue (both local branches are analytic and the eigenfunction need not
// be proportional to either), so integer candidates are decided by the
// order-N consistency value instead.
template <class T>
std::vector<EigenRecord<T>> oracle_eigenvalues(T lambda_min, T lambda_max,
                                               T scan_step = T(0.05),
                                               T tol = T(1e-9)) {
  using C = std::complex<T>;
  if (!(lambda_min < lambda_max)) throw std::invalid_argument("oracle: empty range");
  if (lambda_min < oracle_window_min<T>() || lambda_max > oracle_window_max<T>())
    throw std::invalid_argument(
        "oracle_eigenvalues: outside the reliable window [-7.5, 1.5]; use the "
        "continued-fraction solver for deeper eigenvalues");

  std::vector<EigenRecord<T>> records;
  auto Wfun = [&](T x) { return wronskian_mid(C(x)).W_norm.real(); };

  // The generic right branch jumps sign across every integer lambda = 1 - N
  // (the obstructed coefficient changes sign), which would fake a bracket.
  // Split the grid at those points; integers themselves are decided by the
  // log-free resonance test below.
  const T gap = T(1e-4);
  std::vector<T> xs;
  xs.push_back(lambda_min);
  for (T x = lambda_min + scan_step; x < lambda_max; x += scan_step) xs.push_back(x);
  xs.push_back(lambda_max);
  std::vector<std::pair<T, T>> cells;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    T a = xs[i], b = xs[i + 1];
    bool split = false;
    for (int N = 1; N <= 9; ++N) {
      const T res_pt = T(1 - N);
      if (a < res_pt - gap && res_pt + gap < b) {
        cells.push_back({a, res_pt - gap});
        cells.push_back({res_pt + gap, b});
        split = true;
        break;
      }
      if (std::abs(a - res_pt) <= gap || std::abs(b - res_pt) <= gap) {
        // endpoint sits on the resonance: shrink away from it
        T aa = (std::abs(a - res_pt) <= gap) ? res_pt + gap : a;
        T bb = (std::abs(b - res_pt) <= gap) ? res_pt - gap : b;
        if (aa < bb) cells.push_back({aa, bb});
        split = true;
        break;
      }
    }
    if (!split) cells.push_back({a, b});
  }

  for (const auto& [a, b] : cells) {
    const T fa = Wfun(a), fb = Wfun(b);
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    bool hit = false;
    T root{}, fres{};
    int iters = 0;
    if (fa == T(0)) {
      hit = true;
      root = a;
      fres = T(0);
    } else if ((fa < T(0)) != (fb < T(0))) {
      hit = detail::polish_bracket(Wfun, a, b, fa, fb, tol, root, fres, iters);
    }
    if (hit) {
      EigenRecord<T> rec;
      rec.lambda = C(root);
      rec.residual = fres;
      rec.method = "shooting";
      rec.bracket_lo = a;
      rec.bracket_hi = b;
      rec.iterations = iters;
      records.push_back(rec);
    }
  }

  // integer candidates lambda = 1 - N inside the window
  for (int N = 2; N <= 8; ++N) {
    const T lam = T(1 - N);
    if (lam < lambda_min || lam > lambda_max) continue;
    const auto rr = resonance_check<T>(N);
    if (!rr.log_required) {
      EigenRecord<T> rec;
      rec.lambda = C(lam);
      rec.residual = std::abs(rr.obstruction) / std::max(rr.scale, T(1));
      rec.method = "shooting";
      rec.bracket_lo = rec.bracket_hi = lam;
      records.push_back(rec);
    }
  }

  std::sort(records.begin(), records.end(),
            [](const auto& x, const auto& y) { return x.lambda.real() > y.lambda.real(); });
  std::vector<EigenRecord<T>> dedup;
  for (auto& r : records)
    if (dedup.empty() || std::abs(dedup.back().lambda - r.lambda) > T(1e-6))
      dedup.push_back(r);
  return dedup;
}

}  // namespace wmstab
