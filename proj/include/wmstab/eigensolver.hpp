#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmstab/continued_fraction.hpp"
#include "wmstab/recurrence.hpp"

namespace wmstab {

template <class T>
struct EigenRecord {
  std::complex<T> lambda{};
  T residual{};  // |f(lambda)|
  std::string method;
  T bracket_lo{}, bracket_hi{};
  int iterations = 0;
  RatioClass ratio_class = RatioClass::inconclusive;
  T ratio_plateau{};
  bool ratio_terminating = false;
};

template <class T>
struct UnresolvedBracket {
  T lo{}, hi{};
  T final_residual{};  // large: the sign change runs through a fraction pole
};

template <class T>
struct RealScanResult {
  std::vector<EigenRecord<T>> records;  // sorted descending in lambda
  // sign-change cells whose polish did not reach the tolerance; a large final
  // residual identifies a fraction pole rather than a root
  std::vector<UnresolvedBracket<T>> unresolved;
  // grid points where the fraction failed to converge
  std::vector<T> non_converged_points;
  int cells_subdivided = 0;
};

namespace detail {

// Illinois-modified regula falsi on f within a sign-change bracket.
template <class T, class F>
bool polish_bracket(F&& f, T a, T b, T fa, T fb, T tol, T& root, T& froot, int& iters) {
  int side = 0;
  T m = a, fm = fa;
  for (int it = 0; it < 100; ++it) {
    m = (a * fb - b * fa) / (fb - fa);
    if (!(std::min(a, b) < m && m < std::max(a, b))) m = (a + b) / T(2);
    fm = f(m);
    iters = it + 1;
    if (std::abs(fm) < tol) {
      root = m;
      froot = std::abs(fm);
      return true;
    }
    if ((fa < T(0)) != (fm < T(0))) {
      b = m;
      fb = fm;
      if (side == -1) fa /= T(2);
      side = -1;
    } else {
      a = m;
      fa = fm;
      if (side == +1) fb /= T(2);
      side = +1;
    }
    if (std::abs(b - a) < T(1e-15) * std::max(T(1), std::abs(a))) break;
  }
  root = m;
  froot = std::abs(fm);
  return false;
}

}  // namespace detail

// Scan f on a real grid, bracket sign changes, polish by bracketed secant.
// Cells without a sign change but with a strong |f| swing hide a pole-root
// pair closer together than the step; those are subdivided before bracketing.
template <class T>
RealScanResult<T> find_real_eigenvalues(T lambda_min, T lambda_max, T scan_step = T(0.02),
                                        T tol = T(1e-12)) {
  using C = std::complex<T>;
  if (!(lambda_min < lambda_max))
    throw std::invalid_argument("find_real_eigenvalues: empty range");
  if (!(scan_step > T(0)) || !(tol > T(0)))
    throw std::invalid_argument("find_real_eigenvalues: step and tol must be positive");

  RealScanResult<T> out;
  auto f = [&](T x) {
    const auto v = eigen_fn_checked(C(x));
    if (!v.converged) out.non_converged_points.push_back(x);
    return v.value.real();
  };

  std::vector<T> xs;
  for (T x = lambda_min; x < lambda_max; x += scan_step) xs.push_back(x);
  xs.push_back(lambda_max);
  std::vector<T> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = f(xs[i]);

  struct Bracket {
    T a, b, fa, fb;
  };
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const T fa = fs[i], fb = fs[i + 1];
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    if (fa == T(0)) {
      brackets.push_back({xs[i], xs[i], fa, fa});
      continue;
    }
    if ((fa < T(0)) != (fb < T(0))) {
      brackets.push_back({xs[i], xs[i + 1], fa, fb});
      continue;
    }
    const T mx = std::max(std::abs(fa), std::abs(fb));
    const T mn = std::min(std::abs(fa), std::abs(fb));
    if (mn > T(0) && mx / mn > T(4)) {  // pole suspect: refine to step/64
      ++out.cells_subdivided;
      const int parts = 64;
      T pa = xs[i], va = fa;
      for (int j = 1; j <= parts; ++j) {
        const T pb = xs[i] + (xs[i + 1] - xs[i]) * T(j) / T(parts);
        const T vb = (j == parts) ? fb : f(pb);
        if (std::isfinite(va) && std::isfinite(vb) && (va < T(0)) != (vb < T(0)))
          brackets.push_back({pa, pb, va, vb});
        pa = pb;
        va = vb;
      }
    }
  }

  for (const auto& br : brackets) {
    if (br.a == br.b) {
      EigenRecord<T> rec;
      rec.lambda = C(br.a);
      rec.residual = std::abs(br.fa);
      rec.method = "continued-fraction";
      rec.bracket_lo = br.a;
      rec.bracket_hi = br.b;
      out.records.push_back(rec);
      continue;
    }
    T root{}, fres{};
    int iters = 0;
    const bool ok = detail::polish_bracket(
        [&](T x) { return eigen_fn_checked(C(x)).value.real(); }, br.a, br.b, br.fa,
        br.fb, tol, root, fres, iters);
    if (ok) {
      // integer eigenvalues are exact; snap when the integer does at least as well
      const T snapped = std::round(root);
      if (std::abs(root - snapped) < T(1e-8)) {
        const T fs = std::abs(eigen_fn_checked(C(snapped)).value);
        if (fs <= fres) {
          root = snapped;
          fres = fs;
        }
      }
      EigenRecord<T> rec;
      rec.lambda = C(root);
      rec.residual = fres;
      rec.method = "continued-fraction";
      rec.bracket_lo = br.a;
      rec.bracket_hi = br.b;
      rec.iterations = iters;
      out.records.push_back(rec);
    } else {
      out.unresolved.push_back({br.a, br.b, fres});
    }
  }

  std::sort(out.records.begin(), out.records.end(),
            [](const auto& x, const auto& y) { return x.lambda.real() > y.lambda.real(); });
  std::vector<EigenRecord<T>> dedup;
  for (auto& r : out.records) {
    if (dedup.empty() || std::abs(dedup.back().lambda - r.lambda) > T(1e-6))
      dedup.push_back(r);
    else if (r.residual < dedup.back().residual)
      dedup.back() = r;
  }
  out.records = std::move(dedup);

  for (auto& r : out.records) {
    const auto probe = minimal_ratio_test(r.lambda, std::size_t(300));
    r.ratio_class = probe.cls;
    r.ratio_plateau = probe.plateau_value;
    r.ratio_terminating = probe.terminating;
  }
  return out;
}

template <class T>
struct ComplexScanResult {
  std::vector<EigenRecord<T>> records;
  std::size_t seeds = 0;
  std::size_t diverged = 0;        // left the search region or no convergence
  std::size_t converged_real = 0;  // converged onto the real axis; not counted as complex
};

// Damped Newton (finite-difference derivative, step clipped to 0.5) from every
// grid seed. The seeded band must stay off the real axis; real roots belong to
// the real scan.
template <class T>
ComplexScanResult<T> find_complex_eigenvalues(T re_lo, T re_hi, T im_lo, T im_hi,
                                              std::size_t n_re, std::size_t n_im,
                                              T tol = T(1e-11)) {
  using C = std::complex<T>;
  if (!(re_lo < re_hi) || !(im_lo < im_hi) || n_re < 2 || n_im < 2)
    throw std::invalid_argument("find_complex_eigenvalues: bad region/grid");
  if (std::min(std::abs(im_lo), std::abs(im_hi)) < T(1e-6) ||
      (im_lo < T(0)) != (im_hi < T(0)))
    throw std::invalid_argument(
        "find_complex_eigenvalues: im range must exclude |Im| < 1e-6");

  ComplexScanResult<T> out;
  const T margin = T(1);
  for (std::size_t i = 0; i < n_re; ++i) {
    for (std::size_t j = 0; j < n_im; ++j) {
      ++out.seeds;
      C z(re_lo + (re_hi - re_lo) * T(i) / T(n_re - 1),
          im_lo + (im_hi - im_lo) * T(j) / T(n_im - 1));
      bool converged = false;
      int it = 0;
      for (; it < 60; ++it) {
        const C fz = eigen_fn(z);
        const T h = T(1e-7) * std::max(T(1), std::abs(z));
        const C df = (eigen_fn(z + C(h)) - eigen_fn(z - C(h))) / C(2 * h);
        if (std::abs(df) == T(0)) break;
        C step = fz / df;
        if (std::abs(step) > T(0.5)) step *= T(0.5) / std::abs(step);
        z -= step;
        if (z.real() < re_lo - margin || z.real() > re_hi + margin ||
            std::abs(z.imag()) > std::max(std::abs(im_lo), std::abs(im_hi)) + margin)
          break;
        if (std::abs(step) < T(1e-12) && std::abs(eigen_fn(z)) < tol) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        ++out.diverged;
        continue;
      }
      if (std::abs(z.imag()) < T(1e-6)) {
        ++out.converged_real;
        continue;
      }
      bool dup = false;
      for (const auto& r : out.records)
        if (std::abs(r.lambda - z) < T(1e-6)) dup = true;
      if (dup) continue;
      EigenRecord<T> rec;
      rec.lambda = z;
      rec.residual = std::abs(eigen_fn(z));
      rec.method = "continued-fraction";
      rec.iterations = it;
      const auto probe = minimal_ratio_test(z, std::size_t(300));
      rec.ratio_class = probe.cls;
      rec.ratio_plateau = probe.plateau_value;
      out.records.push_back(rec);
    }
  }
  std::sort(out.records.begin(), out.records.end(), [](const auto& x, const auto& y) {
    return x.lambda.real() != y.lambda.real() ? x.lambda.real() > y.lambda.real()
                                              : x.lambda.imag() > y.lambda.imag();
  });
  return out;
}

}  // namespace wmstab
