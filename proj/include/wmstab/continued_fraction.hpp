#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>

#include "wmstab/recurrence.hpp"

namespace wmstab {

template <class T>
struct CFResult {
  std::complex<T> value{};
  std::size_t terms_used = 0;  // tail start N of the accepted evaluation
  bool converged = false;
  bool pivot_perturbed = false;
};

// r_n = a_{n+1}/a_n of the minimal solution via the continued fraction,
// evaluated by downward recursion r_k = -B_k/(A_k + r_{k+1}) from r_N = 0,
// A_k = p1(k)/p2(k), B_k = p0(k)/p2(k). N is doubled from 64 until two
// successive values agree within tol. Convergence for every lambda is
// guaranteed by the minimal-solution theory behind the fraction.
template <class T>
CFResult<T> cf_ratio(std::complex<T> lambda, std::size_t n, T tol = T(1e-13),
                     std::size_t N_max = std::size_t(1) << 20) {
  using C = std::complex<T>;
  if (n < 1) throw std::invalid_argument("cf_ratio: n >= 1");

  CFResult<T> out;
  C prev{};
  bool have_prev = false;
  for (std::size_t N = std::max<std::size_t>(64, 2 * n); N <= N_max; N *= 2) {
    C r(0);
    bool perturbed = false;
    for (std::size_t k = N - 1; k >= n; --k) {
      const auto rc = recurrence_coeffs(lambda, T(k));
      const C A = rc.p1 / rc.p2;
      const C B = rc.p0 / rc.p2;
      C den = A + r;
      if (std::abs(den) < T(1e-30)) {  // fraction pole; keep the scan alive
        den += C(T(1e-30));
        perturbed = true;
      }
      r = -B / den;
    }
    out.value = r;
    out.terms_used = N;
    out.pivot_perturbed = out.pivot_perturbed || perturbed;
    if (have_prev && std::abs(r - prev) <= tol * std::max(T(1), std::abs(r))) {
      out.converged = true;
      return out;
    }
    prev = r;
    have_prev = true;
  }
  out.converged = false;
  return out;
}

template <class T>
struct EigenFnValue {
  std::complex<T> value{};
  bool converged = false;
};

// Eigenvalue condition f(lambda) = (lambda^2 + 8 lambda - 9)/20 - r_1(lambda);
// f vanishes exactly at the eigenvalues. Note f also has poles (where the
// minimal solution of the n >= 1 tail has a_1 = 0); those are not eigenvalues.
template <class T>
EigenFnValue<T> eigen_fn_checked(std::complex<T> lambda, T tol = T(1e-13),
                                 std::size_t N_max = std::size_t(1) << 20) {
  const auto cf = cf_ratio(lambda, 1, tol, N_max);
  return {seed_ratio(lambda) - cf.value, cf.converged};
}

template <class T>
std::complex<T> eigen_fn(std::complex<T> lambda) {
  return eigen_fn_checked(lambda).value;
}

}  // namespace wmstab
