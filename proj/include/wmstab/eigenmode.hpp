#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "wmstab/linear_ode.hpp"
#include "wmstab/recurrence.hpp"

namespace wmstab {

// Minimal-solution coefficients a_1..a_n of the transformed-equation series,
// built from the continued-fraction ratios (backward pass, so the dominant
// branch never contaminates). Valid as an eigenfunction when lambda is an
// eigenvalue; the n = 0 seed is then satisfied to the root-finder residual.
template <class T>
std::vector<std::complex<T>> minimal_solution_coeffs(std::complex<T> lambda,
                                                     std::size_t n_terms,
                                                     std::size_t tail_start = 4096) {
  using C = std::complex<T>;
  const std::size_t N = std::max(tail_start, 4 * n_terms);
  std::vector<C> ratio(n_terms + 1, C(0));  // ratio[k] = a_{k+1}/a_k
  C r(0);
  for (std::size_t k = N - 1; k >= 1; --k) {
    const auto rc = recurrence_coeffs(lambda, T(k));
    const C den = rc.p1 / rc.p2 + r;
    r = -(rc.p0 / rc.p2) / (std::abs(den) < T(1e-30) ? den + C(T(1e-30)) : den);
    if (k <= n_terms) ratio[k] = r;
  }
  std::vector<C> a(n_terms + 1, C(0));
  a[1] = C(1);
  for (std::size_t k = 1; k < n_terms; ++k) a[k + 1] = ratio[k] * a[k];
  return a;
}

// v(rho) for the eigenvalue lambda via the change of variables
// v = (2-x)^{(lambda-1)/2} y(x), x = 2 rho^2/(1+rho^2). The x-series of the
// minimal solution converges for x < 2, i.e. on the whole rho axis.
template <class T>
std::complex<T> eigenmode_v(const std::vector<std::complex<T>>& coeffs, T rho,
                            std::complex<T> lambda) {
  using C = std::complex<T>;
  const T x = change_of_variable_x(rho);
  C y(0);
  for (std::size_t n = coeffs.size(); n-- > 1;) y = (y + coeffs[n]) * C(x);
  return transform_prefactor(rho, lambda) * y;
}

// samples of v(rho)/rho on a grid, normalized so max |v/rho| over [0,1] is 1
template <class T>
std::vector<T> eigenmode_profile(std::complex<T> lambda, const std::vector<T>& rho,
                                 std::size_t n_terms = 96) {
  const auto a = minimal_solution_coeffs(lambda, n_terms);
  std::vector<T> phi(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i)
    phi[i] = rho[i] > T(1e-12)
                 ? (eigenmode_v(a, rho[i], lambda) / std::complex<T>(rho[i])).real()
                 : T(0);
  // normalization fixed on [0,1] regardless of the sample grid
  T mx(0);
  for (int k = 0; k <= 400; ++k) {
    const T rr = T(k) / T(400);
    const T val = rr > T(1e-12)
                      ? std::abs((eigenmode_v(a, rr, lambda) / std::complex<T>(rr)).real())
                      : T(0);
    mx = std::max(mx, val);
  }
  if (mx == T(0)) throw std::runtime_error("eigenmode_profile: zero mode");
  for (auto& p : phi) p /= mx;
  return phi;
}

}  // namespace wmstab
