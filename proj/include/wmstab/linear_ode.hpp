#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "wmstab/polynomial.hpp"

namespace wmstab {

// Second-order linear ODE  c2 v'' + c1 v' + c0 v = 0  with polynomial
// coefficients (denominators cleared). Regular singular points are the
// roots of c2.
template <class T>
struct LinearODE {
  using C = std::complex<T>;
  Polynomial<T> c2, c1, c0;
  C lambda{};
};

// V(rho) = 2 cos(4 arctan rho); equals 2(1 - 6 rho^2 + rho^4)/(1 + rho^2)^2.
template <class T>
T potential_v(T rho) {
  return T(2) * std::cos(T(4) * std::atan(rho));
}

template <class T>
T potential_v_rational(T rho) {
  const T r2 = rho * rho;
  const T q = T(1) + r2;
  return T(2) * (T(1) - T(6) * r2 + r2 * r2) / (q * q);
}

// Mode equation in rho on [0,1], multiplied through by rho^2 (1+rho^2)^2:
//   c2 = -(1-rho^2) rho^2 (1+rho^2)^2
//   c1 =  2 lambda rho^3 (1+rho^2)^2
//   c0 =  lambda(lambda-1) rho^2 (1+rho^2)^2 + 2(1 - 6 rho^2 + rho^4)
// Singular points inside [0,1] are rho = 0 and rho = 1.
template <class T>
LinearODE<T> spectral_ode(std::complex<T> lambda) {
  using C = std::complex<T>;
  const C L = lambda * (lambda - C(1));
  LinearODE<T> ode;
  ode.lambda = lambda;
  ode.c2 = Polynomial<T>({C(0), C(0), C(-1), C(0), C(-1), C(0), C(1), C(0), C(1)}, "rho");
  ode.c1 = Polynomial<T>({C(0), C(0), C(0), C(2) * lambda, C(0), C(4) * lambda, C(0),
                          C(2) * lambda},
                         "rho");
  ode.c0 = Polynomial<T>({C(2), C(0), L - C(12), C(0), C(2) * L + C(2), C(0), L}, "rho");
  return ode;
}

// Same spectrum after v = (2-x)^{(lambda-1)/2} y, x = 2 rho^2/(1+rho^2):
//   x^2 (1-x)(2-x) y'' + x [1 - (1+lambda) x (2-x)] y'
//     - 1/4 [lambda^2 x (1-x) + 9x^2 - 17x + 4] y = 0
// Singular points x = 0, 1, 2 and infinity.
template <class T>
LinearODE<T> transformed_ode(std::complex<T> lambda) {
  using C = std::complex<T>;
  const C l2 = lambda * lambda;
  LinearODE<T> ode;
  ode.lambda = lambda;
  ode.c2 = Polynomial<T>({C(0), C(0), C(2), C(-3), C(1)}, "x");
  ode.c1 = Polynomial<T>({C(0), C(1), C(-2) * (C(1) + lambda), C(1) + lambda}, "x");
  ode.c0 = Polynomial<T>({C(-1), -(l2 - C(17)) / C(4), -(C(9) - l2) / C(4)}, "x");
  return ode;
}

template <class T>
T change_of_variable_x(T rho) {
  return T(2) * rho * rho / (T(1) + rho * rho);
}

// prefactor in v(rho) = (2-x)^{(lambda-1)/2} y(x)
template <class T>
std::complex<T> transform_prefactor(T rho, std::complex<T> lambda) {
  const T two_minus_x = T(2) / (T(1) + rho * rho);
  return std::pow(std::complex<T>(two_minus_x), (lambda - std::complex<T>(1)) / std::complex<T>(2));
}

// Indicial exponents at a regular singular point, ordered by descending real
// part. Rejects ordinary points (c2(x0) != 0) and irregular singular points.
template <class T>
std::pair<std::complex<T>, std::complex<T>> indicial_exponents(const LinearODE<T>& ode,
                                                               T point) {
  using C = std::complex<T>;
  const C x0(point);
  const int m2 = ode.c2.multiplicity_at(x0);
  if (m2 <= 0) throw std::invalid_argument("indicial_exponents: ordinary point");
  const int m1 = ode.c1.is_zero() ? m2 : ode.c1.multiplicity_at(x0);
  const int m0 = ode.c0.is_zero() ? m2 : ode.c0.multiplicity_at(x0);
  if (m1 < m2 - 1 || m0 < m2 - 2)
    throw std::invalid_argument("indicial_exponents: irregular singular point");

  const auto s2 = ode.c2.shifted(x0);
  const C lead = s2[m2];
  C p0(0), q0(0);
  if (!ode.c1.is_zero()) {
    const auto s1 = ode.c1.shifted(x0);
    if (m2 - 1 >= 0 && m2 - 1 < static_cast<int>(s1.size())) p0 = s1[m2 - 1] / lead;
  }
  if (!ode.c0.is_zero() && m2 >= 2) {
    const auto s0 = ode.c0.shifted(x0);
    if (m2 - 2 < static_cast<int>(s0.size())) q0 = s0[m2 - 2] / lead;
  }
  // s(s-1) + p0 s + q0 = 0
  const C b = p0 - C(1);
  const C disc = b * b - C(4) * q0;
  const C sq = std::sqrt(disc);
  C r1 = (-b + sq) / C(2);
  C r2 = (-b - sq) / C(2);
  if (r1.real() < r2.real()) std::swap(r1, r2);
  return {r1, r2};
}

}  // namespace wmstab
