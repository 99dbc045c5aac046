#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace wmstab {

// Dense univariate polynomial with complex coefficients, ascending degree.
// The trailing coefficient is kept nonzero (zero polynomial has empty coeffs).
template <class T>
struct Polynomial {
  using C = std::complex<T>;

  std::vector<C> coeffs;
  std::string var = "x";

  Polynomial() = default;
  explicit Polynomial(std::vector<C> c, std::string v = "x")
      : coeffs(std::move(c)), var(std::move(v)) {
    trim();
  }

  static Polynomial from_real(const std::vector<T>& c, std::string v = "x") {
    std::vector<C> cc(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) cc[i] = C(c[i]);
    return Polynomial(std::move(cc), std::move(v));
  }

  void trim() {
    while (!coeffs.empty() && coeffs.back() == C(0)) coeffs.pop_back();
  }

  bool is_zero() const { return coeffs.empty(); }
  // degree of the zero polynomial reported as -1
  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  C operator()(const C& x) const {  // Horner
    C acc(0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
  }

  Polynomial derivative() const {
    if (coeffs.size() <= 1) return Polynomial{};
    std::vector<C> d(coeffs.size() - 1);
    for (std::size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * C(T(i));
    return Polynomial(std::move(d), var);
  }

  // Taylor shift: coefficients of p(x0 + u) in u, by repeated synthetic division.
  std::vector<C> shifted(const C& x0) const {
    const std::size_t n = coeffs.size();
    std::vector<C> w = coeffs, out(n, C(0));
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = n - 1; j-- > k;) w[j] += x0 * w[j + 1];
      out[k] = w[k];
    }
    return out;
  }

  // order of vanishing at x0 (relative threshold on shifted coefficients)
  int multiplicity_at(const C& x0, T rel_tol = T(1e-12)) const {
    if (is_zero()) return -1;
    auto sh = shifted(x0);
    T scale(0);
    for (const auto& c : sh) scale = std::max(scale, std::abs(c));
    if (scale == T(0)) return -1;
    int m = 0;
    while (m < static_cast<int>(sh.size()) && std::abs(sh[m]) <= rel_tol * scale) ++m;
    return m;
  }
};

// roots by Durand-Kerner-Weierstrass iteration; adequate for the low-degree
// ODE coefficient polynomials this project produces
template <class T>
std::vector<std::complex<T>> polynomial_roots(const Polynomial<T>& p,
                                              int max_iter = 400,
                                              T tol = T(1e-13)) {
  using C = std::complex<T>;
  const int n = p.degree();
  if (n < 1) return {};
  std::vector<C> a(p.coeffs);
  const C lead = a.back();
  for (auto& c : a) c /= lead;

  std::vector<C> z(n);
  const C seed(T(0.4), T(0.9));
  C pw(1);
  for (int i = 0; i < n; ++i) {
    pw *= seed;
    z[i] = pw;
  }
  auto eval = [&](const C& x) {
    C acc(0);
    for (std::size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
    return acc;
  };
  for (int it = 0; it < max_iter; ++it) {
    T moved(0);
    for (int i = 0; i < n; ++i) {
      C num = eval(z[i]);
      C den(1);
      for (int j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (std::abs(den) == T(0)) den = C(T(1e-30));
      C dz = num / den;
      z[i] -= dz;
      moved = std::max(moved, std::abs(dz));
    }
    if (moved < tol) break;
  }
  return z;
}

}  // namespace wmstab
