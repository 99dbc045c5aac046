#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wmstab/frobenius.hpp"
#include "wmstab/linear_ode.hpp"

using namespace wmstab;
using C = std::complex<double>;

TEST_CASE("potential: endpoint values, bound, rational identity") {
  REQUIRE(potential_v(0.0) == Catch::Approx(2.0).margin(1e-15));
  REQUIRE(potential_v(1.0) == Catch::Approx(-2.0).margin(1e-14));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U01(0, 1), U10(0, 10);
  for (int i = 0; i < 200; ++i) REQUIRE(std::abs(potential_v(U01(rng))) <= 2.0 + 1e-14);
  for (int i = 0; i < 1000; ++i) {
    const double rho = U10(rng);
    const double q = (1 + rho * rho) * (1 + rho * rho);
    const double lhs = potential_v(rho) * q;
    const double rhs = 2 * (1 - 6 * rho * rho + std::pow(rho, 4));
    const double scale = 2 * (1 + 6 * rho * rho + std::pow(rho, 4));  // term size
    REQUIRE(std::abs(lhs - rhs) < 1e-14 * scale);
    REQUIRE(potential_v(rho) == Catch::Approx(potential_v_rational(rho)).margin(1e-12));
  }
}

TEST_CASE("mode equation: lambda-multiplied first-derivative term") {
  const auto ode = spectral_ode(C(0.0));
  REQUIRE(ode.c1.is_zero());
  // c2 carries the factor (1-rho^2) rho^2 (1+rho^2)^2
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int i = 0; i < 20; ++i) {
    const double r = U(rng);
    const double expect = -(1 - r * r) * r * r * std::pow(1 + r * r, 2);
    REQUIRE(std::abs(ode.c2(C(r)) - C(expect)) < 1e-13 * std::abs(expect));
  }
}

TEST_CASE("indicial exponents") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> U(-6, 2);
  for (int i = 0; i < 50; ++i) {
    const C lam(U(rng), 0.3 * U(rng));
    const auto [a, b] = indicial_exponents(spectral_ode(lam), 0.0);
    REQUIRE(std::abs(a - C(2)) < 1e-10);  // lambda-independent
    REQUIRE(std::abs(b - C(-1)) < 1e-10);
  }
  {
    const C lam(0.7);
    const auto [a, b] = indicial_exponents(spectral_ode(lam), 1.0);
    REQUIRE(std::abs(a - (C(1) - lam)) < 1e-10);
    REQUIRE(std::abs(b) < 1e-10);
  }
  {
    const auto [a, b] = indicial_exponents(transformed_ode(C(0.7)), 0.0);
    REQUIRE(std::abs(a - C(1)) < 1e-10);
    REQUIRE(std::abs(b - C(-0.5)) < 1e-10);
  }
  {
    const auto [a, b] = indicial_exponents(transformed_ode(C(-2)), 1.0);
    REQUIRE(std::abs(a - C(3)) < 1e-10);
    REQUIRE(std::abs(b) < 1e-10);
  }
  // c0 constant term of the transformed equation
  REQUIRE(transformed_ode(C(0.31)).c0.coeffs[0] == C(-1));
  // ordinary point rejected
  REQUIRE_THROWS_AS(indicial_exponents(spectral_ode(C(1)), 0.5), std::invalid_argument);
  // irregular singular point rejected: x^2 v'' + v' = 0 has c1 too singular
  LinearODE<double> irr;
  irr.c2 = Polynomial<double>({C(0), C(0), C(1)});
  irr.c1 = Polynomial<double>({C(1)});
  irr.c0 = Polynomial<double>({C(0)});
  REQUIRE_THROWS_AS(indicial_exponents(irr, 0.0), std::invalid_argument);
}

TEST_CASE("gauge-mode series: rho^2/(1+rho^2) expanded at the origin") {
  const auto s = frobenius_series(spectral_ode(C(1)), 0.0, C(2), 64);
  for (std::size_t n = 0; n < 12; ++n) {
    const double expect = (n % 2 == 1) ? 0.0 : ((n / 2) % 2 == 0 ? 1.0 : -1.0);
    REQUIRE(std::abs(s.coeffs[n] - C(expect)) < 1e-13);
  }
  const auto e = evaluate_series(s, 0.5, 1e-12);
  REQUIRE(e.converged);
  REQUIRE(e.value.real() == Catch::Approx(0.2).margin(1e-12));  // 0.25/1.25
}

TEST_CASE("terminating series y = x at the gauge eigenvalue") {
  const auto s = frobenius_series(transformed_ode(C(1)), 0.0, C(1), 16);
  REQUIRE(std::abs(s.coeffs[0] - C(1)) < 1e-15);
  for (std::size_t n = 1; n < s.coeffs.size(); ++n) REQUIRE(std::abs(s.coeffs[n]) < 1e-14);
  const auto e = evaluate_series(s, 0.7, 1e-14);
  REQUIRE(e.value.real() == Catch::Approx(0.7).margin(1e-15));
  REQUIRE(e.converged);
}

TEST_CASE("series satisfies the equation it came from") {
  // residual of the truncated series in the cleared form, well inside the disk
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> Ul(-4, 1), Ur(0.1, 0.7);
  for (int rep = 0; rep < 10; ++rep) {
    const C lam(Ul(rng));
    const auto ode = spectral_ode(lam);
    const auto s = frobenius_series(ode, 0.0, C(2), 400);
    const double rho = Ur(rng);
    // term-wise v, v', v''
    C v(0), dv(0), ddv(0);
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
      const double p = 2.0 + n;
      const double up = std::pow(rho, p);
      v += s.coeffs[n] * up;
      dv += s.coeffs[n] * p * up / rho;
      ddv += s.coeffs[n] * p * (p - 1) * up / (rho * rho);
    }
    const C res = ode.c2(C(rho)) * ddv + ode.c1(C(rho)) * dv + ode.c0(C(rho)) * v;
    const C scale = ode.c2(C(rho)) * ddv;
    REQUIRE(std::abs(res) < 1e-10 * std::max(1.0, std::abs(scale)));
  }
}

TEST_CASE("clearing denominators is sound") {
  // cleared residual equals rho^2 (1+rho^2)^2 times the raw-form residual
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> Ul(-5, 1.4), Ur(0.05, 0.95);
  for (int rep = 0; rep < 200; ++rep) {
    const C lam(Ul(rng));
    const auto ode = spectral_ode(lam);
    const auto s = frobenius_series(ode, 0.0, C(2), 60);
    const double rho = Ur(rng);
    C v(0), dv(0), ddv(0);
    for (std::size_t n = 0; n < s.coeffs.size(); ++n) {
      const double p = 2.0 + n;
      const double up = std::pow(rho, p);
      v += s.coeffs[n] * up;
      dv += s.coeffs[n] * p * up / rho;
      ddv += s.coeffs[n] * p * (p - 1) * up / (rho * rho);
    }
    const C cleared = ode.c2(C(rho)) * ddv + ode.c1(C(rho)) * dv + ode.c0(C(rho)) * v;
    const C raw = -C(1 - rho * rho) * ddv + C(2) * lam * C(rho) * dv +
                  lam * (lam - C(1)) * v + C(potential_v(rho) / (rho * rho)) * v;
    const double factor = rho * rho * std::pow(1 + rho * rho, 2);
    const double scale =
        std::abs(ode.c2(C(rho)) * ddv) + std::abs(factor * raw) + 1.0;
    REQUIRE(std::abs(cleared - C(factor) * raw) < 1e-10 * scale);
  }
}

TEST_CASE("transformation consistency between the two equations") {
  // v0(rho) = 2^{-(lambda+1)/2} (2-x)^{(lambda-1)/2} y0(x), x = 2rho^2/(1+rho^2)
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> Ul(-5, 1), Ur(0.1, 0.9);
  for (int rep = 0; rep < 50; ++rep) {
    const C lam(Ul(rng));
    const double rho = Ur(rng);
    const auto v0 = frobenius_series(spectral_ode(lam), 0.0, C(2), 900);
    const auto y0 = frobenius_series(transformed_ode(lam), 0.0, C(1), 900);
    const auto ev = evaluate_series(v0, rho, 1e-13);
    const double x = change_of_variable_x(rho);
    const auto ey = evaluate_series(y0, x, 1e-13);
    const C pred = std::pow(C(2), -(lam + C(1)) / C(2)) * transform_prefactor(rho, lam) *
                   ey.value;
    REQUIRE(std::abs(ev.value - pred) < 1e-10 * std::abs(ev.value));
  }
}

TEST_CASE("smaller exponent with integer separation is rejected") {
  REQUIRE_THROWS_AS(frobenius_series(spectral_ode(C(0.3)), 0.0, C(-1), 10),
                    std::domain_error);
  // non-root exponent rejected
  REQUIRE_THROWS_AS(frobenius_series(spectral_ode(C(0.3)), 0.0, C(0.77), 10),
                    std::invalid_argument);
}

TEST_CASE("evaluation guards") {
  const auto s = frobenius_series(spectral_ode(C(0.3)), 0.0, C(2), 64);
  REQUIRE_THROWS_AS(evaluate_series(s, 1.2, 1e-10), std::domain_error);
  REQUIRE_THROWS_AS(evaluate_series(s, -0.2, 1e-10), std::domain_error);
  // radius edge: short series cannot meet tolerance, flagged best effort
  const auto e = evaluate_series(s, 0.99, 1e-10);
  REQUIRE_FALSE(e.converged);
  REQUIRE(e.err > 1e-10);
}

TEST_CASE("partial sums settle under doubling inside the disk") {
  const C lam(-2.7);
  const auto ode = spectral_ode(lam);
  const double rho = 0.8;  // radius * (1 - margin)
  const auto s1 = frobenius_series(ode, 0.0, C(2), 512);
  const auto s2 = frobenius_series(ode, 0.0, C(2), 1024);
  const auto e1 = evaluate_series(s1, rho, 1e-12);
  const auto e2 = evaluate_series(s2, rho, 1e-12);
  REQUIRE(std::abs(e1.value - e2.value) < 1e-12 * std::max(1.0, std::abs(e2.value)));
  std::size_t n_used = 0;
  const auto ea = adaptive_series_eval(ode, 0.0, C(2), rho, 1e-12, +1,
                                       std::size_t(1) << 20, &n_used);
  REQUIRE(ea.converged);
  REQUIRE(std::abs(ea.value - e2.value) < 1e-11 * std::max(1.0, std::abs(e2.value)));
}
