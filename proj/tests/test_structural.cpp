#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "wmstab/continued_fraction.hpp"
#include "wmstab/frobenius.hpp"
#include "wmstab/structural.hpp"

using namespace wmstab;
using C = std::complex<double>;

TEST_CASE("gauge mode solves the equation at lambda = 1") {
  REQUIRE(gauge_mode_residual<double>(100) < 1e-12);
  // cleared form stays finite and tiny at the light-cone endpoint
  REQUIRE(gauge_mode_equation_residual_at(1.0) < 1e-12);
  // negative control: a cubic perturbation is not a solution
  REQUIRE(gauge_mode_residual<double>(100, 0.01) > 1e-3);
  REQUIRE_THROWS_AS(gauge_mode_residual<double>(5), std::invalid_argument);
}

TEST_CASE("spectral-parameter map and admissibility exponents") {
  REQUIRE(sl_map(C(1)).mu == C(1));
  REQUIRE(sl_map(C(-2)).mu == C(-8));
  const auto m = sl_map(C(0.5));
  REQUIRE(m.mu == C(0.75));
  REQUIRE(std::abs(m.exp_plus - C(0.75)) < 1e-15);
  REQUIRE(std::abs(m.exp_minus - C(0.25)) < 1e-15);
}

TEST_CASE("mu is symmetric about the gauge point") {
  // bit-exact when 2 - lambda is itself exact
  for (const double lr : {0.5, -2.0, 1.25, -7.75}) {
    const C lam(lr, 0.125);
    REQUIRE(sl_map(lam).mu == sl_map(C(2) - lam).mu);
  }
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-6, 6);
  for (int i = 0; i < 100; ++i) {
    const C lam(U(rng), U(rng));
    const C d = sl_map(lam).mu - sl_map(C(2) - lam).mu;
    REQUIRE(std::abs(d) < 1e-14 * std::max(1.0, std::abs(sl_map(lam).mu)));
  }
}

TEST_CASE("positivity of the mu = 1 mode") {
  REQUIRE(sl_gauge_positivity<double>(1000));
  REQUIRE_FALSE(sl_gauge_positivity<double>(1000, -1.0));  // negated control
  REQUIRE(sl_gauge_mode(0.0) == 0.0);
  REQUIRE(sl_gauge_mode(1.0) == 0.0);
}

TEST_CASE("log-free series exists only at N = 3") {
  for (int N = 1; N <= 8; ++N) {
    const auto r = resonance_check<double>(N);
    REQUIRE(r.N == N);
    if (N == 3)
      REQUIRE_FALSE(r.log_required);
    else
      REQUIRE(r.log_required);
  }
  REQUIRE_THROWS_AS(resonance_check<double>(0), std::invalid_argument);
  REQUIRE_THROWS_AS(resonance_check<double>(9), std::invalid_argument);
}

TEST_CASE("resonance verdicts agree with the eigenvalue condition at 1 - N") {
  for (int N = 1; N <= 8; ++N) {
    const double lam = 1.0 - N;
    const bool is_eigen = std::abs(eigen_fn(C(lam))) < 1e-8;
    const bool log_free = !resonance_check<double>(N).log_required;
    REQUIRE(is_eigen == log_free);
  }
}

TEST_CASE("apparent singularity at lambda = -2") {
  REQUIRE(apparent_singularity_check<double>() < 1e-8);
}

TEST_CASE("generic lambda needs the non-analytic branch") {
  // analytic branch alone cannot reconstruct the interior solution ...
  REQUIRE(apparent_singularity_mismatch<double>(C(-2.5), false) > 1e-3);
  // ... adding the (1-x)^{1-lambda} branch fixes it
  REQUIRE(apparent_singularity_mismatch<double>(C(-2.5), true) < 1e-8);
}

TEST_CASE("gauge eigenvalue is trivially analytic at both ends") {
  const auto s = frobenius_series(transformed_ode(C(1)), 0.0, C(1), 16);
  for (std::size_t n = 1; n < s.coeffs.size(); ++n) REQUIRE(std::abs(s.coeffs[n]) < 1e-14);
}

TEST_CASE("no roots of the eigenvalue function in the excluded half-plane") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(1.02, 6.0);
  for (int i = 0; i < 20; ++i) {
    const double lam = U(rng);
    REQUIRE(std::abs(eigen_fn(C(lam))) > 1e-3);
  }
}
