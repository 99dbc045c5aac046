#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "wmstab/eigensolver.hpp"

using namespace wmstab;
using C = std::complex<double>;

TEST_CASE("full real scan reproduces the twelve-row table") {
  const auto t0 = std::chrono::steady_clock::now();
  const auto scan = find_real_eigenvalues(-12.5, 1.5, 0.02, 1e-12);
  const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);

  const auto& tab = oracles::published_eigenvalues();
  REQUIRE(scan.records.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    const double tol_i = (i == 9) ? 5e-7 : 5e-6;  // one row is printed to 7 decimals
    REQUIRE(std::abs(scan.records[i].lambda.real() - tab[i]) < tol_i);
    REQUIRE(std::abs(scan.records[i].lambda.imag()) == 0.0);
    REQUIRE(scan.records[i].residual < 1e-10);
    REQUIRE(scan.records[i].method == "continued-fraction");
    REQUIRE(scan.records[i].ratio_class == RatioClass::minimal);
  }
  // descending order
  for (std::size_t i = 0; i + 1 < 12; ++i)
    REQUIRE(scan.records[i].lambda.real() > scan.records[i + 1].lambda.real());
  // the pole-root pairs near -4.78 and -8.85 need subdivided cells
  REQUIRE(scan.cells_subdivided > 0);
  REQUIRE(dt.count() < 30.0);
}

TEST_CASE("exact integer eigenvalues to high accuracy") {
  const auto scan = find_real_eigenvalues(-12.5, 1.5, 0.02, 1e-12);
  REQUIRE(std::abs(scan.records[0].lambda.real() - 1.0) < 1e-9);
  REQUIRE(std::abs(scan.records[2].lambda.real() + 2.0) < 1e-9);
}

TEST_CASE("no eigenvalues above the gauge value") {
  const auto scan = find_real_eigenvalues(1.05, 10.0, 0.02, 1e-12);
  REQUIRE(scan.records.empty());
}

TEST_CASE("single-root window") {
  const auto scan = find_real_eigenvalues(-0.6, -0.5, 0.02, 1e-12);
  REQUIRE(scan.records.size() == 1);
  REQUIRE(std::abs(scan.records[0].lambda.real() + 0.542466) < 5e-6);
}

TEST_CASE("no spurious roots: |f| stays away from zero on (1, 5]") {
  for (double x = 1.05; x <= 5.0; x += 0.01) {
    const auto v = eigen_fn_checked(C(x));
    REQUIRE(v.converged);
    REQUIRE(std::abs(v.value) > 1e-3);
  }
}

TEST_CASE("conjugate symmetry of the eigenvalue function") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> Ur(-12, 2), Ui(0.1, 4);
  for (int i = 0; i < 20; ++i) {
    const C z(Ur(rng), Ui(rng));
    const C a = eigen_fn(z), b = eigen_fn(std::conj(z));
    REQUIRE(std::abs(std::conj(a) - b) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("complex search comes back empty off the real axis") {
  // reduced grid for the unit suite; the acceptance run uses 60x30
  const auto scan = find_complex_eigenvalues(-13.0, 2.0, 0.1, 5.0, 16, 8, 1e-11);
  REQUIRE(scan.records.empty());
  REQUIRE(scan.seeds == 16 * 8);
  // every seed either diverged/escaped or fell onto the real axis
  REQUIRE(scan.diverged + scan.converged_real == scan.seeds);
}

TEST_CASE("near-real seed converges to the real root and is set aside") {
  const auto scan = find_complex_eigenvalues(0.5, 1.4, 0.05, 0.2, 4, 3, 1e-11);
  REQUIRE(scan.records.empty());
  REQUIRE(scan.converged_real > 0);
}

TEST_CASE("complex search rejects a band touching the real axis") {
  REQUIRE_THROWS_AS(find_complex_eigenvalues(-2.0, 2.0, -1.0, 1.0, 8, 8),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(find_complex_eigenvalues(-2.0, 2.0, 1e-9, 1.0, 8, 8),
                    std::invalid_argument);
}

TEST_CASE("scan preconditions") {
  REQUIRE_THROWS_AS(find_real_eigenvalues(1.0, -1.0), std::invalid_argument);
  REQUIRE_THROWS_AS(find_real_eigenvalues(-1.0, 1.0, -0.1), std::invalid_argument);
}
