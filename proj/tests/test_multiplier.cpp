#include <doctest.h>

#include <cmath>
#include <random>

#include "halfheat/grid.hpp"
#include "halfheat/multiplier.hpp"

using namespace halfheat;

TEST_SUITE("multiplier") {

TEST_CASE("root is the principal square root of |xi|^2 + i tau") {
  const cplx r01 = root(0.0, 1.0);
  CHECK(r01.real() == doctest::Approx(M_SQRT1_2).epsilon(1e-14));
  CHECK(r01.imag() == doctest::Approx(M_SQRT1_2).epsilon(1e-14));
  CHECK(std::abs(root(1.0, 0.0) - cplx(1.0, 0.0)) <= 1e-15);
  std::mt19937_64 eng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double xi = 20.0 * u(eng);
    const double tau = 300.0 * u(eng);
    const cplx z = root(std::fabs(xi), tau);
    CHECK(std::abs(z * z - cplx(xi * xi, tau)) <= 1e-13 * std::abs(z * z));
    CHECK(z.real() > 0.0);
    // documented lower bound keeping every Poisson profile decaying
    const double floor =
        std::pow(xi * xi * xi * xi + tau * tau, 0.25) / std::sqrt(2.0);
    CHECK(z.real() >= floor * (1.0 - 1e-12));
    // conjugation symmetry ties negative-tau modes to positive-tau ones
    const cplx zc = root(std::fabs(xi), -tau);
    CHECK(std::abs(zc - std::conj(z)) <= 1e-14 * std::abs(z));
  }
}

TEST_CASE("poisson symbol composes like a semigroup in depth") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double xi = 8.0 * u(eng), tau = 60.0 * (u(eng) - 0.5);
    const double a = 2.0 * u(eng), b = 2.0 * u(eng);
    const cplx lhs = poisson_symbol(a, xi, tau) * poisson_symbol(b, xi, tau);
    const cplx rhs = poisson_symbol(a + b, xi, tau);
    CHECK(std::abs(lhs - rhs) <= 1e-14);
  }
  CHECK(poisson_symbol(0.7, 0.0, 0.0) == cplx(1.0, 0.0));
  CHECK(std::abs(poisson_symbol(3.0, 2.0, 5.0)) <= 1.0);
}

TEST_CASE("neumann symbol is the depth antiderivative shape") {
  // (-root) * (-e^{-x root}/root) recovers the poisson symbol
  for (double tau : {-9.0, 0.7, 31.0}) {
    const cplx z = root(1.3, tau);
    const cplx lhs = -z * neumann_symbol(0.8, 1.3, tau);
    CHECK(std::abs(lhs - poisson_symbol(0.8, 1.3, tau)) <= 1e-15);
  }
  CHECK_THROWS_AS(neumann_symbol(1.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("deriv_symbol has exact parabolic homogeneity") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<std::pair<std::vector<int>, int>> cases = {
      {{0, 0}, 0}, {{1, 0}, 0}, {{0, 1}, 0}, {{2, 1}, 1}, {{0, 3}, 2}};
  for (const auto& [alpha, beta] : cases) {
    const int order = alpha[0] + alpha[1] + 2 * beta;
    for (int i = 0; i < 200; ++i) {
      const double xi1 = 3.0 * u(eng);
      const double tau = 10.0 * u(eng);
      const double xivec[1] = {xi1};
      const cplx base = deriv_symbol(alpha, beta, xivec, std::fabs(xi1), tau);
      for (double lam : {2.0, 4.0}) {
        const double xs[1] = {lam * xi1};
        const cplx scaled =
            deriv_symbol(alpha, beta, xs, lam * std::fabs(xi1), lam * lam * tau);
        CHECK(std::abs(scaled - std::pow(lam, order) * base) <=
              1e-13 * std::abs(scaled) + 1e-300);
      }
    }
  }
}

TEST_CASE("deriv_symbol conventions") {
  const std::vector<int> id = {0};
  CHECK(deriv_symbol(id, 0, std::vector<double>{}, 0.0, 0.0) == cplx(1.0, 0.0));
  // normal slot carries (-root)
  const std::vector<int> normal = {1};
  const cplx s = deriv_symbol(normal, 0, std::vector<double>{}, 0.0, 4.0);
  CHECK(std::abs(s + root(0.0, 4.0)) <= 1e-15);
  // time slot carries (i tau)
  const cplx st = deriv_symbol(id, 2, std::vector<double>{}, 0.0, 3.0);
  CHECK(std::abs(st - cplx(-9.0, 0.0)) <= 1e-15);
  // tangential slot carries (i xi)
  const std::vector<int> tang = {2, 0};
  const double xi[1] = {1.5};
  CHECK(std::abs(deriv_symbol(tang, 0, xi, 1.5, 0.0) - cplx(-2.25, 0.0)) <= 1e-15);
}

TEST_CASE("frac_power multiplies along s and matches integer powers") {
  std::mt19937_64 eng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double xi = 0.1 + 6.0 * u(eng);
    const double tau = 40.0 * (u(eng) - 0.5);
    const double s = 3.0 * u(eng), t = 3.0 * u(eng);
    const cplx prod = frac_power(s, xi, tau) * frac_power(t, xi, tau);
    CHECK(std::abs(prod - frac_power(s + t, xi, tau)) <= 1e-12 * std::abs(prod));
    CHECK(std::abs(frac_power(2.0, xi, tau) - cplx(xi * xi, tau)) <=
          1e-13 * std::abs(cplx(xi * xi, tau)));
  }
  CHECK(frac_power(1.5, 0.0, 0.0) == cplx(0.0, 0.0));
  CHECK(frac_power(0.0, 0.0, 0.0) == cplx(1.0, 0.0));
  CHECK_THROWS_AS(frac_power(-0.5, 0.0, 0.0), std::domain_error);
}

TEST_CASE("annulus_cutoff plateau and support") {
  CHECK(annulus_cutoff(0.5) == 1.0);
  CHECK(annulus_cutoff(1.0) == 1.0);
  CHECK(annulus_cutoff(2.0) == 1.0);
  CHECK(annulus_cutoff(1.0 / 3.0) == 0.0);
  CHECK(annulus_cutoff(3.0) == 0.0);
  CHECK(annulus_cutoff(0.1) == 0.0);
  CHECK(annulus_cutoff(10.0) == 0.0);
  CHECK(annulus_cutoff(0.4) > 0.0);
  CHECK(annulus_cutoff(0.4) < 1.0);
  CHECK(annulus_cutoff(2.5) > 0.0);
  CHECK(annulus_cutoff(2.5) < 1.0);
}

TEST_CASE("kernel_decay_l1 needs the lattice to resolve the annulus") {
  const std::vector<int> id1 = {0};
  CHECK_THROWS_AS(kernel_decay_l1(make_grid(1, 0.0, 2.0 * M_PI, 1, 8), id1, 0, 1.0),
                  std::invalid_argument);
  // tau_max past 9 but too few samples across the annulus
  CHECK_THROWS_AS(kernel_decay_l1(make_grid(1, 0.0, 4.0, 1, 16), id1, 0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("kernel mass decays monotonically in depth") {
  const Grid g1 = make_grid(1, 0.0, 80.0, 1, 256);
  const std::vector<int> id1 = {0};
  const double v0 = kernel_decay_l1(g1, id1, 0, 0.0);
  const double v1 = kernel_decay_l1(g1, id1, 0, 1.0);
  const double v2 = kernel_decay_l1(g1, id1, 0, 2.0);
  const double v4 = kernel_decay_l1(g1, id1, 0, 4.0);
  CHECK(v0 > 0.0);
  CHECK(v0 < 100.0);
  CHECK(v1 > v2);
  CHECK(v2 > v4);
  CHECK(v4 / v1 < 0.5);
  // a second-order index on a d=2 grid decays as well
  const Grid g2 = make_grid(2, 38.0, 80.0, 64, 256);
  const std::vector<int> a2 = {1, 1};
  const double w1 = kernel_decay_l1(g2, a2, 0, 1.0);
  const double w4 = kernel_decay_l1(g2, a2, 0, 4.0);
  CHECK(w1 > 0.0);
  CHECK(w4 < w1);
}

TEST_CASE("parabolic_indices enumerates |alpha| + 2 beta == order") {
  const auto one = parabolic_indices(1, 2);
  REQUIRE(one.size() == 2);
  CHECK(one[0].alpha == std::vector<int>{2});
  CHECK(one[0].beta == 0);
  CHECK(one[1].alpha == std::vector<int>{0});
  CHECK(one[1].beta == 1);
  const auto two = parabolic_indices(2, 3);
  CHECK(two.size() == 6);
  for (const auto& idx : two) {
    int total = idx.beta * 2;
    for (int a : idx.alpha) {
      total += a;
      CHECK(a >= 0);
    }
    CHECK(total == 3);
    CHECK(idx.alpha.size() == 2);
  }
  CHECK(parabolic_indices(3, 2).size() == 7);
  const auto zero = parabolic_indices(2, 0);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].alpha == std::vector<int>{0, 0});
  CHECK(zero[0].beta == 0);
}

}  // TEST_SUITE
