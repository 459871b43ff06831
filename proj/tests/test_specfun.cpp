#include <cmath>
#include <numbers>

#include "doctest.h"
#include "spectralgauss/quadrature.hpp"
#include "spectralgauss/specfun.hpp"

using namespace sg;

TEST_SUITE("specfun") {
  TEST_CASE("bessel_j agrees with the standard library for nonnegative order") {
    for (double nu : {0.0, 0.3, 0.5, 1.7, 2.5})
      for (double x : {0.001, 0.4, 3.0, 11.9, 12.1, 16.9, 17.1, 30.0, 80.0}) {
        CAPTURE(nu);
        CAPTURE(x);
        CHECK(bessel_j(nu, x) == doctest::Approx(std::cyl_bessel_j(nu, x)).epsilon(1e-11).scale(1.0));
      }
  }

  TEST_CASE("half-integer orders have elementary forms") {
    for (double x : {0.2, 1.0, 7.5, 25.0}) {
      const double c = std::sqrt(2.0 / (std::numbers::pi * x));
      CHECK(std::fabs(bessel_j(-0.5, x) - c * std::cos(x)) < 1e-13);
      CHECK(std::fabs(bessel_j(0.5, x) - c * std::sin(x)) < 1e-13);
    }
  }

  TEST_CASE("bessel_jt is even and equals 1/Gamma(nu+1) at the origin") {
    for (double nu : {-1.7, -0.4, 0.0, 0.6, 2.3}) {
      CHECK(bessel_jt(nu, 0.0) == doctest::Approx(1.0 / std::tgamma(nu + 1.0)).epsilon(1e-14));
      for (double x : {0.3, 4.0, 19.0}) CHECK(bessel_jt(nu, -x) == bessel_jt(nu, x));
    }
    CHECK_THROWS_AS(bessel_jt(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_jt(-2.0, 1.0), DomainError);
  }

  TEST_CASE("bessel_j_prime matches the recurrence and a central difference") {
    for (double x : {0.5, 3.0, 20.0}) CHECK(std::fabs(bessel_j_prime(0.0, x) + bessel_j(1.0, x)) < 1e-13);
    const double h = 1e-5;
    for (double nu : {-0.3, 0.7, 1.4})
      for (double x : {0.8, 5.0, 14.0}) {
        const double fd = (bessel_j(nu, x + h) - bessel_j(nu, x - h)) / (2 * h);
        CHECK(std::fabs(bessel_j_prime(nu, x) - fd) < 1e-8);
      }
  }

  TEST_CASE("domain violations raise") {
    CHECK_THROWS_AS(bessel_j(-1.5, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_j(0.5, -1.0), DomainError);
    CHECK_THROWS_AS(bessel_zeros(-1.2, 1.0, 3), DomainError);
  }

  TEST_CASE("gamma_fn and beta_fn") {
    for (double x : {0.1, 0.5, 1.0, 2.7, 6.0}) CHECK(gamma_fn(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-14));
    CHECK(beta_fn(0.5, 0.5) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    CHECK(beta_fn(1.3, 2.2) == doctest::Approx(beta_fn(2.2, 1.3)).epsilon(1e-15));
  }

  TEST_CASE("Brent refinement and root scanning") {
    const double r = refine_root([](double x) { return std::cos(x); }, 1.0, 2.0);
    CHECK(std::fabs(r - std::numbers::pi / 2) < 1e-14);
    const RootList s = find_roots([](double x) { return std::sin(x); }, 0.5, 20.0, 0.1, 5);
    REQUIRE(s.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) CHECK(std::fabs(s.roots[k] - (k + 1) * std::numbers::pi) < 1e-12);
    CHECK_THROWS(refine_root([](double x) { return x * x + 1.0; }, -1.0, 1.0));
  }

  TEST_CASE("zeros of J_nu and J_{nu+1} interlace; zeros scale with r") {
    for (double nu : {-0.6, 0.25, 0.75}) {
      const RootList a = bessel_zeros(nu, 1.0, 30), b = bessel_zeros(nu + 1.0, 1.0, 30);
      REQUIRE(a.size() == 30);
      REQUIRE(b.size() == 30);
      for (std::size_t k = 0; k < 30; ++k) {
        CHECK(a.roots[k] < b.roots[k]);
        if (k + 1 < 30) CHECK(b.roots[k] < a.roots[k + 1]);
        CHECK(std::fabs(a.residuals[k]) < 1e-10);
      }
      const RootList c = bessel_zeros(nu, 2.5, 30);
      for (std::size_t k = 0; k < 30; ++k) CHECK(c.roots[k] * 2.5 == doctest::Approx(a.roots[k]).epsilon(1e-13));
    }
  }
}

TEST_SUITE("specfun") {
  TEST_CASE("Gauss-Legendre rules are exact for polynomials of degree 2n-1") {
    for (std::size_t n : {1, 4, 16, 40}) {
      const QuadRule& g = gauss_legendre(n);
      double wsum = 0.0, top = 0.0, odd = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        wsum += g.w[i];
        top += g.w[i] * std::pow(g.x[i], 2.0 * (n - 1));
        odd += g.w[i] * std::pow(g.x[i], 2.0 * n - 1);
      }
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
      CHECK(top == doctest::Approx(2.0 / (2.0 * n - 1)).epsilon(1e-12));
      CHECK(std::fabs(odd) < 1e-14);
    }
  }

  TEST_CASE("graded composite rule handles endpoint singularities") {
    // The innermost panel [0, 2^-levels / panels] limits the accuracy.
    auto inv_sqrt = [](double x) { return 1.0 / std::sqrt(x); };
    const double e20 = std::fabs(integrate(inv_sqrt, composite_graded(0.0, 1.0, 8, 20, 16)) - 2.0);
    const double e40 = std::fabs(integrate(inv_sqrt, composite_graded(0.0, 1.0, 8, 40, 16)) - 2.0);
    CHECK(e40 < 1e-6);
    CHECK(e40 < 1e-2 * e20);
    CHECK(integrate([](double x) { return std::sqrt(x); }, composite_graded(0.0, 1.0, 8, 40, 16)) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(integrate_uniform([](double x) { return std::exp(x); }, 0.0, 1.0, 4) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  }
}
