#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "spectralgauss/chain.hpp"
#include "spectralgauss/specfun.hpp"

using namespace sg;

TEST_SUITE("chain") {
  TEST_CASE("H = 1/2 reduces to the Brownian chain") {
    for (double t : {0.3, 1.0, 2.2})
      for (double z : {0.0, 0.9, 7.0}) {
        const ChainComponents c = fbm_components(0.5, t, z);
        CHECK(c.A == doctest::Approx(std::cos(t * z)).epsilon(1e-13).scale(1.0));
        CHECK(c.B == doctest::Approx(std::sin(t * z)).epsilon(1e-13).scale(1.0));
        CHECK(c.C == doctest::Approx(-std::sin(t * z)).epsilon(1e-13).scale(1.0));
        CHECK(c.D == doctest::Approx(std::cos(t * z)).epsilon(1e-13).scale(1.0));
      }
  }

  TEST_CASE("components start at the identity and keep unit determinant") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uH(0.02, 0.98), ut(0.0, 4.0), uz(-25.0, 25.0);
    for (int i = 0; i < 200; ++i) {
      const double H = uH(rng), t = ut(rng), z = uz(rng);
      const ChainComponents c = fbm_components(H, t, z);
      CHECK(std::fabs(c.A * c.D - c.B * c.C - 1.0) < 1e-9);
      const ChainComponents o = fbm_components(H, 0.0, z);
      CHECK(o.A == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(o.D == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(o.B == 0.0);
      CHECK(o.C == 0.0);
    }
  }

  TEST_CASE("A, D are even and B, C odd in z") {
    for (double H : {0.2, 0.8}) {
      const ChainComponents p = fbm_components(H, 1.3, 2.7), m = fbm_components(H, 1.3, -2.7);
      CHECK(p.A == doctest::Approx(m.A));
      CHECK(p.D == doctest::Approx(m.D));
      CHECK(p.B == doctest::Approx(-m.B));
      CHECK(p.C == doctest::Approx(-m.C));
    }
  }

  TEST_CASE("z-derivatives match central differences") {
    const double h = 1e-5;
    for (double H : {0.3, 0.7})
      for (double z : {0.5, 4.0}) {
        const ChainComponents d = fbm_components_dz(H, 1.0, z);
        const ChainComponents a = fbm_components(H, 1.0, z + h), b = fbm_components(H, 1.0, z - h);
        CHECK(std::fabs(d.A - (a.A - b.A) / (2 * h)) < 1e-8);
        CHECK(std::fabs(d.B - (a.B - b.B) / (2 * h)) < 1e-8);
        CHECK(std::fabs(d.C - (a.C - b.C) / (2 * h)) < 1e-8);
        CHECK(std::fabs(d.D - (a.D - b.D) / (2 * h)) < 1e-8);
      }
  }

  TEST_CASE("structure function satisfies alpha' gamma' = 1") {
    for (double H : {0.1, 0.45, 0.9}) {
      const StructureFn m = fbm_structure(H);
      for (double t : {0.05, 0.5, 3.0}) {
        CHECK(m.alpha_prime(t) * m.gamma_prime(t) == doctest::Approx(1.0).epsilon(1e-14));
        const double h = 1e-6 * t;
        CHECK(m.alpha_prime(t) == doctest::Approx((m.alpha(t + h) - m.alpha(t - h)) / (2 * h)).epsilon(1e-7));
        CHECK(m.gamma_prime(t) == doctest::Approx((m.gamma(t + h) - m.gamma(t - h)) / (2 * h)).epsilon(1e-7));
      }
    }
  }

  TEST_CASE("diagonal kernel forms agree") {
    for (double H : {0.25, 0.5, 0.75})
      for (double r : {0.5, 1.0, 2.0}) {
        for (double l : {0.3, 2.0, 9.5, 40.0})
          CHECK(kernel_diag(H, r, l) == doctest::Approx(kernel_diag_bessel(H, r, l)).epsilon(1e-10));
        for (double l : bessel_zeros(1.0 - H, r, 12).roots)
          CHECK(kernel_diag_at_zero(H, r, l) == doctest::Approx(kernel_diag(H, r, l)).epsilon(1e-10));
        for (double l : bessel_zeros(H - 1.0, r, 12).roots)
          CHECK(kernel_Q_diag_at_D_zero(H, r, l) == doctest::Approx(kernel_Q_diag(H, r, l)).epsilon(1e-10));
        for (double l : bessel_zeros(H, r, 12).roots)
          CHECK(kernel_Q_diag_at_C_zero(H, r, l) == doctest::Approx(kernel_Q_diag(H, r, l)).epsilon(1e-10));
      }
  }

  TEST_CASE("off-diagonal kernel is symmetric and continuous onto the diagonal") {
    const double H = 0.35, r = 1.0;
    CHECK(kernel_K(H, r, 1.2, 3.4) == doctest::Approx(kernel_K(H, r, 3.4, 1.2)).epsilon(1e-14));
    CHECK(kernel_K(H, r, 2.0, 2.0 + 1e-6) == doctest::Approx(kernel_diag(H, r, 2.0)).epsilon(1e-6));
    CHECK(kernel_diag(H, r, 5.0) > 0.0);
  }

  TEST_CASE("Hurst validation") {
    CHECK_THROWS_AS(check_hurst(0.0), DomainError);
    CHECK_THROWS_AS(check_hurst(1.0), DomainError);
    CHECK_THROWS_AS(check_hurst(std::nan("")), DomainError);
    CHECK_NOTHROW(check_hurst(0.5));
    CHECK_THROWS_AS(fbm_components(1.2, 1.0, 1.0), DomainError);
  }

  TEST_CASE("AR chain: normalization, modulus and phase derivative") {
    const ArSpec a{{1.0, 2.0}, 1.0};
    CHECK(std::abs(ar_theta_normalized(a, 0.0) - 1.0) < 1e-15);
    for (double z : {0.4, 1.7, 6.0}) {
      const ArComponents c = ar_components(a, 0.8, z);
      CHECK(c.A * c.A + c.B * c.B == doctest::Approx(std::norm(ar_theta_normalized(a, z))).epsilon(1e-13));
      // de Branges: pi K(x, x) = phi'(x) |E(x)|^2 with E = A - iB.
      const double h = 1e-5;
      auto phase = [&](double x) {
        const ArComponents q = ar_components(a, 1.0, x);
        return std::atan2(q.B, q.A);
      };
      const ArComponents q = ar_components(a, 1.0, z);
      CHECK(ar_pik_diag(a, 1.0, z) ==
            doctest::Approx((phase(z + h) - phase(z - h)) / (2 * h) * (q.A * q.A + q.B * q.B)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(check_ar(ArSpec{{-1.0}, 1.0}), DomainError);
    CHECK_THROWS_AS(check_ar(ArSpec{{}, 1.0}), DomainError);
    CHECK_THROWS_AS(check_ar(ArSpec{{1.0}, 0.0}), DomainError);
  }
}
