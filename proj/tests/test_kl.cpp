#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spectralgauss/kl.hpp"
#include "spectralgauss/quadrature.hpp"

using namespace sg;

namespace {

// max_n |int k(s, t) phi_n(t) dt - eps_n phi_n(s)| / eps_n over a few s.
double eigen_residual(const KLBasis& b, std::size_t count) {
  double worst = 0.0;
  for (std::size_t n = 0; n < count; ++n)
    for (double s : {0.13, 0.5, 0.91}) {
      auto f = [&](double t) { return b.kernel(s, t) * b.phi(n, t); };
      const double lhs = integrate(f, composite_graded(0.0, s, 8, 40, 16)) + integrate_uniform(f, s, b.r, 16, 16);
      worst = std::max(worst, std::fabs(lhs - b.eigenvalues[n] * b.phi(n, s)) / b.eigenvalues[n]);
    }
  return worst;
}

}  // namespace

TEST_SUITE("kl") {
  TEST_CASE("Brownian motion and bridge have classical spectra") {
    const double pi = std::numbers::pi;
    const KLBasis bm = kl_basis(KLKernelSpec::bm(), 1.0, 20);
    const KLBasis br = kl_basis(KLKernelSpec::bm_bridge(), 1.0, 20);
    for (std::size_t n = 0; n < 20; ++n) {
      const double w = (n + 0.5) * pi;
      CHECK(bm.eigenvalues[n] == doctest::Approx(1.0 / (w * w)).epsilon(1e-14));
      CHECK(bm.phi(n, 0.3) == doctest::Approx(std::sqrt(2.0) * std::sin(w * 0.3)).epsilon(1e-13));
      CHECK(br.eigenvalues[n] == doctest::Approx(1.0 / ((n + 1) * (n + 1) * pi * pi)).epsilon(1e-14));
    }
  }

  TEST_CASE("eigenpairs solve the integral equation") {
    const auto gamma = [](double H) { return [H](double u) { return oracle::gamma(H, u); }; };
    const KLKernelSpec specs[] = {KLKernelSpec::ou(2.0, 1.0),
                                  KLKernelSpec::autoregressive(ArSpec{{1.0, 2.0}, 1.0}),
                                  KLKernelSpec::autoregressive(ArSpec{{0.5, 1.5, 3.0}, 2.0}),
                                  KLKernelSpec::fbm_even_martingale(0.3),
                                  KLKernelSpec::fbm_odd_martingale(0.7),
                                  KLKernelSpec::fbm_even_bridge(0.6),
                                  KLKernelSpec::fbm_odd_bridge(0.2),
                                  KLKernelSpec::extended_bridge(0.4, gamma(0.4), Parity::Even, KappaForm::Gamma)};
    for (const KLKernelSpec& s : specs) {
      CAPTURE(kernel_name(s.kind));
      const KLBasis b = kl_basis(s, 1.0, 6);
      CHECK(eigen_residual(b, 6) < 1e-7);
      for (std::size_t n = 1; n < b.size(); ++n) CHECK(b.eigenvalues[n] < b.eigenvalues[n - 1]);
    }
  }

  TEST_CASE("OU frequencies solve the tangent equation") {
    const KLBasis b = kl_basis(KLKernelSpec::ou(1.3, 2.0), 1.0, 8);
    for (std::size_t n = 0; n < 8; ++n) {
      const double w = b.freq[n];
      CHECK(b.eigenvalues[n] == doctest::Approx(2.0 / (w * w + 1.69)).epsilon(1e-12));
      // (w^2 - theta^2) sin(w) = 2 theta w cos(w) on [0, 1].
      CHECK(std::fabs((w * w - 1.69) * std::sin(w) - 2.6 * w * std::cos(w)) < 1e-9 * (1 + w * w));
    }
  }

  TEST_CASE("AR(2) frequencies differ from the B^1 zeros") {
    const ArSpec a{{1.0, 2.0}, 1.0};
    const RootList kl = ar_kl_roots(a, 1.0, 5), b1 = ar_b1_roots(a, 1.0, 5);
    REQUIRE(kl.size() == 5);
    REQUIRE(b1.size() == 5);
    for (double w : kl.roots) CHECK(std::fabs(ar_kl_det(a, 1.0, w)) < 1e-8);
    double gap = 0.0;
    for (std::size_t n = 0; n < 5; ++n) gap = std::max(gap, std::fabs(kl.roots[n] - b1.roots[n]));
    CHECK(gap > 1e-3);
  }

  TEST_CASE("Mercer sums converge to the kernel") {
    const KLBasis b = kl_basis(KLKernelSpec::fbm_odd_martingale(0.6), 1.0, 400);
    double prev = 1e300;
    for (std::size_t N : {25, 100, 400}) {
      double err = 0.0;
      for (double s : {0.2, 0.55, 0.9})
        for (double t : {0.3, 0.7}) err = std::max(err, std::fabs(b.mercer(s, t, N) - b.kernel(s, t)));
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 2e-3);
  }

  TEST_CASE("Gram matrices are the identity") {
    const KLBasis b = kl_basis(KLKernelSpec::fbm_even_bridge(0.7), 1.0, 10);
    // The deviation is quadrature error: it falls with finer panels.
    double coarse = 0.0, fine = 0.0;
    const auto G = b.gram(10), F = b.gram(10, 256, 16);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) {
        coarse = std::max(coarse, std::fabs(G[i][j] - (i == j ? 1.0 : 0.0)));
        fine = std::max(fine, std::fabs(F[i][j] - (i == j ? 1.0 : 0.0)));
      }
    CHECK(coarse < 1e-8);
    CHECK(fine < 1e-10);
  }

  TEST_CASE("extended bridges: closed-form and quadrature G agree; frequencies zero the determinant") {
    const double H = 0.35;
    const auto kappa = [H](double u) { return oracle::alpha(H, u); };
    const KLBasis closed = extended_bridge_basis(H, 1.0, kappa, 6, Parity::Odd, KappaForm::Alpha);
    const KLBasis generic = extended_bridge_basis(H, 1.0, kappa, 6, Parity::Odd, KappaForm::Alpha, true);
    for (std::size_t n = 0; n < 6; ++n) {
      CHECK(closed.eigenvalues[n] == doctest::Approx(generic.eigenvalues[n]).epsilon(1e-8));
      const BridgeInner q = extended_bridge_inner(H, 1.0, kappa, closed.freq[n], Parity::Odd, KappaForm::Alpha);
      const double scale = std::fabs(extended_bridge_det(
          extended_bridge_inner(H, 1.0, kappa, 0.5 * (closed.freq[n] + (n ? closed.freq[n - 1] : 0.0)), Parity::Odd,
                                KappaForm::Alpha),
          0.5 * (closed.freq[n] + (n ? closed.freq[n - 1] : 0.0))));
      CHECK(std::fabs(extended_bridge_det(q, closed.freq[n])) < 1e-8 * std::max(1.0, scale));
    }
    CHECK(eigen_residual(closed, 4) < 1e-7);
  }

  TEST_CASE("invalid requests") {
    CHECK_THROWS_AS(kl_basis(KLKernelSpec::bm(), 1.0, 0), DomainError);
    CHECK_THROWS_AS(kl_basis(KLKernelSpec::fbm_even_martingale(1.5), 1.0, 3), DomainError);
    CHECK_THROWS_AS(kl_basis(KLKernelSpec::ou(-1.0, 1.0), 1.0, 3), DomainError);
  }
}
