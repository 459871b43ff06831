#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spectralgauss/series.hpp"

using namespace sg;

TEST_SUITE("series") {
  TEST_CASE("FBM sampling frequencies and variances") {
    for (double H : {0.3, 0.5, 0.8}) {
      const PWExpansion e = pw_fbm(H, 1.0, 40);
      REQUIRE(e.has_zero);
      CHECK(e.terms() == 41);
      CHECK(e.freq[0] == 0.0);
      for (std::size_t n = 0; n < e.terms(); ++n) CHECK(e.var[n] * kernel_diag(H, 1.0, e.freq[n]) == doctest::Approx(1.0));
      for (std::size_t n = 1; n < e.terms(); ++n) CHECK(std::fabs(bessel_j(1.0 - H, e.freq[n])) < 1e-10);
      CHECK(e.window_lo() == -1.0);
      CHECK(e.window_hi() == 1.0);
    }
    const PWExpansion b = pw_fbm(0.5, 2.0, 10);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(b.freq[n] == doctest::Approx(n * std::numbers::pi / 2.0).epsilon(1e-13));
  }

  TEST_CASE("series covariance converges to the chain covariance") {
    const PWExpansion e = pw_fbm(0.75, 1.0, 2000);
    for (double s : {-0.8, 0.2, 1.0})
      for (double t : {-0.5, 0.6}) {
        const double ref = oracle::fbm_cov(0.75, s, t, oracle::chain_kappa(0.75));
        CHECK(series_covariance(e, s, t) == doctest::Approx(ref).epsilon(1e-4));
      }
    const PWExpansion st = pw_fbm(0.75, 1.0, 2000, PWBasis::SinCos, FbmNorm::Standard);
    CHECK(series_covariance(st, 0.3, 0.8) == doctest::Approx(oracle::fbm_cov(0.75, 0.3, 0.8, 1.0)).epsilon(1e-4));
  }

  TEST_CASE("OU and AR expansions on [0, 2r]") {
    const PWExpansion ou = pw_stationary(ProcessSpec::ou(1.0, 2.0), 1.0, 400);
    CHECK(ou.window_lo() == 0.0);
    CHECK(ou.window_hi() == 2.0);
    CHECK(series_covariance(ou, 0.2, 0.7) == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
    // Convergence at the window edge is only first order.
    const double e100 = std::fabs(series_covariance(pw_stationary(ProcessSpec::ou(1.0, 2.0), 1.0, 100), 0.0, 2.0) - std::exp(-2.0));
    const double e400 = std::fabs(series_covariance(ou, 0.0, 2.0) - std::exp(-2.0));
    CHECK(e400 < 1e-3);
    CHECK(e100 / e400 == doctest::Approx(4.0).epsilon(0.1));
    const RootList r = ar_pw_roots(ArSpec{{1.5}, 1.0}, 1.0, 10);
    for (double l : r.roots) CHECK(std::fabs(1.5 * std::tan(l) + l) < 1e-9 * (1.0 + l));
    const PWExpansion ar = pw_stationary(ProcessSpec::autoregressive(ArSpec{{1.0, 2.0}, 1.0}), 1.0, 400);
    CHECK(series_covariance(ar, 0.3, 1.6) == doctest::Approx(oracle::ar12_cov(1.0, 1.3)).epsilon(1e-6));
  }

  TEST_CASE("martingale series covariances") {
    const double H = 0.3, pi = std::numbers::pi;
    const PWExpansion ev = pw_martingale(H, 1.0, 2000, MartingaleSeries::Even);
    CHECK(series_covariance(ev, 0.3, 0.8) == doctest::Approx(pi * oracle::alpha(H, 0.3)).epsilon(1e-6));
    const PWExpansion od = pw_martingale(0.7, 1.0, 2000, MartingaleSeries::Odd);
    CHECK(series_covariance(od, 0.3, 0.8) == doctest::Approx(pi * oracle::gamma(0.7, 0.3)).epsilon(1e-3));
    const PWExpansion br = pw_martingale(H, 1.0, 2000, MartingaleSeries::EvenBridge);
    const double ref = pi * (oracle::alpha(H, 0.3) - oracle::alpha(H, 0.3) * oracle::alpha(H, 0.8) / oracle::alpha(H, 1.0));
    CHECK(series_covariance(br, 0.3, 0.8) == doctest::Approx(ref).epsilon(1e-4));
  }

  TEST_CASE("streams are reproducible and independent") {
    auto a = make_stream(7, 3), b = make_stream(7, 3), c = make_stream(7, 4), d = make_stream(8, 3);
    const auto x = a(), y = b(), z = c(), w = d();
    CHECK(x == y);
    CHECK(x != z);
    CHECK(x != w);
  }

  TEST_CASE("paths are the basis matrix applied to the coefficients") {
    const PWExpansion e = pw_fbm(0.4, 1.0, 64);
    auto rng = make_stream(1, 0);
    const CoefficientDraw d = sample_coefficients(e, rng);
    REQUIRE(d.values.size() == e.draw_size());
    const std::vector<double> g = uniform_grid(-1.0, 1.0, 33);
    const SamplePath p = evaluate_path(e, d, g);
    const Eigen::VectorXd q = basis_matrix(e, g) * Eigen::Map<const Eigen::VectorXd>(d.values.data(), d.values.size());
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(p.values[i] == doctest::Approx(q(i)).epsilon(1e-12).scale(1.0));
    CHECK(p.values[16] == 0.0);
    CHECK_THROWS_AS(basis_row(e, 1.5), DomainError);
    CHECK_THROWS_AS(evaluate_path(e, CoefficientDraw{{1.0}}, g), ConfigError);
  }

  TEST_CASE("coefficient variances") {
    auto rng = make_stream(2, 0);
    const CoefficientDraw d = sample_coefficients(std::vector<double>{0.0, 4.0, 0.0}, rng);
    CHECK(d.values[0] == 0.0);
    CHECK(d.values[2] == 0.0);
    CHECK_THROWS_AS(sample_coefficients(std::vector<double>{-1.0}, rng), DomainError);
    // Empirical variance of many draws.
    double acc = 0.0;
    const int M = 20000;
    for (int i = 0; i < M; ++i) {
      const double v = sample_coefficients(std::vector<double>{4.0}, rng).values[0];
      acc += v * v;
    }
    CHECK(acc / M == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("complex increment paths") {
    const PWExpansion e = pw_fbm(0.6, 1.0, 32, PWBasis::Increment);
    auto r1 = make_stream(3, 0), r2 = make_stream(3, 0);
    const std::vector<double> c1 = complex_draw(e, r1), c2 = complex_draw(e, r2);
    CHECK(c1 == c2);
    const std::vector<double> g = uniform_grid(-1.0, 1.0, 9);
    const SamplePath p = evaluate_complex_path(e, c1, g);
    CHECK(p.values.size() == 9);
    CHECK(p.imag.size() == 9);
    CHECK(p.values[4] == 0.0);
    CHECK(p.imag[4] == 0.0);
  }

  TEST_CASE("uniform grids") {
    const auto g = uniform_grid(0.0, 1.0, 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    const auto h = uniform_grid(0.0, 1.0, 4, false);
    CHECK(h.front() == 0.25);
    CHECK(h.size() == 4);
  }
}
