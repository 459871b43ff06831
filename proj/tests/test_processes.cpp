#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spectralgauss/processes.hpp"
#include "spectralgauss/specfun.hpp"

using namespace sg;

TEST_SUITE("processes") {
  TEST_CASE("FBM closed forms in both normalizations") {
    for (double H : {0.2, 0.5, 0.8}) {
      CHECK(chain_scale(H) == doctest::Approx(oracle::chain_kappa(H)).epsilon(1e-13));
      for (double s : {-0.7, 0.3})
        for (double t : {0.4, 1.0}) {
          CHECK(covariance(ProcessSpec::fbm(H), s, t) == doctest::Approx(oracle::fbm_cov(H, s, t, 1.0)).epsilon(1e-14));
          CHECK(covariance(ProcessSpec::fbm(H, FbmNorm::Chain), s, t) ==
                doctest::Approx(oracle::fbm_cov(H, s, t, oracle::chain_kappa(H))).epsilon(1e-13));
        }
    }
    CHECK(chain_scale(0.5) == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  }

  TEST_CASE("even and odd parts are uncorrelated and sum to FBM") {
    for (double H : {0.3, 0.7})
      for (double s : {0.2, 0.9})
        for (double t : {0.5, 1.3}) {
          const double e = covariance(ProcessSpec::fbm_even(H), s, t), o = covariance(ProcessSpec::fbm_odd(H), s, t);
          CHECK(e == doctest::Approx(oracle::fbm_even_cov(H, s, t, 1.0)).epsilon(1e-13));
          CHECK(o == doctest::Approx(oracle::fbm_odd_cov(H, s, t, 1.0)).epsilon(1e-13));
          CHECK(e + o == doctest::Approx(covariance(ProcessSpec::fbm(H), s, t)).epsilon(1e-13));
        }
  }

  TEST_CASE("stationary covariances by residues and by spectral quadrature") {
    const ProcessSpec ou = ProcessSpec::ou(1.5, 2.0);
    const ProcessSpec ar = ProcessSpec::autoregressive(ArSpec{{1.0, 2.0}, 1.0});
    for (double tau : {0.0, 0.4, 2.5}) {
      const double ref = 2.0 / 3.0 * std::exp(-1.5 * tau);
      CHECK(covariance(ou, 0.1, 0.1 + tau) == doctest::Approx(ref).epsilon(1e-14));
      CHECK(stationary_covariance_quadrature(ou, tau) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(ar_covariance(ar.ar, tau) == doctest::Approx(oracle::ar12_cov(1.0, tau)).epsilon(1e-13));
      CHECK(stationary_covariance_quadrature(ar, tau) == doctest::Approx(oracle::ar12_cov(1.0, tau)).epsilon(1e-9));
    }
    // Close roots fall back to quadrature.
    const ArSpec close{{1.0, 1.0 + 1e-9}, 1.0};
    CHECK(ar_covariance(close, 0.7) > 0.0);
    CHECK(spectral_density(ou, 0.0) == doctest::Approx(2.0 / (2.0 * std::numbers::pi * 2.25)).epsilon(1e-14));
    CHECK_THROWS_AS(stationary_covariance_quadrature(ProcessSpec::fbm(0.3), 1.0), DomainError);
  }

  TEST_CASE("martingale and bridge covariances") {
    const double H = 0.3, pi = std::numbers::pi;
    CHECK(covariance(ProcessSpec::even_martingale(H), 0.4, 0.9) == doctest::Approx(pi * oracle::alpha(H, 0.4)));
    CHECK(covariance(ProcessSpec::odd_martingale(H), 0.4, 0.9) == doctest::Approx(pi * oracle::gamma(H, 0.4)));
    CHECK(covariance(ProcessSpec::even_martingale(H, false), 0.4, 0.9) == doctest::Approx(oracle::alpha(H, 0.4)));
    CHECK(std::fabs(covariance(ProcessSpec::even_bridge(H, 1.0), 1.0, 0.5)) < 1e-14);
    CHECK(std::fabs(covariance(ProcessSpec::odd_bridge(H, 1.0), 0.5, 1.0)) < 1e-14);
    CHECK(std::fabs(covariance(ProcessSpec::brownian_bridge(2.0), 2.0, 2.0)) < 1e-14);
    CHECK(covariance(ProcessSpec::brownian_motion(), 0.3, 0.8) == doctest::Approx(0.3));
    for (double s : {0.1, 0.6})
      for (double t : {0.25, 0.9})
        CHECK(covariance(ProcessSpec::alpha_wiener_bridge(0.7, 1.0), s, t) ==
              doctest::Approx(oracle::inverse_even_bridge_cov(0.7, 1.0, s, t)).epsilon(1e-12));
  }

  TEST_CASE("covariance matrices are symmetric and PSD") {
    const std::vector<double> g{0.1, 0.3, 0.5, 0.7, 0.9};
    for (const ProcessSpec& p : {ProcessSpec::fbm(0.2), ProcessSpec::ou(1.0, 1.0), ProcessSpec::odd_bridge(0.6, 1.0),
                                 ProcessSpec::single_sided_martingale(0.4)}) {
      const CovarianceMatrix C = covariance_matrix(p, g);
      CHECK(C.psd);
      CHECK(C.min_eigenvalue > -1e-12);
      CHECK((C.values - C.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(validate(ProcessSpec::fbm(1.0)), DomainError);
    CHECK_THROWS_AS(validate(ProcessSpec::ou(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(validate(ProcessSpec::ou(1.0, -1.0)), DomainError);
    CHECK_THROWS_AS(validate(ProcessSpec::autoregressive(ArSpec{{1.0, -2.0}, 1.0})), DomainError);
    CHECK_THROWS_AS(covariance(ProcessSpec::fbm(-0.1), 0.1, 0.2), DomainError);
    CHECK(kind_name(ProcessKind::OU) == "ou");
  }
}
