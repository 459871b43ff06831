#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "spectralgauss/verify.hpp"

using namespace sg;

TEST_SUITE("verify") {
  TEST_CASE("Nystrom reproduces the Brownian spectrum with normalized vectors") {
    const EigReport r = nystrom_eig([](double s, double t) { return std::min(s, t); }, 1.0, 1000, 4, "bm");
    const double pi = std::numbers::pi;
    CHECK(r.eigenvalues[0] == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-6));
    CHECK(r.eigenvalues[3] == doctest::Approx(1.0 / (3.5 * 3.5 * pi * pi)).epsilon(1e-5));
    double norm = 0.0;
    for (double v : r.eigenvectors[0]) norm += v * v / 1000.0;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.eigenvectors[0][500] == doctest::Approx(std::sqrt(2.0) * std::sin(0.5 * pi * r.grid[500])).epsilon(1e-4));
  }

  TEST_CASE("midpoint Nystrom converges at second order") {
    // Successive differences shrink by ~4 when n doubles.
    for (auto k : {std::function<double(double, double)>([](double s, double t) { return std::min(s, t); }),
                   std::function<double(double, double)>([](double s, double t) { return std::exp(-std::fabs(s - t)); })}) {
      double l[3];
      const std::size_t ns[3] = {200, 400, 800};
      for (int i = 0; i < 3; ++i) l[i] = nystrom_eig(k, 1.0, ns[i], 3, "", false).eigenvalues[2];
      CHECK((l[0] - l[1]) / (l[1] - l[2]) == doctest::Approx(4.0).epsilon(0.1));
    }
  }

  TEST_CASE("Nystrom rejects asymmetric kernels and tiny grids") {
    CHECK_THROWS(nystrom_eig([](double s, double t) { return s + 2 * t; }, 1.0, 64, 2));
    CHECK_THROWS_AS(nystrom_eig([](double s, double t) { return std::min(s, t); }, 1.0, 8, 2), DomainError);
  }

  TEST_CASE("Cholesky sampling reproduces a covariance within MC bands") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 9, false);
    const CovarianceMatrix C = covariance_matrix(ProcessSpec::fbm(0.3), g);
    const CholeskySampler S(C);
    auto rng = make_stream(21, 0);
    const MCCovariance mc = mc_covariance(S.sample_many(rng, 20000));
    CHECK(mc.paths == 20000);
    const BandCheck b = band_check(mc, C.values, 4.0);
    CHECK(b.entries == 45);  // lower triangle
    CHECK(b.pass_fraction == 1.0);
    // A singular matrix needs jitter.
    const CholeskySampler Z(covariance_matrix(ProcessSpec::brownian_motion(), {0.0, 0.5, 1.0}));
    CHECK(Z.jitter() > 0.0);
  }

  TEST_CASE("deterministic paths have zero standard error and must match exactly") {
    const std::vector<double> g{0.5, 1.0};
    const MCCovariance mc = mc_covariance([&] { return SamplePath{g, {1.0, 2.0}, {}}; }, 100);
    CHECK(mc.stderr_.cwiseAbs().maxCoeff() == 0.0);
    Eigen::MatrixXd T(2, 2);
    T << 1, 2, 2, 4;
    CHECK(band_check(mc, T).pass_fraction == 1.0);
    T(1, 1) = 4.0 + 1e-9;
    CHECK(band_check(mc, T).pass_fraction == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS(mc_covariance([&] { return SamplePath{g, {1.0, 2.0}, {}}; }, 10));
  }

  TEST_CASE("log-log fit of an exact power law") {
    std::vector<double> x, y;
    for (double n : {8.0, 16.0, 32.0, 64.0}) {
      x.push_back(n);
      y.push_back(3.0 * std::pow(n, -1.5));
    }
    const SlopeFit f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.ci_lo <= f.slope);
    CHECK(f.ci_hi >= f.slope);
  }

  TEST_CASE("truncation tails decay at rate N^{-2H}") {
    const std::vector<double> g = uniform_grid(-1.0, 1.0, 65);
    const RateReport r = truncation_rate(0.5, 1.0, {32, 64, 128, 256, 512}, g, 4096, 8, 3);
    for (std::size_t i = 1; i < r.sup_ms.size(); ++i) CHECK(r.sup_ms[i] < r.sup_ms[i - 1]);
    CHECK(r.fit.slope == doctest::Approx(-1.0).epsilon(0.1));
    CHECK(r.sup_abs.size() == 5);
    CHECK_THROWS(truncation_rate(0.5, 1.0, {32, 64, 128, 256, 512}, g, 1024, 0));
    CHECK_THROWS_AS(truncation_rate(0.5, 1.0, {32, 64}, g, 4096, 0), ConfigError);
  }

  TEST_CASE("Mercer error decreases with the number of terms") {
    const KLBasis b = kl_basis(KLKernelSpec::bm(), 1.0, 200);
    const std::vector<double> g = uniform_grid(0.0, 1.0, 21);
    auto k = [](double s, double t) { return std::min(s, t); };
    const double e10 = mercer_check(b, k, g, 10), e200 = mercer_check(b, k, g, 200);
    CHECK(e200 < e10);
    CHECK(e200 < 2.0 / (std::numbers::pi * std::numbers::pi * 199.5));
  }

  TEST_CASE("spectral covariance quadrature matches the closed form") {
    for (double H : {0.1, 0.25, 0.5, 0.75, 0.9})
      for (double s : {-0.6, 0.3, 1.0})
        for (double t : {0.2, 0.8}) {
          CHECK(fbm_spectral_covariance(H, s, t) ==
                doctest::Approx(oracle::fbm_cov(H, s, t, oracle::chain_kappa(H))).epsilon(1e-10));
          CHECK(fbm_spectral_covariance(H, s, t, FbmNorm::Standard) ==
                doctest::Approx(oracle::fbm_cov(H, s, t, 1.0)).epsilon(1e-10));
        }
  }
}
