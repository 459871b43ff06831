#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "spectralgauss/martingales.hpp"
#include "spectralgauss/processes.hpp"
#include "spectralgauss/specfun.hpp"

using namespace sg;

namespace {

SamplePath path_of(const std::vector<double>& g, double (*f)(double)) {
  SamplePath p;
  p.grid = g;
  for (double t : g) p.values.push_back(f(t));
  return p;
}

}  // namespace

TEST_SUITE("martingales") {
  TEST_CASE("constants") {
    CHECK(fwd_constant(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(inv_constant(0.5) == doctest::Approx(1.0).epsilon(1e-14));
    for (double H : {0.2, 0.7}) {
      CHECK(1.0 / fwd_constant(H) == doctest::Approx((1 - H) * beta_fn(0.5, 1.5 - H)).epsilon(1e-14));
      CHECK(inv_constant(H) == doctest::Approx(2.0 / beta_fn(1 - H, H + 0.5)).epsilon(1e-14));
    }
  }

  TEST_CASE("even transform of the identity path is alpha") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 65);
    for (double H : {0.2, 0.5, 0.8}) {
      const SamplePath m = fwd_even(H, path_of(g, [](double t) { return t; }));
      for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(m.values[i] == doctest::Approx(oracle::alpha(H, g[i])).epsilon(1e-8).scale(1e-12));
    }
  }

  TEST_CASE("at H = 1/2 both transforms and inverse kernels are the identity") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 33);
    const SamplePath x = path_of(g, [](double t) { return std::sin(5 * t) + t * t; });
    const SamplePath e = fwd_even(0.5, x), o = fwd_odd(0.5, x);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(e.values[i] == doctest::Approx(x.values[i]).epsilon(1e-11).scale(1e-12));
      CHECK(o.values[i] == doctest::Approx(x.values[i]).epsilon(1e-11).scale(1e-12));
    }
    for (double t : {0.1, 0.5, 0.9}) {
      CHECK(inv_odd_kernel(0.5, 1.0, t) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(inv_single_sided_kernel(0.5, 1.0, t) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("inverse recovers the endpoint of smooth paths") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 2049);
    const SamplePath x = path_of(g, [](double t) { return t * t + 0.5 * std::sin(3 * t); });
    for (double H : {0.3, 0.7}) {
      CHECK(inv_even(H, fwd_even(H, x)) == doctest::Approx(x.values.back()).epsilon(1e-3));
      CHECK(inv_odd(H, fwd_odd(H, x)) == doctest::Approx(x.values.back()).epsilon(1e-3));
    }
  }

  TEST_CASE("single-sided transform covers half the window") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 9);
    const SamplePath m = fwd_single_sided(0.3, path_of(g, [](double t) { return t; }));
    CHECK(m.values.size() == 5);
    CHECK(m.grid.back() == doctest::Approx(0.5));
    CHECK(inv_single_sided_weights(0.3, m.grid).size() == 5);
  }

  TEST_CASE("transforms are linear and outputs start at zero") {
    const std::vector<double> g = uniform_grid(0.0, 2.0, 129);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd X(129, 3);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = nd(rng);
    X.row(0).setZero();
    const LinearTransform T = fwd_odd_transform(0.35, g);
    const Eigen::MatrixXd Y = T.apply_many(X);
    const Eigen::MatrixXd Ysum = T.apply_many(X.col(0) + 2.0 * X.col(1));
    CHECK((Ysum - (Y.col(0) + 2.0 * Y.col(1))).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(Y.row(0).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("bridges are pinned and chain scaling multiplies by sqrt(kappa)") {
    const std::vector<double> g = uniform_grid(0.0, 1.0, 17);
    const SamplePath m = path_of(g, [](double t) { return std::cos(2 * t) - 1.0 + t; });
    for (Parity p : {Parity::Even, Parity::Odd}) {
      const SamplePath b = bridge(m, 0.3, p, 1.0);
      CHECK(std::fabs(b.values.front()) < 1e-15);
      CHECK(std::fabs(b.values.back()) < 1e-14);
    }
    const SamplePath c = standard_to_chain(0.4, m);
    CHECK(c.values[5] == doctest::Approx(std::sqrt(chain_scale(0.4)) * m.values[5]));
  }

  TEST_CASE("grids must be uniform and start at zero") {
    CHECK_THROWS_AS(check_uniform_grid({0.0, 0.1, 0.3}), DomainError);
    CHECK_THROWS_AS(check_uniform_grid({0.1, 0.2, 0.3}), DomainError);
    CHECK_NOTHROW(check_uniform_grid(uniform_grid(0.0, 1.0, 5)));
  }
}
