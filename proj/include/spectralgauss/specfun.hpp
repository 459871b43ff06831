#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sg {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bessel function of the first kind J_nu(x), nu > -1, x >= 0.
double bessel_j(double nu, double x);

// J'_nu(x). Throws at x = 0 unless nu >= 1.
double bessel_j_prime(double nu, double x);

// (x/2)^{-nu} J_nu(x). Entire and even in x; defined for any real nu
// that is not a negative integer <= -1 (used for nu in (-2, 3)).
double bessel_jt(double nu, double x);

// Unrestricted-order evaluation used internally for recurrences.
double bessel_j_any(double nu, double x);

double gamma_fn(double x);
double beta_fn(double x, double y);

struct RootOptions {
  double ftol = 1e-12;   // |f(root)| <= ftol * scale
  double xtol = 1e-14;   // bracket width <= xtol * |root|
  int max_iter = 200;
};

struct RootList {
  std::vector<double> roots;
  std::vector<double> residuals;
  std::size_t size() const { return roots.size(); }
};

// Brent refinement of a sign-changing bracket [a, b].
double refine_root(const std::function<double(double)>& f, double a, double b,
                   const RootOptions& opt = {});

// Scan [lo, hi] with the given step, refine each sign change, return at most
// `count` roots in ascending order.
RootList find_roots(const std::function<double(double)>& f, double lo, double hi,
                    double scan_step, std::size_t count, const RootOptions& opt = {});

// First `count` positive zeros of J_nu(r * lambda).
RootList bessel_zeros(double nu, double r, std::size_t count, const RootOptions& opt = {});

}  // namespace sg
