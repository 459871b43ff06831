#include "spectralgauss/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace sg {

namespace {

// Below this argument the ascending series (in extended precision) is used,
// above it the Hankel expansion. At 17 the series loses < 1e-13 to
// cancellation and the smallest Hankel term is ~e^{-34}.
constexpr double kSeriesLimit = 17.0;

bool is_nonpos_integer(double a) { return a <= 0.0 && a == std::floor(a); }

long double rgamma_l(long double a) {
  if (a <= 0.0L && a == std::floor(a)) return 0.0L;
  return 1.0L / std::tgamma(a);
}

// sum_k (-x^2/4)^k / (k! Gamma(k+nu+1))
double jt_series(double nu, double x) {
  const long double q = -0.25L * static_cast<long double>(x) * x;
  long double sum = 0.0L;
  long double term;
  long double base = rgamma_l(static_cast<long double>(nu) + 1.0L);
  int k0 = 0;
  if (base == 0.0L) {
    // nu+1 is a non-positive integer: series starts where Gamma is finite.
    k0 = static_cast<int>(-(nu + 1.0)) + 1;
    long double kf = 1.0L;
    for (int k = 1; k <= k0; ++k) kf *= k;
    base = std::pow(q, static_cast<long double>(k0)) / kf *
           rgamma_l(static_cast<long double>(k0) + nu + 1.0L);
  }
  term = base;
  sum = term;
  const double kmin = 0.5 * std::fabs(x) + 2.0;
  for (int k = k0 + 1; k < 400; ++k) {
    term *= q / (static_cast<long double>(k) * (static_cast<long double>(k) + nu));
    sum += term;
    if (k > kmin && std::fabs(term) <= 1e-21L * std::fabs(sum)) break;
  }
  return static_cast<double>(sum);
}

// Hankel large-argument expansion of J_nu(x), x > 0.
double j_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0, t = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    t *= (mu - odd * odd) / (k * 8.0 * x);
    const double at = std::fabs(t);
    if (at > prev) break;
    prev = at;
    switch (k % 4) {
      case 1: q += t; break;
      case 2: p -= t; break;
      case 3: q -= t; break;
      default: p += t; break;
    }
    if (at < 1e-17) break;
  }
  const double phase = (0.5 * nu + 0.25) * std::numbers::pi;
  const double cx = std::cos(x), sx = std::sin(x);
  const double cp = std::cos(phase), sp = std::sin(phase);
  const double cchi = cx * cp + sx * sp;
  const double schi = sx * cp - cx * sp;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cchi - q * schi);
}

double j_positive(double nu, double x) {
  const double lim = std::max(kSeriesLimit, 2.0 * std::fabs(nu));
  if (x <= lim) return std::pow(0.5 * x, nu) * jt_series(nu, x);
  return j_hankel(nu, x);
}

}  // namespace

double bessel_j_any(double nu, double x) {
  if (!std::isfinite(x) || !std::isfinite(nu)) throw DomainError("bessel_j: non-finite argument");
  if (x < 0.0) throw DomainError("bessel_j: negative argument");
  if (nu < 0.0 && nu == std::floor(nu)) {
    const double v = bessel_j_any(-nu, x);
    return (static_cast<long long>(-nu) % 2 == 0) ? v : -v;
  }
  if (x == 0.0) {
    if (nu == 0.0) return 1.0;
    if (nu > 0.0) return 0.0;
    return std::numeric_limits<double>::infinity();
  }
  return j_positive(nu, x);
}

double bessel_j(double nu, double x) {
  if (!(nu > -1.0)) throw DomainError("bessel_j: order must exceed -1");
  return bessel_j_any(nu, x);
}

double bessel_jt(double nu, double x) {
  if (!std::isfinite(x) || !std::isfinite(nu)) throw DomainError("bessel_jt: non-finite argument");
  if (nu < 0.0 && nu == std::floor(nu)) throw DomainError("bessel_jt: negative integer order");
  const double ax = std::fabs(x);
  const double lim = std::max(kSeriesLimit, 2.0 * std::fabs(nu));
  if (ax <= lim) return jt_series(nu, ax);
  return j_hankel(nu, ax) / std::pow(0.5 * ax, nu);
}

double bessel_j_prime(double nu, double x) {
  if (!(nu > -1.0)) throw DomainError("bessel_j_prime: order must exceed -1");
  if (!std::isfinite(x) || x < 0.0) throw DomainError("bessel_j_prime: bad argument");
  if (x == 0.0) {
    if (nu < 1.0) throw DomainError("bessel_j_prime: singular at x = 0 for order < 1");
    return nu == 1.0 ? 0.5 : 0.0;
  }
  return bessel_j_any(nu - 1.0, x) - (nu / x) * bessel_j_any(nu, x);
}

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw DomainError("gamma_fn: non-finite argument");
  if (is_nonpos_integer(x)) throw DomainError("gamma_fn: pole at non-positive integer");
  return std::tgamma(x);
}

double beta_fn(double x, double y) {
  if (is_nonpos_integer(x) || is_nonpos_integer(y))
    throw DomainError("beta_fn: pole at non-positive integer");
  if (is_nonpos_integer(x + y)) return 0.0;
  if (x < 100.0 && y < 100.0 && x + y < 170.0)
    return std::tgamma(x) * std::tgamma(y) / std::tgamma(x + y);
  int s1 = 1, s2 = 1, s3 = 1;
  const double l = lgamma_r(x, &s1) + lgamma_r(y, &s2) - lgamma_r(x + y, &s3);
  return s1 * s2 * s3 * std::exp(l);
}

}  // namespace sg
