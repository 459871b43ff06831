#include "spectralgauss/chain.hpp"

#include <cmath>
#include <numbers>

#include "spectralgauss/specfun.hpp"

namespace sg {

void check_hurst(double H) {
  if (!(H > 0.0 && H < 1.0)) throw DomainError("Hurst index must lie in (0, 1)");
}

double StructureFn::alpha(double t) const { return std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H); }
double StructureFn::gamma(double t) const { return std::pow(t, 2.0 * H) / (2.0 * H); }
double StructureFn::alpha_prime(double t) const { return std::pow(t, 1.0 - 2.0 * H); }
double StructureFn::gamma_prime(double t) const { return std::pow(t, 2.0 * H - 1.0); }

StructureFn fbm_structure(double H) {
  check_hurst(H);
  return StructureFn{H};
}

// Written through jt(nu, x) = (x/2)^{-nu} J_nu(x), entire in x:
//   A = G(1-H) jt(-H, x)            B = G(1-H) t^{2-2H} (z/2) jt(1-H, x)
//   D = G(H) jt(H-1, x)             C = -G(H) t^{2H} (z/2) jt(H, x)
ChainComponents fbm_components(double H, double t, double z) {
  check_hurst(H);
  if (t < 0.0) throw DomainError("fbm_components: t must be non-negative");
  const double x = t * z;
  const double g1 = std::tgamma(1.0 - H), g0 = std::tgamma(H);
  ChainComponents c;
  c.A = g1 * bessel_jt(-H, x);
  c.B = g1 * std::pow(t, 2.0 - 2.0 * H) * 0.5 * z * bessel_jt(1.0 - H, x);
  c.D = g0 * bessel_jt(H - 1.0, x);
  c.C = -g0 * std::pow(t, 2.0 * H) * 0.5 * z * bessel_jt(H, x);
  return c;
}

ChainComponents fbm_components_dz(double H, double t, double z) {
  check_hurst(H);
  const double x = t * z;
  const double g1 = std::tgamma(1.0 - H), g0 = std::tgamma(H);
  const double b = g1 * std::pow(t, 2.0 - 2.0 * H) * 0.5 * z * bessel_jt(1.0 - H, x);
  const double c = -g0 * std::pow(t, 2.0 * H) * 0.5 * z * bessel_jt(H, x);
  ChainComponents d;
  d.A = -std::pow(t, 2.0 * H) * b;
  d.D = std::pow(t, 2.0 - 2.0 * H) * c;
  d.B = 0.5 * g1 * std::pow(t, 2.0 - 2.0 * H) * (bessel_jt(1.0 - H, x) - z * t * 0.5 * x * bessel_jt(2.0 - H, x));
  d.C = -0.5 * g0 * std::pow(t, 2.0 * H) * (bessel_jt(H, x) - z * t * 0.5 * x * bessel_jt(H + 1.0, x));
  return d;
}

double kernel_diag(double H, double r, double lambda) {
  if (!(r > 0.0)) throw DomainError("kernel_diag: r must be positive");
  const ChainComponents c = fbm_components(H, r, lambda);
  const ChainComponents d = fbm_components_dz(H, r, lambda);
  return (c.A * d.B - d.A * c.B) / std::numbers::pi;
}

double kernel_K(double H, double r, double w, double z) {
  if (!(r > 0.0)) throw DomainError("kernel_K: r must be positive");
  if (std::fabs(z - w) < 1e-6 * (1.0 + std::fabs(z))) return kernel_diag(H, r, 0.5 * (z + w));
  const ChainComponents cz = fbm_components(H, r, z);
  const ChainComponents cw = fbm_components(H, r, w);
  return (cz.B * cw.A - cz.A * cw.B) / (std::numbers::pi * (z - w));
}

double kernel_diag_at_zero(double H, double r, double lambda) {
  check_hurst(H);
  const double x = r * lambda;
  const double alpha_r = std::pow(r, 2.0 - 2.0 * H) / (2.0 - 2.0 * H);
  const double g = std::tgamma(1.0 - H);
  const double j = bessel_j(-H, std::fabs(x));
  return alpha_r / std::numbers::pi * (2.0 - 2.0 * H) * g * g * std::pow(0.5 * std::fabs(x), 2.0 * H) * j * j;
}

double kernel_diag_bessel(double H, double r, double lambda) {
  check_hurst(H);
  if (lambda == 0.0) return std::pow(r, 2.0 - 2.0 * H) / (2.0 - 2.0 * H) / std::numbers::pi;
  const double x = std::fabs(r * lambda);
  const double alpha_r = std::pow(r, 2.0 - 2.0 * H) / (2.0 - 2.0 * H);
  const double g = std::tgamma(1.0 - H);
  const double jm = bessel_j(-H, x), jp = bessel_j(1.0 - H, x);
  return alpha_r / std::numbers::pi * (2.0 - 2.0 * H) * g * g * std::pow(0.5 * x, 2.0 * H) *
         (jp * jp - (1.0 - 2.0 * H) / x * jm * jp + jm * jm);
}

double kernel_Q_diag(double H, double r, double lambda) {
  if (!(r > 0.0)) throw DomainError("kernel_Q_diag: r must be positive");
  const ChainComponents c = fbm_components(H, r, lambda);
  const ChainComponents d = fbm_components_dz(H, r, lambda);
  return (d.D * c.C - c.D * d.C) / std::numbers::pi;
}

double kernel_Q_diag_at_D_zero(double H, double r, double lambda) {
  check_hurst(H);
  const double x = std::fabs(r * lambda);
  const double gamma_r = std::pow(r, 2.0 * H) / (2.0 * H);
  const double g = std::tgamma(H);
  const double j = bessel_j(H, x);
  return gamma_r / std::numbers::pi * 2.0 * H * g * g * std::pow(0.5 * x, 2.0 - 2.0 * H) * j * j;
}

double kernel_Q_diag_at_C_zero(double H, double r, double lambda) {
  check_hurst(H);
  const double x = std::fabs(r * lambda);
  const double gamma_r = std::pow(r, 2.0 * H) / (2.0 * H);
  const double g = std::tgamma(H);
  const double j = bessel_j(H - 1.0, x);
  return gamma_r / std::numbers::pi * 2.0 * H * g * g * std::pow(0.5 * x, 2.0 - 2.0 * H) * j * j;
}

void check_ar(const ArSpec& s) {
  if (s.phi.empty()) throw DomainError("AR spec needs at least one root");
  for (double p : s.phi)
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("AR roots must be positive");
  if (!(s.sigma2 > 0.0)) throw DomainError("AR sigma2 must be positive");
}

std::complex<double> ar_theta(const ArSpec& s, double z) {
  std::complex<double> v(1.0, 0.0);
  for (double p : s.phi) v *= std::complex<double>(-p, z);
  return v;
}

std::complex<double> ar_theta_normalized(const ArSpec& s, double z) {
  std::complex<double> v(1.0, 0.0);
  for (double p : s.phi) v *= std::complex<double>(1.0, -z / p);
  return v;
}

ArComponents ar_components(const ArSpec& s, double t, double z) {
  const std::complex<double> th = ar_theta_normalized(s, z);
  const double c = std::cos(t * z), sn = std::sin(t * z);
  return {th.real() * c + th.imag() * sn, th.real() * sn - th.imag() * c};
}

ArComponents ar_components_dz(const ArSpec& s, double t, double z) {
  const std::complex<double> th = ar_theta_normalized(s, z);
  std::complex<double> logd(0.0, 0.0);
  for (double p : s.phi) logd += std::complex<double>(0.0, -1.0 / p) / std::complex<double>(1.0, -z / p);
  const std::complex<double> dth = th * logd;
  const double c = std::cos(t * z), sn = std::sin(t * z);
  ArComponents d;
  d.A = dth.real() * c + dth.imag() * sn + t * (-th.real() * sn + th.imag() * c);
  d.B = dth.real() * sn - dth.imag() * c + t * (th.real() * c + th.imag() * sn);
  return d;
}

double ar_squared_oddcomp(const ArSpec& s, double r, double z) {
  const std::complex<double> th = ar_theta_normalized(s, z);
  const double re = th.real(), im = th.imag();
  return (re * re - im * im) * std::sin(r * z) - 2.0 * re * im * std::cos(r * z);
}

double ar_pik_diag(const ArSpec& s, double r, double lambda) {
  const double mod2 = std::norm(ar_theta_normalized(s, lambda));
  double phase = r;
  for (double p : s.phi) phase += p / (lambda * lambda + p * p);
  return mod2 * phase;
}

}  // namespace sg
