#pragma once

// Test-side reference computations. Nothing here calls into the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct Rule {
  std::vector<double> x, w;
};

// Golub-Welsch: Gauss-Legendre nodes are the eigenvalues of the Jacobi matrix.
inline Rule gauss_legendre(int n) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule r;
  for (int i = 0; i < n; ++i) {
    r.x.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.w.push_back(2.0 * v * v);
  }
  return r;
}

// Composite rule over explicit breakpoints.
inline Rule composite(const std::vector<double>& br, int order) {
  const Rule g = gauss_legendre(order);
  Rule r;
  for (std::size_t p = 0; p + 1 < br.size(); ++p) {
    const double h = 0.5 * (br[p + 1] - br[p]), m = 0.5 * (br[p + 1] + br[p]);
    for (int i = 0; i < order; ++i) {
      r.x.push_back(m + h * g.x[i]);
      r.w.push_back(h * g.w[i]);
    }
  }
  return r;
}

// Geometric panels toward 0 followed by uniform panels on [a0, b].
inline Rule graded(double b, int uniform, int levels, int order) {
  std::vector<double> br{0.0};
  const double first = b / uniform;
  for (int k = levels; k >= 1; --k) br.push_back(first * std::ldexp(1.0, -k));
  for (int k = 1; k <= uniform; ++k) br.push_back(first * k);
  return composite(br, order);
}

inline double integrate(const std::function<double(double)>& f, const Rule& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * f(r.x[i]);
  return s;
}

// Midpoint Nystrom eigenvalues on [0, r], descending.
inline std::vector<double> nystrom(const std::function<double(double, double)>& k, double r, int n, int count) {
  const double h = r / n;
  Eigen::MatrixXd K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) K(i, j) = K(j, i) = h * k((i + 0.5) * h, (j + 0.5) * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
  std::vector<double> ev;
  for (int i = 0; i < count; ++i) ev.push_back(es.eigenvalues()(n - 1 - i));
  return ev;
}

// Chain-normalized FBM: variance kappa t^{2H} with spectral density m |l|^{1-2H},
// m = pi / (2^{1-2H} Gamma(1-H)^2), and int (1 - cos u) u^{-1-2H} du = pi / (2 Gamma(2H+1) sin(pi H)).
inline double chain_density(double H) {
  const double g = std::tgamma(1.0 - H);
  return std::numbers::pi / (std::pow(2.0, 1.0 - 2.0 * H) * g * g);
}

inline double chain_kappa(double H) {
  return 2.0 * std::numbers::pi * chain_density(H) / (std::tgamma(2.0 * H + 1.0) * std::sin(std::numbers::pi * H));
}

inline double fbm_cov(double H, double s, double t, double kappa) {
  const double e = 2.0 * H;
  return 0.5 * kappa * (std::pow(std::fabs(s), e) + std::pow(std::fabs(t), e) - std::pow(std::fabs(s - t), e));
}

// Even part: 4 E[X^e_s X^e_t] = |s+t|^{2H} - |s-t|^{2H}; the odd part is the
// sub-fractional remainder.
inline double fbm_even_cov(double H, double s, double t, double kappa) {
  const double e = 2.0 * H;
  return 0.25 * kappa * (std::pow(s + t, e) - std::pow(std::fabs(s - t), e));
}

inline double fbm_odd_cov(double H, double s, double t, double kappa) {
  const double e = 2.0 * H;
  return 0.25 * kappa *
         (2.0 * std::pow(s, e) + 2.0 * std::pow(t, e) - std::pow(std::fabs(s - t), e) - std::pow(s + t, e));
}

inline double alpha(double H, double t) { return std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H); }
inline double gamma(double H, double t) { return std::pow(t, 2.0 * H) / (2.0 * H); }
inline double alpha_p(double H, double t) { return std::pow(t, 1.0 - 2.0 * H); }
inline double gamma_p(double H, double t) { return std::pow(t, 2.0 * H - 1.0); }

// Martingale and bridge kernels moved to L^2(dt): k(s, t) / sqrt(m'_s m'_t).
inline double even_mart_kernel(double H, double r, bool bridge, double s, double t) {
  double k = alpha(H, std::min(s, t));
  if (bridge) k -= alpha(H, s) * alpha(H, t) / alpha(H, r);
  return k / std::sqrt(alpha_p(H, s) * alpha_p(H, t));
}

inline double odd_mart_kernel(double H, double r, bool bridge, double s, double t) {
  double k = gamma(H, std::min(s, t));
  if (bridge) k -= gamma(H, s) * gamma(H, t) / gamma(H, r);
  return k / std::sqrt(gamma_p(H, s) * gamma_p(H, t));
}

// Even martingale conditioned on int gamma dM = 0: g_t = int_0^t gamma dalpha = t^2 / (4H),
// |gamma|^2 = r^{2H+2} / (4 H^2 (2H+2)).
inline double ext_even_gamma_kernel(double H, double r, double s, double t) {
  const double norm2 = std::pow(r, 2.0 * H + 2.0) / (4.0 * H * H * (2.0 * H + 2.0));
  const double k = alpha(H, std::min(s, t)) - (s * s / (4.0 * H)) * (t * t / (4.0 * H)) / norm2;
  return k / std::sqrt(alpha_p(H, s) * alpha_p(H, t));
}

inline double inverse_even_bridge_cov(double H, double r, double s, double t) {
  return alpha(H, r - std::max(s, t)) - alpha(H, r - s) * alpha(H, r - t) / alpha(H, r);
}

// Covariance of the stationary process with density sigma2 / (2 pi |Theta(i l)|^2),
// Theta(iz) = (iz - 1)(iz - 2), by residues.
inline double ar12_cov(double sigma2, double tau) {
  const double a = std::fabs(tau);
  return sigma2 / 6.0 * (std::exp(-a) - 0.5 * std::exp(-2.0 * a));
}

}  // namespace oracle
