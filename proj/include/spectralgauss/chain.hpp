#pragma once

#include <complex>
#include <vector>

namespace sg {

struct ChainComponents {
  double A = 1.0, B = 0.0, C = 0.0, D = 1.0;
};

// Structure function m_t = diag[alpha_t, gamma_t] of the homogeneous FBM chain.
struct StructureFn {
  double H = 0.5;
  double alpha(double t) const;
  double gamma(double t) const;
  double alpha_prime(double t) const;
  double gamma_prime(double t) const;
};

StructureFn fbm_structure(double H);

// de Branges matrix entries of the FBM chain at (t, z), and their z-derivatives.
ChainComponents fbm_components(double H, double t, double z);
ChainComponents fbm_components_dz(double H, double t, double z);

// Reproducing kernel K_r(w, z) of the FBM chain (not multiplied by pi).
double kernel_K(double H, double r, double w, double z);
// K_r(lambda, lambda) via A*B' - A'*B.
double kernel_diag(double H, double r, double lambda);
// Closed form of K_r(lambda, lambda) valid only at zeros of J_{1-H}(r .).
double kernel_diag_at_zero(double H, double r, double lambda);
// Bessel form of K_r(lambda, lambda) valid for every real lambda.
double kernel_diag_bessel(double H, double r, double lambda);
// Q_r(lambda, lambda) via D'*C - D*C'.
double kernel_Q_diag(double H, double r, double lambda);
// Closed forms of Q_r(lambda, lambda) at zeros of J_{H-1}(r .) and J_H(r .).
double kernel_Q_diag_at_D_zero(double H, double r, double lambda);
double kernel_Q_diag_at_C_zero(double H, double r, double lambda);

void check_hurst(double H);

// Stationary AR(n) family: Theta(iz) = prod_k (iz - phi_k).
struct ArSpec {
  std::vector<double> phi;
  double sigma2 = 1.0;
};

void check_ar(const ArSpec& s);

std::complex<double> ar_theta(const ArSpec& s, double z);
// Theta(iz) / Theta(0).
std::complex<double> ar_theta_normalized(const ArSpec& s, double z);

struct ArComponents {
  double A = 1.0, B = 0.0;
};

// Even/odd components of Theta(iz) exp(-izt) / Theta(0).
ArComponents ar_components(const ArSpec& s, double t, double z);
ArComponents ar_components_dz(const ArSpec& s, double t, double z);
// B^1_r(z): odd component of the squared normalized function.
double ar_squared_oddcomp(const ArSpec& s, double r, double z);
// pi * K_r(lambda, lambda) of the normalized chain, by the phase derivative.
double ar_pik_diag(const ArSpec& s, double r, double lambda);

}  // namespace sg
