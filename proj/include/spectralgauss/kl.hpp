#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spectralgauss/chain.hpp"
#include "spectralgauss/specfun.hpp"

namespace sg {

enum class KLKernel {
  BM,
  BMBridge,
  FBMEvenMartingale,
  FBMOddMartingale,
  FBMEvenBridge,
  FBMOddBridge,
  OU,
  AR,
  ExtendedEvenBridge,
  ExtendedOddBridge
};

enum class Parity { Even, Odd };

// Closed-form special cases of the bridge weight kappa.
enum class KappaForm { General, Gamma, Alpha };

struct KLKernelSpec {
  KLKernel kind = KLKernel::BM;
  double H = 0.5;
  double theta = 1.0;
  double sigma2 = 1.0;
  ArSpec ar;
  std::function<double(double)> kappa;
  KappaForm kappa_form = KappaForm::General;
  // Force the quadrature G path even when kappa_form has a closed form.
  bool generic_G = false;

  static KLKernelSpec bm();
  static KLKernelSpec bm_bridge();
  static KLKernelSpec fbm_even_martingale(double H);
  static KLKernelSpec fbm_odd_martingale(double H);
  static KLKernelSpec fbm_even_bridge(double H);
  static KLKernelSpec fbm_odd_bridge(double H);
  static KLKernelSpec ou(double theta, double sigma2);
  static KLKernelSpec autoregressive(const ArSpec& a);
  static KLKernelSpec extended_bridge(double H, std::function<double(double)> kappa, Parity p,
                                      KappaForm form = KappaForm::General);
};

std::string kernel_name(KLKernel k);

struct KLBasis {
  KLKernelSpec spec;
  double r = 1.0;
  std::vector<double> eigenvalues;  // descending
  std::vector<double> freq;         // w_n (lambda_n for Bessel families)
  std::vector<double> residuals;    // root residuals
  std::vector<std::map<std::string, double>> params;
  std::vector<std::function<double(double)>> phi_fn;
  std::function<double(double, double)> kernel_fn;

  std::size_t size() const { return eigenvalues.size(); }
  double weight(std::size_t n) const;
  double phi(std::size_t n, double t) const;
  // The L^2[0, r] kernel the basis diagonalizes.
  double kernel(double s, double t) const;
  // Mercer partial sum with the first n terms.
  double mercer(double s, double t, std::size_t n) const;
  // Gram matrix of the first n eigenfunctions by composite Gauss quadrature.
  std::vector<std::vector<double>> gram(std::size_t n, std::size_t panels = 32, std::size_t order = 16) const;
};

KLBasis kl_basis(const KLKernelSpec& spec, double r, std::size_t N);

KLBasis extended_bridge_basis(double H, double r, const std::function<double(double)>& kappa, std::size_t N,
                              Parity parity, KappaForm form = KappaForm::General, bool generic_G = false);

// Quantities entering the extended-bridge determinant at frequency w.
struct BridgeInner {
  double A_r = 0.0, B_r = 0.0;
  double one_G = 0.0;   // <1, G>
  double g_G = 0.0;     // <g, G>
  double one_B = 0.0;   // <1, B>
  double g_B = 0.0;     // <g, B>
  double kappa_norm2 = 0.0;
};

BridgeInner extended_bridge_inner(double H, double r, const std::function<double(double)>& kappa, double w,
                                  Parity parity, KappaForm form = KappaForm::General, bool generic_G = false);
double extended_bridge_det(const BridgeInner& q, double w);

// Kernel of the extended bridge in L^2[0, r].
double extended_bridge_kernel(double H, double r, const std::function<double(double)>& kappa, Parity parity,
                              double s, double t);

// AR(n) eigen-frequencies from the 2n-order boundary value problem, and the
// alternative zeros of B^1_r kept as a diagnostic.
RootList ar_kl_roots(const ArSpec& a, double r, std::size_t N);
RootList ar_b1_roots(const ArSpec& a, double r, std::size_t N);
double ar_kl_det(const ArSpec& a, double r, double w);

}  // namespace sg
