#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectralgauss/chain.hpp"

namespace sg {

enum class ProcessKind {
  FBM,
  FBMEven,
  FBMOdd,
  OU,
  AR,
  EvenMartingale,
  OddMartingale,
  EvenBridge,
  OddBridge,
  SingleSidedMartingale,
  AlphaWienerBridge,
  InverseEvenBridge,
  BrownianMotion,
  BrownianBridge
};

enum class FbmNorm { Standard, Chain };

struct ProcessSpec {
  ProcessKind kind = ProcessKind::BrownianMotion;
  double H = 0.5;
  FbmNorm norm = FbmNorm::Standard;
  double theta = 1.0;
  double sigma2 = 1.0;
  ArSpec ar;
  double r = 1.0;
  bool pi_scaled = true;

  static ProcessSpec fbm(double H, FbmNorm n = FbmNorm::Standard);
  static ProcessSpec fbm_even(double H, FbmNorm n = FbmNorm::Standard);
  static ProcessSpec fbm_odd(double H, FbmNorm n = FbmNorm::Standard);
  static ProcessSpec ou(double theta, double sigma2);
  static ProcessSpec autoregressive(const ArSpec& a);
  static ProcessSpec even_martingale(double H, bool pi_scaled = true);
  static ProcessSpec odd_martingale(double H, bool pi_scaled = true);
  static ProcessSpec even_bridge(double H, double r, bool pi_scaled = true);
  static ProcessSpec odd_bridge(double H, double r, bool pi_scaled = true);
  static ProcessSpec single_sided_martingale(double H, bool pi_scaled = true);
  static ProcessSpec alpha_wiener_bridge(double H, double r);
  static ProcessSpec inverse_even_bridge(double H, double r, bool pi_scaled = false);
  static ProcessSpec brownian_motion();
  static ProcessSpec brownian_bridge(double r);
};

void validate(const ProcessSpec& spec);
std::string kind_name(ProcessKind k);

double covariance(const ProcessSpec& spec, double s, double t);
double spectral_density(const ProcessSpec& spec, double lambda);

// mu'(1) of the chain-normalized FBM measure and the standard constant c_H.
double fbm_chain_density_constant(double H);
double fbm_standard_density_constant(double H);
// kappa(H) = mu'(1) / c_H: chain-normalized FBM variance is kappa * t^{2H}.
double chain_scale(double H);

// Stationary covariance of OU / AR kinds by quadrature of the spectral density.
double stationary_covariance_quadrature(const ProcessSpec& spec, double tau);
// AR(n) covariance by residues when the roots are well separated, else quadrature.
double ar_covariance(const ArSpec& a, double tau);

struct CovarianceMatrix {
  std::vector<double> grid;
  Eigen::MatrixXd values;
  double min_eigenvalue = 0.0;
  bool psd = true;
  std::string warning;
};

CovarianceMatrix covariance_matrix(const ProcessSpec& spec, const std::vector<double>& grid,
                                   bool check_psd = true);

}  // namespace sg
