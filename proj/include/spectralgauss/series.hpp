#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectralgauss/chain.hpp"
#include "spectralgauss/processes.hpp"
#include "spectralgauss/specfun.hpp"

namespace sg {

enum class PWBasis { Increment, SinCos, Exponential, EvenMartingale, OddMartingale, EvenBridge };

std::string basis_name(PWBasis b);

// Paley-Wiener expansion. freq[i] / var[i] hold lambda_n and sigma_n^2 =
// 1/K_r(lambda_n, lambda_n); lambda_0 = 0 comes first when the basis has it.
struct PWExpansion {
  PWBasis basis = PWBasis::SinCos;
  double r = 1.0;
  double H = 0.5;
  ArSpec ar;
  bool stationary = false;
  FbmNorm norm = FbmNorm::Chain;
  double amplitude = 1.0;  // path multiplier (1/sqrt(kappa) for standard FBM)
  std::vector<double> freq;
  std::vector<double> var;
  std::vector<double> residuals;
  bool has_zero = false;

  std::size_t terms() const { return freq.size(); }
  double window_lo() const;
  double window_hi() const;
  // Length of a real coefficient vector for this basis.
  std::size_t draw_size() const;
};

PWExpansion pw_fbm(double H, double r, std::size_t N, PWBasis basis = PWBasis::SinCos,
                   FbmNorm norm = FbmNorm::Chain);
PWExpansion pw_stationary(const ProcessSpec& spec, double r, std::size_t N);
enum class MartingaleSeries { Even, Odd, EvenBridge };
PWExpansion pw_martingale(double H, double r, std::size_t N, MartingaleSeries which);

// Positive roots of r*l + sum_k atan(l/phi_k) = k*pi (zeros of B_r for the
// normalized AR chain; for OU this is theta*tan(l*r) + l = 0).
RootList ar_pw_roots(const ArSpec& a, double r, std::size_t N);
// sigma^2 / (2 |Theta(i l)|^2 (r + sum_k phi_k / (l^2 + phi_k^2))).
double ar_pw_variance(const ArSpec& a, double r, double lambda);

struct CoefficientDraw {
  std::vector<double> values;
};

// Per-entry variances of the real coefficient vector.
std::vector<double> draw_variances(const PWExpansion& e);
// Basis values at t in the same layout as the coefficient vector.
std::vector<double> basis_row(const PWExpansion& e, double t);
Eigen::MatrixXd basis_matrix(const PWExpansion& e, const std::vector<double>& grid);

// Independent Gaussian coefficients; one stream per (seed, stream) pair.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);
CoefficientDraw sample_coefficients(const std::vector<double>& variances, std::mt19937_64& rng);
CoefficientDraw sample_coefficients(const PWExpansion& e, std::mt19937_64& rng);

struct SamplePath {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> imag;  // empty for real paths
};

SamplePath evaluate_path(const PWExpansion& e, const CoefficientDraw& d, const std::vector<double>& grid);
// Complex increment-basis path from 2N+1 independent complex coefficients,
// stored as (re, im) pairs for n = -N..N.
SamplePath evaluate_complex_path(const PWExpansion& e, const std::vector<double>& coeffs,
                                 const std::vector<double>& grid);
std::vector<double> complex_draw(const PWExpansion& e, std::mt19937_64& rng);

double series_covariance(const PWExpansion& e, double s, double t);

std::vector<double> uniform_grid(double a, double b, std::size_t n, bool include_a = true);

}  // namespace sg
