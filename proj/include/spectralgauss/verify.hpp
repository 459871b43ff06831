#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spectralgauss/kl.hpp"
#include "spectralgauss/processes.hpp"
#include "spectralgauss/series.hpp"

namespace sg {

struct EigReport {
  std::string kernel_tag;
  std::size_t n = 0;
  double r = 1.0;
  std::vector<double> grid;  // midpoints
  std::vector<double> eigenvalues;
  std::vector<std::vector<double>> eigenvectors;  // (r/n) sum phi^2 = 1
};

EigReport nystrom_eig(const std::function<double(double, double)>& kernel, double r, std::size_t n,
                      std::size_t count, const std::string& tag = "", bool vectors = true);

// Exact Gaussian sampler from a covariance matrix (Cholesky, jitter on failure).
class CholeskySampler {
 public:
  explicit CholeskySampler(const CovarianceMatrix& cov);
  SamplePath sample(std::mt19937_64& rng) const;
  // grid.size() x M matrix of independent paths.
  Eigen::MatrixXd sample_many(std::mt19937_64& rng, std::size_t M) const;
  double jitter() const { return jitter_; }

 private:
  std::vector<double> grid_;
  Eigen::MatrixXd L_;
  double jitter_ = 0.0;
};

SamplePath cholesky_sample(const CovarianceMatrix& cov, std::mt19937_64& rng);

struct MCCovariance {
  Eigen::MatrixXd mean;    // empirical E[X_s X_t]
  Eigen::MatrixXd stderr_;  // per-entry standard error
  std::size_t paths = 0;
};

// Paths in the columns of X.
MCCovariance mc_covariance(const Eigen::MatrixXd& X);
MCCovariance mc_covariance(const std::function<SamplePath()>& sampler, std::size_t M);

struct BandCheck {
  double pass_fraction = 0.0;
  double max_z = 0.0;
  std::size_t entries = 0;
};

// |emp - target| / stderr <= z per entry; entries with zero stderr must match exactly.
BandCheck band_check(const MCCovariance& mc, const Eigen::MatrixXd& target, double z = 4.0);

struct SlopeFit {
  double slope = 0.0, intercept = 0.0, stderr_ = 0.0, ci_lo = 0.0, ci_hi = 0.0;
};

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct RateReport {
  double H = 0.5, r = 1.0;
  std::vector<std::size_t> Ns;
  std::vector<double> sup_ms;   // sup_t E|R^N_t|^2
  std::vector<double> sup_abs;  // MC estimate of E sup_t |R^N_t| (not gated)
  SlopeFit fit;
  std::size_t pool = 0;
};

RateReport truncation_rate(double H, double r, const std::vector<std::size_t>& Ns, const std::vector<double>& grid,
                           std::size_t pool = 16384, std::size_t mc_paths = 32, std::uint64_t seed = 1);

// max over grid^2 of |sum_{n<N} eps_n phi_n(s) phi_n(t) - kernel(s, t)|.
double mercer_check(const KLBasis& basis, const std::function<double(double, double)>& kernel,
                    const std::vector<double>& grid, std::size_t N);

// Chain- or standard-normalized FBM covariance from its spectral integral.
double fbm_spectral_covariance(double H, double s, double t, FbmNorm norm = FbmNorm::Chain);

}  // namespace sg
