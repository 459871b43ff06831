#include <algorithm>
#include <cmath>
#include <numbers>

#include "spectralgauss/quadrature.hpp"
#include "spectralgauss/verify.hpp"

namespace sg {

CholeskySampler::CholeskySampler(const CovarianceMatrix& cov) : grid_(cov.grid) {
  const Eigen::Index n = cov.values.rows();
  if (n == 0) return;
  const double tr = cov.values.trace();
  if (tr == 0.0 && cov.values.cwiseAbs().maxCoeff() == 0.0) {
    L_ = Eigen::MatrixXd::Zero(n, n);
    return;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov.values);
  if (llt.info() == Eigen::Success) {
    L_ = llt.matrixL();
    return;
  }
  jitter_ = 1e-12 * std::fabs(tr);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd m = cov.values;
    m.diagonal().array() += jitter_;
    llt.compute(m);
    if (llt.info() == Eigen::Success) {
      L_ = llt.matrixL();
      return;
    }
    jitter_ *= 10.0;
  }
  throw NumericError("cholesky_sample: factorization failed after jitter");
}

Eigen::MatrixXd CholeskySampler::sample_many(std::mt19937_64& rng, std::size_t M) const {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd Z(L_.rows(), static_cast<Eigen::Index>(M));
  for (Eigen::Index j = 0; j < Z.cols(); ++j)
    for (Eigen::Index i = 0; i < Z.rows(); ++i) Z(i, j) = nd(rng);
  return L_.triangularView<Eigen::Lower>() * Z;
}

SamplePath CholeskySampler::sample(std::mt19937_64& rng) const {
  const Eigen::MatrixXd x = sample_many(rng, 1);
  SamplePath p;
  p.grid = grid_;
  p.values.assign(x.data(), x.data() + x.size());
  return p;
}

SamplePath cholesky_sample(const CovarianceMatrix& cov, std::mt19937_64& rng) {
  return CholeskySampler(cov).sample(rng);
}

MCCovariance mc_covariance(const Eigen::MatrixXd& X) {
  const auto M = static_cast<double>(X.cols());
  if (X.cols() < 2) throw DomainError("mc_covariance needs at least two paths");
  MCCovariance r;
  r.paths = static_cast<std::size_t>(X.cols());
  r.mean = X * X.transpose() / M;
  const Eigen::MatrixXd X2 = X.array().square().matrix();
  const Eigen::MatrixXd m4 = X2 * X2.transpose() / M;
  // Var of the product X_s X_t, then the standard error of its mean.
  const Eigen::MatrixXd var = (m4.array() - r.mean.array().square()).cwiseMax(0.0).matrix() * (M / (M - 1.0));
  r.stderr_ = (var.array() / M).sqrt().matrix();
  return r;
}

MCCovariance mc_covariance(const std::function<SamplePath()>& sampler, std::size_t M) {
  if (M < 100) throw DomainError("mc_covariance needs at least 100 paths");
  SamplePath first = sampler();
  Eigen::MatrixXd X(static_cast<Eigen::Index>(first.values.size()), static_cast<Eigen::Index>(M));
  for (std::size_t i = 0; i < first.values.size(); ++i) X(static_cast<Eigen::Index>(i), 0) = first.values[i];
  for (std::size_t j = 1; j < M; ++j) {
    const SamplePath p = sampler();
    if (p.values.size() != first.values.size()) throw ConfigError("sampler changed the path length");
    for (std::size_t i = 0; i < p.values.size(); ++i)
      X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = p.values[i];
  }
  return mc_covariance(X);
}

BandCheck band_check(const MCCovariance& mc, const Eigen::MatrixXd& target, double z) {
  BandCheck b;
  std::size_t pass = 0;
  for (Eigen::Index i = 0; i < target.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d = std::fabs(mc.mean(i, j) - target(i, j));
      const double se = mc.stderr_(i, j);
      double zz;
      if (se > 0.0)
        zz = d / se;
      else
        zz = d <= 1e-12 * std::max(1.0, std::fabs(target(i, j))) ? 0.0 : INFINITY;
      b.max_z = std::max(b.max_z, zz);
      if (zz <= z) ++pass;
      ++b.entries;
    }
  b.pass_fraction = b.entries ? static_cast<double>(pass) / static_cast<double>(b.entries) : 1.0;
  return b;
}

SlopeFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) throw DomainError("fit_loglog needs at least three points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw DomainError("fit_loglog needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    mx += lx.back();
    my += ly.back();
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  SlopeFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - f.intercept - f.slope * lx[i];
    rss += e * e;
  }
  f.stderr_ = std::sqrt(rss / (n - 2.0) / sxx);
  f.ci_lo = f.slope - 1.96 * f.stderr_;
  f.ci_hi = f.slope + 1.96 * f.stderr_;
  return f;
}

namespace {

// Re int_L^inf cos(a x) x^{-p} dx by repeated integration by parts (a L >> p).
double cos_tail(double a, double L, double p) {
  if (a == 0.0) return std::pow(L, 1.0 - p) / (p - 1.0);
  using c = std::complex<double>;
  const c ia(0.0, a);
  c sum(0.0, 0.0), iak = ia;
  double fk = std::pow(L, -p);
  for (int k = 0; k < 12; ++k) {
    sum += (k % 2 == 0 ? 1.0 : -1.0) * fk / iak;
    fk *= (-p - static_cast<double>(k)) / L;
    iak *= ia;
  }
  return (-std::exp(c(0.0, a * L)) * sum).real();
}

}  // namespace

double fbm_spectral_covariance(double H, double s, double t, FbmNorm norm) {
  check_hurst(H);
  const double c = norm == FbmNorm::Chain ? fbm_chain_density_constant(H) : fbm_standard_density_constant(H);
  if (s == 0.0 || t == 0.0) return 0.0;
  const double p = 1.0 + 2.0 * H;
  double amin = INFINITY, amax = 0.0;
  for (double a : {std::fabs(s), std::fabs(t), std::fabs(s - t)})
    if (a > 0.0) {
      amin = std::min(amin, a);
      amax = std::max(amax, a);
    }
  const double L = 2000.0 * std::numbers::pi / amin;
  const double width = std::numbers::pi / (4.0 * amax);
  // 2 int_0^L [(cos sx - 1)(cos tx - 1) + sin sx sin tx] x^{-p} dx, with a
  // geometric start to resolve the small-x region. Below x0 the integrand is
  // s t x^{1-2H} to relative order x0^2.
  const double x0 = width * std::ldexp(1.0, -40);
  std::vector<double> br{x0};
  double x = 2.0 * x0;
  while (x < width) {
    br.push_back(x);
    x *= 2.0;
  }
  for (double y = width; y < L; y += width) br.push_back(y);
  br.push_back(L);
  const QuadRule q = composite_rule(br, 8);
  double sum = s * t * std::pow(x0, 2.0 - 2.0 * H) / (2.0 - 2.0 * H);
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double u = q.x[i];
    const double ss = std::sin(0.5 * s * u), st = std::sin(0.5 * t * u);
    const double f = 4.0 * ss * ss * st * st + std::sin(s * u) * std::sin(t * u);
    sum += q.w[i] * f * std::pow(u, -p);
  }
  // Tail: 1 - cos(s x) - cos(t x) + cos((s - t) x).
  const double tail = cos_tail(0.0, L, p) - cos_tail(s, L, p) - cos_tail(t, L, p) + cos_tail(s - t, L, p);
  return 2.0 * c * (sum + tail);
}

}  // namespace sg
