#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "spectralgauss/chain.hpp"
#include "spectralgauss/series.hpp"

namespace sg {

namespace {

constexpr double kPi = std::numbers::pi;

double alpha_of(double H, double t) { return std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H); }

void check_terms(std::size_t N) {
  if (N < 1) throw DomainError("series needs at least one term");
}

}  // namespace

std::string basis_name(PWBasis b) {
  switch (b) {
    case PWBasis::Increment: return "increment";
    case PWBasis::SinCos: return "sincos";
    case PWBasis::Exponential: return "exponential";
    case PWBasis::EvenMartingale: return "even_martingale";
    case PWBasis::OddMartingale: return "odd_martingale";
    case PWBasis::EvenBridge: return "even_bridge";
  }
  return "unknown";
}

double PWExpansion::window_lo() const {
  switch (basis) {
    case PWBasis::Increment:
    case PWBasis::SinCos: return -r;
    default: return 0.0;
  }
}

double PWExpansion::window_hi() const { return basis == PWBasis::Exponential ? 2.0 * r : r; }

std::size_t PWExpansion::draw_size() const {
  const std::size_t pos = has_zero ? freq.size() - 1 : freq.size();
  switch (basis) {
    case PWBasis::Increment:
    case PWBasis::SinCos:
    case PWBasis::Exponential: return 1 + 2 * pos;
    case PWBasis::EvenMartingale: return 1 + pos;
    case PWBasis::OddMartingale:
    case PWBasis::EvenBridge: return pos;
  }
  return 0;
}

PWExpansion pw_fbm(double H, double r, std::size_t N, PWBasis basis, FbmNorm norm) {
  check_hurst(H);
  check_terms(N);
  if (!(r > 0.0)) throw DomainError("pw_fbm: r must be positive");
  if (basis != PWBasis::Increment && basis != PWBasis::SinCos)
    throw ConfigError("pw_fbm: basis must be increment or sincos");
  const RootList z = bessel_zeros(1.0 - H, r, N);
  PWExpansion e;
  e.basis = basis;
  e.r = r;
  e.H = H;
  e.norm = norm;
  e.amplitude = norm == FbmNorm::Standard ? 1.0 / std::sqrt(chain_scale(H)) : 1.0;
  e.has_zero = true;
  e.freq.push_back(0.0);
  e.var.push_back(kPi / alpha_of(H, r));
  e.residuals.push_back(0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    e.freq.push_back(z.roots[i]);
    e.var.push_back(1.0 / kernel_diag_at_zero(H, r, z.roots[i]));
    e.residuals.push_back(z.residuals[i]);
  }
  return e;
}

double ar_pw_variance(const ArSpec& a, double r, double lambda) {
  double mod2 = 1.0, phase = r;
  for (double p : a.phi) {
    mod2 *= lambda * lambda + p * p;
    phase += p / (lambda * lambda + p * p);
  }
  return a.sigma2 / (2.0 * mod2 * phase);
}

RootList ar_pw_roots(const ArSpec& a, double r, std::size_t N) {
  check_ar(a);
  if (!(r > 0.0)) throw DomainError("ar_pw_roots: r must be positive");
  const double n = static_cast<double>(a.phi.size());
  RootList out;
  for (std::size_t k = 1; k <= N; ++k) {
    const double target = kPi * static_cast<double>(k);
    auto f = [&](double l) {
      double v = r * l - target;
      for (double p : a.phi) v += std::atan(l / p);
      return v;
    };
    const double lo = std::max(0.0, (target - 0.5 * kPi * n) / r);
    const double hi = target / r;
    const double x = (f(hi) == 0.0) ? hi : refine_root(f, lo, hi);
    out.roots.push_back(x);
    // Residual of B_r itself, relative to the modulus of Theta.
    out.residuals.push_back(std::fabs(ar_components(a, r, x).B) / std::sqrt(std::norm(ar_theta_normalized(a, x))));
  }
  return out;
}

PWExpansion pw_stationary(const ProcessSpec& spec, double r, std::size_t N) {
  if (spec.kind != ProcessKind::OU && spec.kind != ProcessKind::AR)
    throw ConfigError("pw_stationary: process must be ou or ar");
  check_terms(N);
  validate(spec);
  const ArSpec a = spec.kind == ProcessKind::OU ? ArSpec{{spec.theta}, spec.sigma2} : spec.ar;
  check_ar(a);
  const RootList z = ar_pw_roots(a, r, N);
  PWExpansion e;
  e.basis = PWBasis::Exponential;
  e.r = r;
  e.ar = a;
  e.stationary = true;
  e.has_zero = true;
  e.freq.push_back(0.0);
  e.var.push_back(ar_pw_variance(a, r, 0.0));
  e.residuals.push_back(0.0);
  for (std::size_t i = 0; i < z.size(); ++i) {
    e.freq.push_back(z.roots[i]);
    e.var.push_back(ar_pw_variance(a, r, z.roots[i]));
    e.residuals.push_back(z.residuals[i]);
  }
  return e;
}

PWExpansion pw_martingale(double H, double r, std::size_t N, MartingaleSeries which) {
  PWExpansion base = pw_fbm(H, r, N, PWBasis::Increment, FbmNorm::Chain);
  PWExpansion e = base;
  e.amplitude = 1.0;
  switch (which) {
    case MartingaleSeries::Even: e.basis = PWBasis::EvenMartingale; break;
    case MartingaleSeries::Odd:
    case MartingaleSeries::EvenBridge:
      e.basis = which == MartingaleSeries::Odd ? PWBasis::OddMartingale : PWBasis::EvenBridge;
      e.has_zero = false;
      e.freq.erase(e.freq.begin());
      e.var.erase(e.var.begin());
      e.residuals.erase(e.residuals.begin());
      break;
  }
  return e;
}

std::vector<double> draw_variances(const PWExpansion& e) {
  const std::size_t off = e.has_zero ? 1 : 0;
  const std::size_t pos = e.freq.size() - off;
  std::vector<double> v;
  v.reserve(e.draw_size());
  switch (e.basis) {
    case PWBasis::Increment:
    case PWBasis::SinCos:
      v.push_back(e.var[0]);
      for (int rep = 0; rep < 2; ++rep)
        for (std::size_t i = 0; i < pos; ++i) v.push_back(0.5 * e.var[off + i]);
      break;
    case PWBasis::Exponential:
      v.push_back(e.var[0]);
      for (int rep = 0; rep < 2; ++rep)
        for (std::size_t i = 0; i < pos; ++i) v.push_back(2.0 * e.var[off + i]);
      break;
    case PWBasis::EvenMartingale:
      v.push_back(e.var[0]);
      for (std::size_t i = 0; i < pos; ++i) v.push_back(2.0 * e.var[off + i]);
      break;
    case PWBasis::OddMartingale:
      for (std::size_t i = 0; i < pos; ++i) v.push_back(2.0 * e.var[off + i]);
      break;
    case PWBasis::EvenBridge:
      for (std::size_t i = 0; i < pos; ++i) v.push_back(0.5 * e.var[off + i]);
      break;
  }
  return v;
}

std::vector<double> basis_row(const PWExpansion& e, double t) {
  const double tol = 1e-12 * std::max(1.0, e.r);
  if (!(t >= e.window_lo() - tol && t <= e.window_hi() + tol))
    throw DomainError("evaluation time outside the expansion window");
  const std::size_t off = e.has_zero ? 1 : 0;
  const std::size_t pos = e.freq.size() - off;
  std::vector<double> row;
  row.reserve(e.draw_size());
  switch (e.basis) {
    case PWBasis::Increment:
    case PWBasis::SinCos:
      row.push_back(t);
      for (std::size_t i = 0; i < pos; ++i) {
        const double l = e.freq[off + i];
        row.push_back(2.0 * std::sin(l * t) / l);
      }
      for (std::size_t i = 0; i < pos; ++i) {
        const double l = e.freq[off + i];
        row.push_back(2.0 * (std::cos(l * t) - 1.0) / l);
      }
      break;
    case PWBasis::Exponential:
      row.push_back(1.0);
      for (std::size_t i = 0; i < pos; ++i) row.push_back(std::cos(e.freq[off + i] * t));
      for (std::size_t i = 0; i < pos; ++i) row.push_back(std::sin(e.freq[off + i] * t));
      break;
    case PWBasis::EvenMartingale:
      row.push_back(alpha_of(e.H, t));
      for (std::size_t i = 0; i < pos; ++i) {
        const double l = e.freq[off + i];
        row.push_back(fbm_components(e.H, t, l).B / l);
      }
      break;
    case PWBasis::OddMartingale:
      for (std::size_t i = 0; i < pos; ++i) {
        const double l = e.freq[off + i];
        row.push_back((fbm_components(e.H, t, l).A - 1.0) / l);
      }
      break;
    case PWBasis::EvenBridge:
      for (std::size_t i = 0; i < pos; ++i) {
        const double l = e.freq[off + i];
        row.push_back(2.0 * fbm_components(e.H, t, l).B / l);
      }
      break;
  }
  for (double& x : row) x *= e.amplitude;
  return row;
}

Eigen::MatrixXd basis_matrix(const PWExpansion& e, const std::vector<double>& grid) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(e.draw_size()));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::vector<double> row = basis_row(e, grid[g]);
    for (std::size_t j = 0; j < row.size(); ++j) m(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(j)) = row[j];
  }
  return m;
}

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

CoefficientDraw sample_coefficients(const std::vector<double>& variances, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CoefficientDraw d;
  d.values.reserve(variances.size());
  for (double v : variances) {
    if (!(v >= 0.0)) throw DomainError("coefficient variance must be non-negative");
    const double z = nd(rng);
    d.values.push_back(v == 0.0 ? 0.0 : std::sqrt(v) * z);
  }
  return d;
}

CoefficientDraw sample_coefficients(const PWExpansion& e, std::mt19937_64& rng) {
  return sample_coefficients(draw_variances(e), rng);
}

SamplePath evaluate_path(const PWExpansion& e, const CoefficientDraw& d, const std::vector<double>& grid) {
  if (d.values.size() != e.draw_size()) throw ConfigError("coefficient draw does not match the expansion");
  SamplePath p;
  p.grid = grid;
  p.values.reserve(grid.size());
  for (double t : grid) {
    const std::vector<double> row = basis_row(e, t);
    double s = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * d.values[j];
    p.values.push_back(s);
  }
  return p;
}

std::vector<double> complex_draw(const PWExpansion& e, std::mt19937_64& rng) {
  if (e.basis != PWBasis::Increment || !e.has_zero) throw ConfigError("complex draws need the increment basis");
  const std::size_t pos = e.freq.size() - 1;
  std::vector<double> var;
  var.reserve(2 * (2 * pos + 1));
  for (std::size_t k = 0; k < 2 * pos + 1; ++k) {
    const std::size_t n = k < pos ? pos - k : k - pos;  // |n| for n = -pos..pos
    var.push_back(0.5 * e.var[n]);
    var.push_back(0.5 * e.var[n]);
  }
  return sample_coefficients(var, rng).values;
}

SamplePath evaluate_complex_path(const PWExpansion& e, const std::vector<double>& coeffs,
                                 const std::vector<double>& grid) {
  if (e.basis != PWBasis::Increment || !e.has_zero) throw ConfigError("complex paths need the increment basis");
  const std::size_t pos = e.freq.size() - 1;
  if (coeffs.size() != 2 * (2 * pos + 1)) throw ConfigError("coefficient draw does not match the expansion");
  SamplePath p;
  p.grid = grid;
  for (double t : grid) {
    if (!(t >= -e.r * (1 + 1e-12) && t <= e.r * (1 + 1e-12)))
      throw DomainError("evaluation time outside the expansion window");
    std::complex<double> s(0.0, 0.0);
    for (std::size_t k = 0; k < 2 * pos + 1; ++k) {
      const double l = k < pos ? -e.freq[pos - k] : e.freq[k - pos];
      const std::complex<double> z(coeffs[2 * k], coeffs[2 * k + 1]);
      std::complex<double> b;
      if (l == 0.0)
        b = t;
      else
        b = (std::exp(std::complex<double>(0.0, l * t)) - 1.0) / std::complex<double>(0.0, l);
      s += b * z;
    }
    p.values.push_back(e.amplitude * s.real());
    p.imag.push_back(e.amplitude * s.imag());
  }
  return p;
}

double series_covariance(const PWExpansion& e, double s, double t) {
  const std::vector<double> a = basis_row(e, s);
  const std::vector<double> b = basis_row(e, t);
  const std::vector<double> v = draw_variances(e);
  // Sum smallest terms first; tails dominate the count.
  double acc = 0.0;
  for (std::size_t j = a.size(); j-- > 0;) acc += a[j] * b[j] * v[j];
  return acc;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n, bool include_a) {
  std::vector<double> g;
  if (n == 0) return g;
  g.reserve(n);
  if (include_a) {
    if (n == 1) return {a};
    for (std::size_t i = 0; i < n; ++i) g.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  } else {
    for (std::size_t i = 1; i <= n; ++i) g.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n));
  }
  return g;
}

}  // namespace sg
