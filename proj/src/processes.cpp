#include "spectralgauss/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spectralgauss/quadrature.hpp"
#include "spectralgauss/specfun.hpp"

namespace sg {

ProcessSpec ProcessSpec::fbm(double H, FbmNorm n) {
  ProcessSpec s;
  s.kind = ProcessKind::FBM;
  s.H = H;
  s.norm = n;
  return s;
}
ProcessSpec ProcessSpec::fbm_even(double H, FbmNorm n) {
  ProcessSpec s = fbm(H, n);
  s.kind = ProcessKind::FBMEven;
  return s;
}
ProcessSpec ProcessSpec::fbm_odd(double H, FbmNorm n) {
  ProcessSpec s = fbm(H, n);
  s.kind = ProcessKind::FBMOdd;
  return s;
}
ProcessSpec ProcessSpec::ou(double theta, double sigma2) {
  ProcessSpec s;
  s.kind = ProcessKind::OU;
  s.theta = theta;
  s.sigma2 = sigma2;
  s.ar = ArSpec{{theta}, sigma2};
  return s;
}
ProcessSpec ProcessSpec::autoregressive(const ArSpec& a) {
  ProcessSpec s;
  s.kind = ProcessKind::AR;
  s.ar = a;
  s.sigma2 = a.sigma2;
  return s;
}
ProcessSpec ProcessSpec::even_martingale(double H, bool pi_scaled) {
  ProcessSpec s;
  s.kind = ProcessKind::EvenMartingale;
  s.H = H;
  s.pi_scaled = pi_scaled;
  return s;
}
ProcessSpec ProcessSpec::odd_martingale(double H, bool pi_scaled) {
  ProcessSpec s = even_martingale(H, pi_scaled);
  s.kind = ProcessKind::OddMartingale;
  return s;
}
ProcessSpec ProcessSpec::even_bridge(double H, double r, bool pi_scaled) {
  ProcessSpec s = even_martingale(H, pi_scaled);
  s.kind = ProcessKind::EvenBridge;
  s.r = r;
  return s;
}
ProcessSpec ProcessSpec::odd_bridge(double H, double r, bool pi_scaled) {
  ProcessSpec s = even_bridge(H, r, pi_scaled);
  s.kind = ProcessKind::OddBridge;
  return s;
}
ProcessSpec ProcessSpec::single_sided_martingale(double H, bool pi_scaled) {
  ProcessSpec s = even_martingale(H, pi_scaled);
  s.kind = ProcessKind::SingleSidedMartingale;
  return s;
}
ProcessSpec ProcessSpec::alpha_wiener_bridge(double H, double r) {
  ProcessSpec s;
  s.kind = ProcessKind::AlphaWienerBridge;
  s.H = H;
  s.r = r;
  s.pi_scaled = false;
  return s;
}
ProcessSpec ProcessSpec::inverse_even_bridge(double H, double r, bool pi_scaled) {
  ProcessSpec s = even_bridge(H, r, pi_scaled);
  s.kind = ProcessKind::InverseEvenBridge;
  return s;
}
ProcessSpec ProcessSpec::brownian_motion() { return ProcessSpec{}; }
ProcessSpec ProcessSpec::brownian_bridge(double r) {
  ProcessSpec s;
  s.kind = ProcessKind::BrownianBridge;
  s.r = r;
  return s;
}

std::string kind_name(ProcessKind k) {
  switch (k) {
    case ProcessKind::FBM: return "fbm";
    case ProcessKind::FBMEven: return "fbm_even";
    case ProcessKind::FBMOdd: return "fbm_odd";
    case ProcessKind::OU: return "ou";
    case ProcessKind::AR: return "ar";
    case ProcessKind::EvenMartingale: return "even_martingale";
    case ProcessKind::OddMartingale: return "odd_martingale";
    case ProcessKind::EvenBridge: return "even_bridge";
    case ProcessKind::OddBridge: return "odd_bridge";
    case ProcessKind::SingleSidedMartingale: return "single_sided_martingale";
    case ProcessKind::AlphaWienerBridge: return "alpha_wiener_bridge";
    case ProcessKind::InverseEvenBridge: return "inverse_even_bridge";
    case ProcessKind::BrownianMotion: return "bm";
    case ProcessKind::BrownianBridge: return "bm_bridge";
  }
  return "unknown";
}

namespace {

bool uses_hurst(ProcessKind k) {
  switch (k) {
    case ProcessKind::OU:
    case ProcessKind::AR:
    case ProcessKind::BrownianMotion:
    case ProcessKind::BrownianBridge: return false;
    default: return true;
  }
}

bool on_window(ProcessKind k) {
  switch (k) {
    case ProcessKind::EvenBridge:
    case ProcessKind::OddBridge:
    case ProcessKind::AlphaWienerBridge:
    case ProcessKind::InverseEvenBridge:
    case ProcessKind::BrownianBridge: return true;
    default: return false;
  }
}

double vpow(double u, double H) { return std::pow(std::fabs(u), 2.0 * H); }

double fbm_scale(const ProcessSpec& s) { return s.norm == FbmNorm::Chain ? chain_scale(s.H) : 1.0; }

double alpha_of(double H, double t) { return std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H); }
double gamma_of(double H, double t) { return std::pow(t, 2.0 * H) / (2.0 * H); }

}  // namespace

void validate(const ProcessSpec& spec) {
  if (uses_hurst(spec.kind)) check_hurst(spec.H);
  if (spec.kind == ProcessKind::OU && !(spec.theta > 0.0 && spec.sigma2 > 0.0))
    throw DomainError("OU needs theta > 0 and sigma2 > 0");
  if (spec.kind == ProcessKind::AR) check_ar(spec.ar);
  if (on_window(spec.kind) && !(spec.r > 0.0)) throw DomainError("window r must be positive");
}

double fbm_chain_density_constant(double H) {
  check_hurst(H);
  const double g = std::tgamma(1.0 - H);
  return std::numbers::pi / (std::pow(2.0, 1.0 - 2.0 * H) * g * g);
}

double fbm_standard_density_constant(double H) {
  check_hurst(H);
  return std::tgamma(1.0 + 2.0 * H) * std::sin(H * std::numbers::pi) / (2.0 * std::numbers::pi);
}

double chain_scale(double H) { return fbm_chain_density_constant(H) / fbm_standard_density_constant(H); }

namespace {

// Taylor coefficients at L of prod_k 1 / (l^2 + phi_k^2), up to order M.
std::vector<double> inv_poly_taylor(const ArSpec& a, double L, std::size_t M) {
  std::vector<double> f(M + 1, 0.0);
  f[0] = 1.0;
  for (double p : a.phi) {
    const double q = L * L + p * p;
    std::vector<double> g(M + 1, 0.0);
    g[0] = 1.0 / q;
    for (std::size_t m = 1; m <= M; ++m) g[m] = -(2.0 * L * g[m - 1] + (m >= 2 ? g[m - 2] : 0.0)) / q;
    std::vector<double> h(M + 1, 0.0);
    for (std::size_t i = 0; i <= M; ++i)
      for (std::size_t j = 0; i + j <= M; ++j) h[i + j] += f[i] * g[j];
    f = h;
  }
  return f;
}

}  // namespace

double stationary_covariance_quadrature(const ProcessSpec& spec, double tau) {
  if (spec.kind != ProcessKind::OU && spec.kind != ProcessKind::AR)
    throw DomainError("stationary_covariance_quadrature: OU or AR kind required");
  validate(spec);
  const ArSpec a = spec.kind == ProcessKind::OU ? ArSpec{{spec.theta}, spec.sigma2} : spec.ar;
  const double c = a.sigma2 / (2.0 * std::numbers::pi);
  const double pmin = *std::min_element(a.phi.begin(), a.phi.end());
  const double pmax = *std::max_element(a.phi.begin(), a.phi.end());
  const double at = std::fabs(tau);
  // Panels up to L, then an analytic tail. L tau >= 200 keeps the
  // integration-by-parts series of the tail far inside its useful range.
  const double L = at > 0.0 ? std::max(8.0 * pmax, 200.0 / at) : 8.0 * pmax;
  const double cap = at > 0.0 ? std::numbers::pi / (4.0 * at) : L;
  std::vector<double> br{0.0};
  while (br.back() < L) {
    const double x = br.back();
    br.push_back(std::min(L, x + std::min(cap, 0.25 * (pmin + x))));
  }
  const QuadRule q = composite_rule(br, 16);
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::cos(q.x[i] * at) * spectral_density(spec, q.x[i]);
  if (at == 0.0) {
    // l = L / u maps the tail onto a smooth integrand on (0, 1].
    const QuadRule& g = gauss_legendre(64);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      const double u = 0.5 * (g.x[i] + 1.0);
      s += 0.5 * g.w[i] * spectral_density(spec, L / u) * L / (u * u);
    }
  } else {
    // I(f) = -f sin/tau - f' cos/tau^2 - I(f'')/tau^2 at l = L.
    const std::size_t M = 13;
    const std::vector<double> t = inv_poly_taylor(a, L, M);
    const double sn = std::sin(L * at), cs = std::cos(L * at);
    double fact = 1.0, sign = -1.0, tail = 0.0, scale = 1.0;
    std::vector<double> d(M + 1);
    for (std::size_t m = 0; m <= M; ++m) {
      if (m > 0) fact *= static_cast<double>(m);
      d[m] = c * fact * t[m];
    }
    for (std::size_t k = 0; 2 * k + 1 <= M; ++k) {
      tail += sign * scale * (d[2 * k] * sn / at + d[2 * k + 1] * cs / (at * at));
      sign = -sign;
      scale /= at * at;
    }
    s += tail;
  }
  return 2.0 * s;
}

double ar_covariance(const ArSpec& a, double tau) {
  check_ar(a);
  const std::size_t n = a.phi.size();
  bool separated = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::fabs(a.phi[i] - a.phi[j]) < 1e-3 * std::max(a.phi[i], a.phi[j])) separated = false;
  if (!separated) return stationary_covariance_quadrature(ProcessSpec::autoregressive(a), tau);
  const double at = std::fabs(tau);
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pk = a.phi[k];
    double den = 2.0 * pk;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) den *= a.phi[j] * a.phi[j] - pk * pk;
    s += std::exp(-pk * at) / den;
  }
  return a.sigma2 * s;
}

double covariance(const ProcessSpec& spec, double s, double t) {
  validate(spec);
  if (on_window(spec.kind)) {
    const double eps = 1e-12 * spec.r;
    if (s < -eps || t < -eps || s > spec.r + eps || t > spec.r + eps)
      throw DomainError("covariance: time outside the bridge window");
    s = std::clamp(s, 0.0, spec.r);
    t = std::clamp(t, 0.0, spec.r);
  }
  const double H = spec.H;
  const bool halfline = spec.kind != ProcessKind::FBM && spec.kind != ProcessKind::OU && spec.kind != ProcessKind::AR;
  if (halfline && (s < 0.0 || t < 0.0)) throw DomainError("covariance: negative time");
  const double m = std::min(s, t);
  const double pis = spec.pi_scaled ? std::numbers::pi : 1.0;
  switch (spec.kind) {
    case ProcessKind::FBM:
      return fbm_scale(spec) * 0.5 * (vpow(s, H) + vpow(t, H) - vpow(t - s, H));
    case ProcessKind::FBMEven:
      return fbm_scale(spec) * 0.25 * (vpow(s + t, H) - vpow(s - t, H));
    case ProcessKind::FBMOdd:
      return fbm_scale(spec) * 0.25 * (2.0 * (vpow(s, H) + vpow(t, H)) - vpow(s + t, H) - vpow(s - t, H));
    case ProcessKind::OU:
      return spec.sigma2 / (2.0 * spec.theta) * std::exp(-spec.theta * std::fabs(t - s));
    case ProcessKind::AR:
      return ar_covariance(spec.ar, t - s);
    case ProcessKind::EvenMartingale:
    case ProcessKind::SingleSidedMartingale:
      return pis * alpha_of(H, m);
    case ProcessKind::OddMartingale:
      return pis * gamma_of(H, m);
    case ProcessKind::EvenBridge:
      return pis * (alpha_of(H, m) - alpha_of(H, s) * alpha_of(H, t) / alpha_of(H, spec.r));
    case ProcessKind::OddBridge:
      return pis * (gamma_of(H, m) - gamma_of(H, s) * gamma_of(H, t) / gamma_of(H, spec.r));
    case ProcessKind::InverseEvenBridge: {
      const double r = spec.r, M = std::max(s, t);
      return pis * (alpha_of(H, r - M) - alpha_of(H, r - s) * alpha_of(H, r - t) / alpha_of(H, r));
    }
    case ProcessKind::AlphaWienerBridge: {
      // (r-s)^{1/2-H} (r-t)^{1/2-H} E[X^(a)_s X^(a)_t], a = 3/2 - H, with
      // E[X^(a)_s X^(a)_t] = ((r-s)(r-t))^a int_0^{s^t} (r-u)^{-2a} du.
      const double r = spec.r;
      if (s >= r || t >= r) return 0.0;
      const double p = 2.0 - 2.0 * H;
      const double integral = (std::pow(r - m, -p) - std::pow(r, -p)) / p;
      return std::pow(r - s, p) * std::pow(r - t, p) * integral;
    }
    case ProcessKind::BrownianMotion:
      return m;
    case ProcessKind::BrownianBridge:
      return m - s * t / spec.r;
  }
  return 0.0;
}

double spectral_density(const ProcessSpec& spec, double lambda) {
  validate(spec);
  switch (spec.kind) {
    case ProcessKind::FBM:
    case ProcessKind::FBMEven:
    case ProcessKind::FBMOdd: {
      const double H = spec.H;
      const double c = spec.norm == FbmNorm::Chain ? fbm_chain_density_constant(H) : fbm_standard_density_constant(H);
      if (lambda == 0.0) {
        if (H > 0.5) throw DomainError("spectral_density: FBM density singular at 0 for H > 1/2");
        return H == 0.5 ? c : 0.0;
      }
      return c * std::pow(std::fabs(lambda), 1.0 - 2.0 * H);
    }
    case ProcessKind::OU:
      return spec.sigma2 / (2.0 * std::numbers::pi * (lambda * lambda + spec.theta * spec.theta));
    case ProcessKind::AR:
      return spec.ar.sigma2 / (2.0 * std::numbers::pi * std::norm(ar_theta(spec.ar, lambda)));
    default:
      throw DomainError("spectral_density: kind has no spectral density");
  }
}

CovarianceMatrix covariance_matrix(const ProcessSpec& spec, const std::vector<double>& grid, bool check_psd) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("covariance_matrix: grid must be ascending");
  CovarianceMatrix cm;
  cm.grid = grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  cm.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double v = covariance(spec, grid[i], grid[j]);
      cm.values(i, j) = cm.values(j, i) = v;
    }
  if (check_psd && n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cm.values, Eigen::EigenvaluesOnly);
    cm.min_eigenvalue = es.eigenvalues().minCoeff();
    const double tr = cm.values.trace();
    if (cm.min_eigenvalue < -1e-8 * std::max(tr, 1e-300)) {
      cm.psd = false;
      cm.warning = "covariance matrix is not positive semidefinite within tolerance";
    }
  }
  return cm;
}

}  // namespace sg
