#include "spectralgauss/kl.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "spectralgauss/processes.hpp"
#include "spectralgauss/quadrature.hpp"

namespace sg {

namespace {

constexpr double kPi = std::numbers::pi;
using cplx = std::complex<double>;

double alpha_of(double H, double t) { return std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H); }
double gamma_of(double H, double t) { return std::pow(t, 2.0 * H) / (2.0 * H); }
double alpha_p(double H, double t) { return std::pow(t, 1.0 - 2.0 * H); }
double gamma_p(double H, double t) { return std::pow(t, 2.0 * H - 1.0); }

// Quadrature norm on [0, r] of a function.
double l2_norm2(const std::function<double(double)>& f, double r) {
  const QuadRule q = composite_graded(0.0, r, 64, 20, 16);
  double s = 0.0;
  for (std::size_t i = 0; i < q.x.size(); ++i) {
    const double v = f(q.x[i]);
    s += q.w[i] * v * v;
  }
  return s;
}

// Sign convention: eigenfunctions are positive just to the right of 0.
double orientation(const std::function<double(double)>& f, double r) {
  for (double t : {1e-3 * r, 1e-2 * r, 0.05 * r, 0.2 * r}) {
    const double v = f(t);
    if (v != 0.0) return v > 0.0 ? 1.0 : -1.0;
  }
  return 1.0;
}

void push(KLBasis& b, double eps, double w, double res, std::function<double(double)> f,
          std::map<std::string, double> p) {
  b.eigenvalues.push_back(eps);
  b.freq.push_back(w);
  b.residuals.push_back(res);
  b.phi_fn.push_back(std::move(f));
  b.params.push_back(std::move(p));
}

void check_count(std::size_t got, std::size_t N) {
  if (got < N) throw NumericError("root scan found fewer roots than requested");
}

KLBasis trig_basis(const KLKernelSpec& spec, double r, std::size_t N, bool bridge) {
  KLBasis b;
  b.spec = spec;
  b.r = r;
  for (std::size_t n = 1; n <= N; ++n) {
    const double w = (bridge ? static_cast<double>(n) : static_cast<double>(n) - 0.5) * kPi / r;
    const double c = std::sqrt(2.0 / r);
    push(b, 1.0 / (w * w), w, 0.0, [c, w](double t) { return c * std::sin(w * t); }, {{"w", w}});
  }
  if (bridge)
    b.kernel_fn = [r](double s, double t) { return std::min(s, t) - s * t / r; };
  else
    b.kernel_fn = [](double s, double t) { return std::min(s, t); };
  return b;
}

// Bessel families of the FBM chain. Even kinds use B_t / sqrt(alpha'_t) in
// L^2(dgamma); odd kinds use C_t / sqrt(gamma'_t) in L^2(dalpha).
KLBasis fbm_basis(const KLKernelSpec& spec, double r, std::size_t N) {
  const double H = spec.H;
  check_hurst(H);
  const bool even = spec.kind == KLKernel::FBMEvenMartingale || spec.kind == KLKernel::FBMEvenBridge;
  const bool bridge = spec.kind == KLKernel::FBMEvenBridge || spec.kind == KLKernel::FBMOddBridge;
  double nu = 0.0;
  switch (spec.kind) {
    case KLKernel::FBMEvenMartingale: nu = -H; break;
    case KLKernel::FBMEvenBridge: nu = 1.0 - H; break;
    case KLKernel::FBMOddMartingale: nu = H - 1.0; break;
    default: nu = H; break;
  }
  const RootList z = bessel_zeros(nu, r, N);
  check_count(z.size(), N);
  KLBasis b;
  b.spec = spec;
  b.r = r;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double l = z.roots[i];
    const ChainComponents c = fbm_components(H, r, l);
    const ChainComponents d = fbm_components_dz(H, r, l);
    double norm2 = 0.0;
    if (even)
      norm2 = bridge ? 0.5 * c.A * d.B : -0.5 * c.B * d.A;
    else
      norm2 = bridge ? -0.5 * c.D * d.C : 0.5 * c.C * d.D;
    if (!(norm2 > 0.0)) throw NumericError("non-positive eigenfunction norm");
    const double inv = 1.0 / std::sqrt(norm2);
    std::function<double(double)> f;
    if (even)
      f = [H, l, inv](double t) {
        if (t <= 0.0) return 0.0;
        return inv * fbm_components(H, t, l).B / std::sqrt(alpha_p(H, t));
      };
    else
      f = [H, l, inv](double t) {
        if (t <= 0.0) return 0.0;
        return inv * fbm_components(H, t, l).C / std::sqrt(gamma_p(H, t));
      };
    const double sgn = orientation(f, r);
    std::function<double(double)> g = [f, sgn](double t) { return sgn * f(t); };
    push(b, 1.0 / (l * l), l, z.residuals[i], g, {{"lambda", l}, {"order", nu}, {"norm2", norm2}});
  }
  if (even) {
    const double ar = alpha_of(H, r);
    b.kernel_fn = [H, ar, bridge](double s, double t) {
      if (s <= 0.0 || t <= 0.0) return 0.0;
      double k = alpha_of(H, std::min(s, t));
      if (bridge) k -= alpha_of(H, s) * alpha_of(H, t) / ar;
      return k / std::sqrt(alpha_p(H, s) * alpha_p(H, t));
    };
  } else {
    const double gr = gamma_of(H, r);
    b.kernel_fn = [H, gr, bridge](double s, double t) {
      if (s <= 0.0 || t <= 0.0) return 0.0;
      double k = gamma_of(H, std::min(s, t));
      if (bridge) k -= gamma_of(H, s) * gamma_of(H, t) / gr;
      return k / std::sqrt(gamma_p(H, s) * gamma_p(H, t));
    };
  }
  return b;
}

RootList phase_roots(const ArSpec& a, double r, std::size_t N, double mult) {
  const double n = static_cast<double>(a.phi.size());
  RootList out;
  for (std::size_t k = 1; k <= N; ++k) {
    const double target = kPi * static_cast<double>(k);
    auto f = [&](double l) {
      double v = r * l - target;
      for (double p : a.phi) v += mult * std::atan(l / p);
      return v;
    };
    const double lo = std::max(0.0, (target - 0.5 * kPi * n * mult) / r);
    const double hi = target / r;
    const double x = f(hi) == 0.0 ? hi : refine_root(f, lo, hi);
    out.roots.push_back(x);
    const double th = std::sqrt(std::norm(ar_theta_normalized(a, x)));
    out.residuals.push_back(std::fabs(ar_squared_oddcomp(a, r, x)) / (th * th));
  }
  return out;
}

KLBasis ou_basis(const KLKernelSpec& spec, double r, std::size_t N) {
  const double th = spec.theta, s2 = spec.sigma2;
  if (!(th > 0.0 && s2 > 0.0)) throw DomainError("OU needs theta > 0 and sigma2 > 0");
  const RootList z = phase_roots(ArSpec{{th}, s2}, r, N, 2.0);
  KLBasis b;
  b.spec = spec;
  b.r = r;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double w = z.roots[i];
    const double a_closed = std::sqrt(2.0 * w * w / (r * (w * w + th * th) + 2.0 * th));
    auto raw = [w, th](double t) { return std::cos(w * t) + th / w * std::sin(w * t); };
    const double a = 1.0 / std::sqrt(l2_norm2(raw, r));
    push(b, s2 / (w * w + th * th), w, z.residuals[i], [raw, a](double t) { return a * raw(t); },
         {{"w", w}, {"a", a}, {"b", a * th / w}, {"a_closed", a_closed}});
  }
  b.kernel_fn = [th, s2](double s, double t) { return s2 / (2.0 * th) * std::exp(-th * std::fabs(s - t)); };
  return b;
}

// Fundamental solutions of sigma^2 phi = eps |Theta(d/dt)|^2 phi at frequency w:
// cos, sin and the remaining characteristic exponents, each as Re/Im of exp(xi (t - shift)).
struct ArMode {
  cplx xi;
  double shift = 0.0;
  bool imag = false;
};

bool ar_modes(const ArSpec& a, double r, double w, std::vector<ArMode>& modes) {
  const std::size_t n = a.phi.size();
  modes.clear();
  modes.push_back({cplx(0.0, w), 0.0, false});
  modes.push_back({cplx(0.0, w), 0.0, true});
  if (n == 1) return true;
  // prod(phi_k^2 - v) - prod(phi_k^2 + w^2), coefficients low to high.
  std::vector<double> p{1.0};
  double c = 1.0;
  for (double ph : a.phi) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i] += ph * ph * p[i];
      q[i + 1] -= p[i];
    }
    p = q;
    c *= ph * ph + w * w;
  }
  p[0] -= c;
  // Deflate the known root v = -w^2.
  const double v0 = -w * w;
  std::vector<double> q(n, 0.0);
  q[n - 1] = p[n];
  for (std::size_t k = n - 1; k > 0; --k) q[k - 1] = p[k] + v0 * q[k];
  const std::size_t m = n - 1;
  std::vector<cplx> roots;
  if (m == 1) {
    roots.push_back(-q[0] / q[1]);
  } else {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) comp(0, static_cast<Eigen::Index>(i)) = -q[m - 1 - i] / q[m];
    for (std::size_t i = 1; i < m; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) roots.push_back(es.eigenvalues()(i));
  }
  std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const cplx v = roots[i];
    const double scale = std::max(1.0, std::abs(v));
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[j] - v) < 1e-7 * scale) return false;  // colliding exponents
    if (std::fabs(v.imag()) <= 1e-10 * scale) {
      const double vr = v.real();
      if (std::fabs(vr) < 1e-12 * scale) return false;
      if (vr > 0.0) {
        const double x = std::sqrt(vr);
        modes.push_back({cplx(x, 0.0), r, false});
        modes.push_back({cplx(-x, 0.0), 0.0, false});
      } else {
        const double x = std::sqrt(-vr);
        modes.push_back({cplx(0.0, x), 0.0, false});
        modes.push_back({cplx(0.0, x), 0.0, true});
      }
    } else if (v.imag() > 0.0) {
      const cplx x = std::sqrt(v);
      for (bool im : {false, true}) {
        modes.push_back({x, r, im});
        modes.push_back({-x, 0.0, im});
      }
    }
  }
  return modes.size() == 2 * n;
}

cplx theta_at(const ArSpec& a, cplx x, double sign) {
  cplx v(1.0, 0.0);
  for (double p : a.phi) v *= sign * x - p;
  return v;
}

// Boundary matrix: rows D^j Theta(D) at 0 and D^j Theta(-D) at r, j < n.
bool ar_matrix(const ArSpec& a, double r, double w, Eigen::MatrixXd& M, std::vector<ArMode>& modes,
               Eigen::VectorXd& colscale) {
  if (!ar_modes(a, r, w, modes)) return false;
  const std::size_t n = a.phi.size();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  M.resize(dim, dim);
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const ArMode& md = modes[k];
    const cplx t0 = theta_at(a, md.xi, 1.0) * std::exp(md.xi * (0.0 - md.shift));
    const cplx t1 = theta_at(a, md.xi, -1.0) * std::exp(md.xi * (r - md.shift));
    cplx pw(1.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const cplx u0 = pw * t0, u1 = pw * t1;
      M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = md.imag ? u0.imag() : u0.real();
      M(static_cast<Eigen::Index>(n + j), static_cast<Eigen::Index>(k)) = md.imag ? u1.imag() : u1.real();
      pw *= md.xi;
    }
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double rn = M.row(i).norm();
    if (rn > 0.0) M.row(i) /= rn;
  }
  colscale.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double cn = M.col(k).norm();
    colscale(k) = cn > 0.0 ? cn : 1.0;
    M.col(k) /= colscale(k);
  }
  return true;
}

KLBasis ar_basis(const KLKernelSpec& spec, double r, std::size_t N) {
  const ArSpec a = spec.ar;
  check_ar(a);
  const RootList z = ar_kl_roots(a, r, N);
  check_count(z.size(), N);
  const RootList b1 = ar_b1_roots(a, r, N);
  KLBasis b;
  b.spec = spec;
  b.r = r;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double w = z.roots[i];
    Eigen::MatrixXd M;
    std::vector<ArMode> modes;
    Eigen::VectorXd cs;
    if (!ar_matrix(a, r, w, M, modes, cs)) throw NumericError("degenerate AR boundary system");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const Eigen::VectorXd v = svd.matrixV().col(M.cols() - 1);
    std::vector<double> coef(modes.size());
    for (std::size_t k = 0; k < modes.size(); ++k) coef[k] = v(static_cast<Eigen::Index>(k)) / cs(static_cast<Eigen::Index>(k));
    auto raw = [modes, coef](double t) {
      double s = 0.0;
      for (std::size_t k = 0; k < modes.size(); ++k) {
        const cplx e = std::exp(modes[k].xi * (t - modes[k].shift));
        s += coef[k] * (modes[k].imag ? e.imag() : e.real());
      }
      return s;
    };
    const double sgn = orientation(raw, r);
    const double c = sgn / std::sqrt(l2_norm2(raw, r));
    const double mod2 = std::norm(ar_theta(a, w));
    // The trigonometric candidate at the zeros of B^1_r, kept for comparison.
    const double wb = b1.roots[i];
    const std::complex<double> th = ar_theta_normalized(a, wb);
    const double re = th.real(), im = th.imag();
    auto trig = [&a, wb](double t) { return ar_components(a, t, wb).B; };
    const double thm_norm2 = 0.5 * ((re * re + im * im) * r + 2.0 * re * im);
    const double grad_norm2 =
        0.5 * ((re * re + im * im) * r + (im * im - re * re) * std::sin(wb * r) * std::cos(wb * r) / wb -
               2.0 * re * im * std::sin(wb * r) * std::sin(wb * r) / wb);
    push(b, a.sigma2 / mod2, w, z.residuals[i], [raw, c](double t) { return c * raw(t); },
         {{"w", w},
          {"trig_w", wb},
          {"trig_eigenvalue", a.sigma2 / std::norm(ar_theta(a, wb))},
          {"trig_norm2_quadrature", l2_norm2(trig, r)},
          {"trig_norm2_theorem", thm_norm2},
          {"trig_norm2_gradient", grad_norm2},
          {"smallest_singular", svd.singularValues()(M.cols() - 1)}});
  }
  b.kernel_fn = [a](double s, double t) { return ar_covariance(a, t - s); };
  return b;
}

}  // namespace

KLKernelSpec KLKernelSpec::bm() { return KLKernelSpec{}; }
KLKernelSpec KLKernelSpec::bm_bridge() {
  KLKernelSpec s;
  s.kind = KLKernel::BMBridge;
  return s;
}
KLKernelSpec KLKernelSpec::fbm_even_martingale(double H) {
  KLKernelSpec s;
  s.kind = KLKernel::FBMEvenMartingale;
  s.H = H;
  return s;
}
KLKernelSpec KLKernelSpec::fbm_odd_martingale(double H) {
  KLKernelSpec s = fbm_even_martingale(H);
  s.kind = KLKernel::FBMOddMartingale;
  return s;
}
KLKernelSpec KLKernelSpec::fbm_even_bridge(double H) {
  KLKernelSpec s = fbm_even_martingale(H);
  s.kind = KLKernel::FBMEvenBridge;
  return s;
}
KLKernelSpec KLKernelSpec::fbm_odd_bridge(double H) {
  KLKernelSpec s = fbm_even_martingale(H);
  s.kind = KLKernel::FBMOddBridge;
  return s;
}
KLKernelSpec KLKernelSpec::ou(double theta, double sigma2) {
  KLKernelSpec s;
  s.kind = KLKernel::OU;
  s.theta = theta;
  s.sigma2 = sigma2;
  return s;
}
KLKernelSpec KLKernelSpec::autoregressive(const ArSpec& a) {
  KLKernelSpec s;
  s.kind = KLKernel::AR;
  s.ar = a;
  s.sigma2 = a.sigma2;
  return s;
}
KLKernelSpec KLKernelSpec::extended_bridge(double H, std::function<double(double)> kappa, Parity p, KappaForm form) {
  KLKernelSpec s;
  s.kind = p == Parity::Even ? KLKernel::ExtendedEvenBridge : KLKernel::ExtendedOddBridge;
  s.H = H;
  s.kappa = std::move(kappa);
  s.kappa_form = form;
  return s;
}

std::string kernel_name(KLKernel k) {
  switch (k) {
    case KLKernel::BM: return "bm";
    case KLKernel::BMBridge: return "bm_bridge";
    case KLKernel::FBMEvenMartingale: return "fbm_even_martingale";
    case KLKernel::FBMOddMartingale: return "fbm_odd_martingale";
    case KLKernel::FBMEvenBridge: return "fbm_even_bridge";
    case KLKernel::FBMOddBridge: return "fbm_odd_bridge";
    case KLKernel::OU: return "ou";
    case KLKernel::AR: return "ar";
    case KLKernel::ExtendedEvenBridge: return "extended_even_bridge";
    case KLKernel::ExtendedOddBridge: return "extended_odd_bridge";
  }
  return "unknown";
}

double KLBasis::weight(std::size_t n) const { return std::sqrt(eigenvalues.at(n)); }

double KLBasis::phi(std::size_t n, double t) const {
  if (t < -1e-12 * r || t > r * (1.0 + 1e-12)) throw DomainError("eigenfunction evaluated outside [0, r]");
  return phi_fn.at(n)(std::clamp(t, 0.0, r));
}

double KLBasis::kernel(double s, double t) const { return kernel_fn(s, t); }

double KLBasis::mercer(double s, double t, std::size_t n) const {
  n = std::min(n, size());
  double acc = 0.0;
  for (std::size_t i = n; i-- > 0;) acc += eigenvalues[i] * phi(i, s) * phi(i, t);
  return acc;
}

std::vector<std::vector<double>> KLBasis::gram(std::size_t n, std::size_t panels, std::size_t order) const {
  n = std::min(n, size());
  const QuadRule q = composite_uniform(0.0, r, panels, order);
  std::vector<std::vector<double>> vals(n, std::vector<double>(q.x.size()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < q.x.size(); ++k) vals[i][k] = phi(i, q.x[k]);
  std::vector<std::vector<double>> G(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < q.x.size(); ++k) s += q.w[k] * vals[i][k] * vals[j][k];
      G[i][j] = G[j][i] = s;
    }
  return G;
}

RootList ar_b1_roots(const ArSpec& a, double r, std::size_t N) {
  check_ar(a);
  if (!(r > 0.0)) throw DomainError("r must be positive");
  return phase_roots(a, r, N, 2.0);
}

double ar_kl_det(const ArSpec& a, double r, double w) {
  Eigen::MatrixXd M;
  std::vector<ArMode> modes;
  Eigen::VectorXd cs;
  if (!ar_matrix(a, r, w, M, modes, cs)) return std::numeric_limits<double>::quiet_NaN();
  return M.partialPivLu().determinant();
}

RootList ar_kl_roots(const ArSpec& a, double r, std::size_t N) {
  check_ar(a);
  if (!(r > 0.0)) throw DomainError("r must be positive");
  if (a.phi.size() == 1) return phase_roots(a, r, N, 2.0);
  auto f = [&](double w) {
    const double d = ar_kl_det(a, r, w);
    return std::isfinite(d) ? d : 1.0;
  };
  const double hi = (static_cast<double>(N) + 2.0) * kPi / r;
  RootList z = find_roots(f, 1e-6 / r, hi, kPi / (32.0 * r), N);
  check_count(z.size(), N);
  return z;
}

KLBasis kl_basis(const KLKernelSpec& spec, double r, std::size_t N) {
  if (!(r > 0.0)) throw DomainError("kl_basis: r must be positive");
  if (N < 1) throw DomainError("kl_basis: N must be positive");
  switch (spec.kind) {
    case KLKernel::BM: return trig_basis(spec, r, N, false);
    case KLKernel::BMBridge: return trig_basis(spec, r, N, true);
    case KLKernel::FBMEvenMartingale:
    case KLKernel::FBMOddMartingale:
    case KLKernel::FBMEvenBridge:
    case KLKernel::FBMOddBridge: return fbm_basis(spec, r, N);
    case KLKernel::OU: return ou_basis(spec, r, N);
    case KLKernel::AR: return ar_basis(spec, r, N);
    case KLKernel::ExtendedEvenBridge:
    case KLKernel::ExtendedOddBridge:
      if (!spec.kappa) throw ConfigError("extended bridge needs a kappa function");
      return extended_bridge_basis(spec.H, r, spec.kappa, N,
                                   spec.kind == KLKernel::ExtendedEvenBridge ? Parity::Even : Parity::Odd,
                                   spec.kappa_form, spec.generic_G);
  }
  throw ConfigError("kl_basis: unknown kernel");
}

}  // namespace sg
