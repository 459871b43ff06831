#include <cmath>
#include <limits>
#include <numbers>

#include "spectralgauss/specfun.hpp"

namespace sg {

double refine_root(const std::function<double(double)>& f, double a, double b,
                   const RootOptions& opt) {
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) throw NumericError("refine_root: non-finite bracket value");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) throw NumericError("refine_root: bracket has no sign change");
  const double scale = std::max(std::fabs(fa), std::fabs(fb));
  double c = a, fc = fa, d = b - a, e = d;
  for (int it = 0; it < opt.max_iter; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
                       0.5 * opt.xtol * std::fabs(b);
    const double m = 0.5 * (c - b);
    if (std::fabs(m) <= tol || fb == 0.0 || std::fabs(fb) <= opt.ftol * 1e-3 * scale) return b;
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q; else p = -p;
      if (2.0 * p < std::min(3.0 * m * q - std::fabs(tol * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol) ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (!std::isfinite(fb)) throw NumericError("refine_root: non-finite function value");
  }
  return b;
}

RootList find_roots(const std::function<double(double)>& f, double lo, double hi,
                    double scan_step, std::size_t count, const RootOptions& opt) {
  if (!(lo < hi)) throw DomainError("find_roots: lo must be below hi");
  if (!(scan_step > 0.0)) throw DomainError("find_roots: scan step must be positive");
  RootList out;
  if (count == 0) return out;
  double x0 = lo;
  double f0 = f(x0);
  if (!std::isfinite(f0)) throw NumericError("find_roots: non-finite value on scan point");
  const auto n_steps = static_cast<long long>(std::ceil((hi - lo) / scan_step));
  for (long long i = 1; i <= n_steps && out.size() < count; ++i) {
    const double x1 = (i == n_steps) ? hi : lo + static_cast<double>(i) * scan_step;
    const double f1 = f(x1);
    if (!std::isfinite(f1)) throw NumericError("find_roots: non-finite value on scan point");
    double root = std::numeric_limits<double>::quiet_NaN();
    if (f0 == 0.0) {
      if (out.roots.empty() || out.roots.back() < x0) root = x0;
    } else if ((f0 > 0.0) != (f1 > 0.0) && f1 != 0.0) {
      root = refine_root(f, x0, x1, opt);
      // A sign change across a pole refines onto the pole; reject it.
      const double scale = std::max({std::fabs(f0), std::fabs(f1), 1.0});
      if (std::fabs(f(root)) > 1e-6 * scale) root = std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isfinite(root)) {
      out.roots.push_back(root);
      out.residuals.push_back(std::fabs(f(root)));
    }
    x0 = x1;
    f0 = f1;
  }
  if (out.size() < count && f0 == 0.0 && (out.roots.empty() || out.roots.back() < x0)) {
    out.roots.push_back(x0);
    out.residuals.push_back(0.0);
  }
  return out;
}

RootList bessel_zeros(double nu, double r, std::size_t count, const RootOptions& opt) {
  if (!(nu > -1.0)) throw DomainError("bessel_zeros: order must exceed -1");
  if (!(r > 0.0)) throw DomainError("bessel_zeros: r must be positive");
  RootList out;
  if (count == 0) return out;
  const auto f = [nu](double x) { return bessel_j(nu, x); };
  // McMahon estimate of the last zero bounds the scan; J_nu is positive near 0.
  const double beta = (static_cast<double>(count) + 0.5 * nu - 0.25) * std::numbers::pi;
  const double hi = beta + 2.0 * std::numbers::pi;
  const double step = 0.25 * std::numbers::pi;
  const double lo = 1e-8;
  RootList x = find_roots(f, lo, hi, step, count, opt);
  if (x.size() < count) throw NumericError("bessel_zeros: scan found fewer zeros than requested");
  out.roots.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.roots.push_back(x.roots[i] / r);
    out.residuals.push_back(x.residuals[i]);
  }
  return out;
}

}  // namespace sg
