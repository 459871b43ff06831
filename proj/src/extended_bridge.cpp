#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <unordered_map>

#include "spectralgauss/kl.hpp"
#include "spectralgauss/quadrature.hpp"

namespace sg {

namespace {

// Chain seen through the parity: the odd problem is the even one with
// alpha <-> gamma and (A, B, C, D) -> (D, -C, -B, A).
struct Roles {
  double H = 0.5;
  bool even = true;

  ChainComponents comps(double t, double z) const {
    const ChainComponents c = fbm_components(H, t, z);
    if (even) return c;
    return ChainComponents{c.D, -c.C, -c.B, c.A};
  }
  double m1(double t) const { return even ? std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H) : std::pow(t, 2.0 * H) / (2.0 * H); }
  double m1p(double t) const { return even ? std::pow(t, 1.0 - 2.0 * H) : std::pow(t, 2.0 * H - 1.0); }
  double m2p(double t) const { return even ? std::pow(t, 2.0 * H - 1.0) : std::pow(t, 1.0 - 2.0 * H); }
  // Bessel order of the zeros of A~_r (the matching martingale spectrum).
  double martingale_order() const { return even ? -H : H - 1.0; }
};

// Graded composite Gauss grid with per-panel cumulative integration.
struct CumGrid {
  std::vector<double> t, w;
  std::vector<std::size_t> panel_start;
  std::vector<double> half;
  std::size_t order = 16;
  std::vector<double> S;  // order x order, row-major

  CumGrid(double r, std::size_t panels, std::size_t levels, std::size_t q) : order(q) {
    std::vector<double> br{0.0};
    const double h = r / static_cast<double>(panels);
    for (std::size_t l = levels; l > 0; --l) br.push_back(h * std::ldexp(1.0, -static_cast<int>(l)));
    for (std::size_t i = 1; i <= panels; ++i) br.push_back(h * static_cast<double>(i));
    br.back() = r;
    const QuadRule& g = gauss_legendre(q);
    for (std::size_t p = 0; p + 1 < br.size(); ++p) {
      const double c = 0.5 * (br[p] + br[p + 1]), hw = 0.5 * (br[p + 1] - br[p]);
      panel_start.push_back(t.size());
      half.push_back(hw);
      for (std::size_t i = 0; i < q; ++i) {
        t.push_back(c + hw * g.x[i]);
        w.push_back(hw * g.w[i]);
      }
    }
    // S_ij = int_{-1}^{x_i} l_j(x) dx through the Legendre expansion of l_j.
    S.assign(q * q, 0.0);
    auto legendre = [q](double x) {
      std::vector<double> P(q + 1);
      P[0] = 1.0;
      if (q >= 1) P[1] = x;
      for (std::size_t k = 2; k <= q; ++k)
        P[k] = ((2.0 * k - 1.0) * x * P[k - 1] - (k - 1.0) * P[k - 2]) / static_cast<double>(k);
      return P;
    };
    std::vector<std::vector<double>> Pn(q);
    for (std::size_t i = 0; i < q; ++i) Pn[i] = legendre(g.x[i]);
    for (std::size_t i = 0; i < q; ++i)
      for (std::size_t j = 0; j < q; ++j) {
        double s = 0.5 * (g.x[i] + 1.0);
        for (std::size_t k = 1; k < q; ++k) s += 0.5 * Pn[j][k] * (Pn[i][k + 1] - Pn[i][k - 1]);
        S[i * q + j] = g.w[j] * s;
      }
  }

  std::size_t size() const { return t.size(); }

  // Running integral int_0^{t_k} f at every node, from node values of f.
  std::vector<double> cumulative(const std::vector<double>& f) const {
    std::vector<double> out(f.size());
    double base = 0.0;
    for (std::size_t p = 0; p < panel_start.size(); ++p) {
      const std::size_t s = panel_start[p];
      for (std::size_t i = 0; i < order; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < order; ++j) acc += S[i * order + j] * f[s + j];
        out[s + i] = base + half[p] * acc;
      }
      for (std::size_t j = 0; j < order; ++j) base += w[s + j] * f[s + j];
    }
    return out;
  }

  double total(const std::vector<double>& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += w[i] * f[i];
    return s;
  }
};

struct Problem {
  Roles roles;
  double r = 1.0;
  std::function<double(double)> kappa;
  bool closed = false;
  CumGrid grid;
  std::vector<double> kap, m1p, m2p, g;
  double kappa_norm2 = 0.0;

  Problem(double H, double r_, const std::function<double(double)>& k, Parity parity, KappaForm form, bool generic)
      : r(r_), grid(r_, 32, 30, 16) {
    check_hurst(H);
    if (!(r > 0.0)) throw DomainError("extended bridge: r must be positive");
    roles = Roles{H, parity == Parity::Even};
    const bool special = (roles.even && form == KappaForm::Gamma) || (!roles.even && form == KappaForm::Alpha);
    if (k)
      kappa = k;
    else if (special)
      kappa = [H, even = roles.even](double t) {
        return even ? std::pow(t, 2.0 * H) / (2.0 * H) : std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H);
      };
    else
      throw ConfigError("extended bridge needs a kappa function");
    closed = special && !generic;
    const std::size_t n = grid.size();
    kap.resize(n);
    m1p.resize(n);
    m2p.resize(n);
    std::vector<double> dg(n), k2(n);
    double kmin = INFINITY, kmax = -INFINITY, kabs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.t[i];
      kap[i] = kappa(t);
      if (!std::isfinite(kap[i])) throw DomainError("kappa is not finite on (0, r]");
      m1p[i] = roles.m1p(t);
      m2p[i] = roles.m2p(t);
      dg[i] = kap[i] * m1p[i];
      k2[i] = kap[i] * dg[i];
      kmin = std::min(kmin, kap[i]);
      kmax = std::max(kmax, kap[i]);
      kabs = std::max(kabs, std::fabs(kap[i]));
    }
    if (kmax - kmin <= 1e-10 * std::max(kabs, 1e-300))
      throw NumericError("degenerate determinant: kappa is numerically constant");
    if (special) {
      const double H2 = roles.H;
      if (roles.even) {
        for (std::size_t i = 0; i < n; ++i) g.push_back(grid.t[i] * grid.t[i] / (4.0 * H2));
        kappa_norm2 = std::pow(r, 2.0 * H2 + 2.0) / (4.0 * H2 * H2 * (2.0 * H2 + 2.0));
      } else {
        for (std::size_t i = 0; i < n; ++i) g.push_back(grid.t[i] * grid.t[i] / (4.0 - 4.0 * H2));
        kappa_norm2 = std::pow(r, 4.0 - 2.0 * H2) / ((2.0 - 2.0 * H2) * (2.0 - 2.0 * H2) * (4.0 - 2.0 * H2));
      }
    } else {
      g = grid.cumulative(dg);
      kappa_norm2 = grid.total(k2);
    }
  }

  struct Eval {
    BridgeInner q;
    std::vector<double> B, G;
  };

  Eval evaluate(double w, bool keep) const {
    const std::size_t n = grid.size();
    std::vector<double> Bv(n), Gv(n);
    if (closed) {
      for (std::size_t i = 0; i < n; ++i) {
        const ChainComponents c = roles.comps(grid.t[i], w);
        Bv[i] = c.B;
        Gv[i] = (1.0 - c.D) / (w * w);
      }
    } else {
      std::vector<double> fa(n), fc(n), Dv(n);
      for (std::size_t i = 0; i < n; ++i) {
        const ChainComponents c = roles.comps(grid.t[i], w);
        Bv[i] = c.B;
        Dv[i] = c.D;
        fa[i] = c.A * kap[i] * m1p[i];
        fc[i] = c.C * kap[i] * m1p[i];
      }
      const std::vector<double> IA = grid.cumulative(fa), IC = grid.cumulative(fc);
      for (std::size_t i = 0; i < n; ++i) Gv[i] = Dv[i] * IA[i] - Bv[i] * IC[i];
    }
    Eval e;
    const ChainComponents cr = roles.comps(r, w);
    e.q.A_r = cr.A;
    e.q.B_r = cr.B;
    e.q.kappa_norm2 = kappa_norm2;
    for (std::size_t i = 0; i < n; ++i) {
      const double dm = grid.w[i] * m2p[i];
      e.q.one_G += dm * Gv[i];
      e.q.g_G += dm * g[i] * Gv[i];
      e.q.one_B += dm * Bv[i];
      e.q.g_B += dm * g[i] * Bv[i];
    }
    if (keep) {
      e.B = std::move(Bv);
      e.G = std::move(Gv);
    }
    return e;
  }

  // g_t and the two running integrals of the generic G at an arbitrary t.
  void running(double t, double w, double& gt, double& IA, double& IC) const {
    gt = IA = IC = 0.0;
    if (t <= 0.0) return;
    const QuadRule q = composite_graded(0.0, t, 8, 24, 16);
    for (std::size_t i = 0; i < q.x.size(); ++i) {
      const double u = q.x[i];
      const double d = q.w[i] * kappa(u) * roles.m1p(u);
      gt += d;
      if (w != 0.0) {
        const ChainComponents c = roles.comps(u, w);
        IA += d * c.A;
        IC += d * c.C;
      }
    }
  }

  double g_at(double t) const {
    if (closed) {
      return roles.even ? t * t / (4.0 * roles.H) : t * t / (4.0 - 4.0 * roles.H);
    }
    double gt, a, c;
    running(t, 0.0, gt, a, c);
    return gt;
  }

  double G_at(double t, double w) const {
    const ChainComponents c = roles.comps(t, w);
    if (closed) return (1.0 - c.D) / (w * w);
    double gt, IA, IC;
    running(t, w, gt, IA, IC);
    return c.D * IA - c.B * IC;
  }
};

}  // namespace

double extended_bridge_det(const BridgeInner& q, double w) {
  // w * F(w), F = w A_r (<g,G> + |kappa|^2 / w^2) + w^2 <g,B> <1,G>.
  return w * w * q.A_r * q.g_G + q.A_r * q.kappa_norm2 + w * w * w * q.g_B * q.one_G;
}

BridgeInner extended_bridge_inner(double H, double r, const std::function<double(double)>& kappa, double w,
                                  Parity parity, KappaForm form, bool generic_G) {
  const Problem p(H, r, kappa, parity, form, generic_G);
  return p.evaluate(w, false).q;
}

double extended_bridge_kernel(double H, double r, const std::function<double(double)>& kappa, Parity parity,
                              double s, double t) {
  const Problem p(H, r, kappa, parity, KappaForm::General, true);
  if (s <= 0.0 || t <= 0.0) return 0.0;
  const double k = p.roles.m1(std::min(s, t)) - p.g_at(s) * p.g_at(t) / p.kappa_norm2;
  return k / std::sqrt(p.roles.m1p(s) * p.roles.m1p(t));
}

KLBasis extended_bridge_basis(double H, double r, const std::function<double(double)>& kappa, std::size_t N,
                              Parity parity, KappaForm form, bool generic_G) {
  if (N < 1) throw DomainError("extended bridge: N must be positive");
  auto prob = std::make_shared<const Problem>(H, r, kappa, parity, form, generic_G);
  const Problem& P = *prob;

  // Rank-one perturbation of the martingale kernel: the frequencies interlace
  // with the zeros of A~_r.
  const RootList mz = bessel_zeros(P.roles.martingale_order(), r, N + 1);
  if (mz.size() < N + 1) throw NumericError("extended bridge: martingale spectrum scan failed");
  const double lo = mz.roots.front() * (1.0 - 1e-7);
  const double hi = mz.roots.back() * (1.0 + 1e-7);
  auto f = [&P](double w) { return extended_bridge_det(P.evaluate(w, false).q, w); };

  std::vector<std::pair<double, double>> pts;
  const std::size_t init = 4 * (N + 1);
  for (std::size_t i = 0; i <= init; ++i) {
    const double w = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(init);
    pts.emplace_back(w, f(w));
  }
  auto count = [&pts]() {
    std::size_t c = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      if (pts[i].second == 0.0 || pts[i].second * pts[i + 1].second < 0.0) ++c;
    return c;
  };
  std::size_t prev = count();
  for (int level = 0; level < 6; ++level) {
    std::vector<std::pair<double, double>> next;
    next.reserve(2 * pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      next.push_back(pts[i]);
      const double m = 0.5 * (pts[i].first + pts[i + 1].first);
      next.emplace_back(m, f(m));
    }
    next.push_back(pts.back());
    pts.swap(next);
    const std::size_t c = count();
    if (c == prev && c >= N) break;
    prev = c;
  }

  RootList roots;
  for (std::size_t i = 0; i + 1 < pts.size() && roots.size() < N; ++i) {
    const double fa = pts[i].second, fb = pts[i + 1].second;
    double x;
    if (fa == 0.0)
      x = pts[i].first;
    else if (fa * fb < 0.0)
      x = refine_root(f, pts[i].first, pts[i + 1].first);
    else
      continue;
    const double scale = std::max({std::fabs(fa), std::fabs(fb), 1e-300});
    roots.roots.push_back(x);
    roots.residuals.push_back(std::fabs(f(x)) / scale);
  }
  if (roots.size() < N) throw NumericError("extended bridge: determinant scan found fewer roots than requested");

  KLBasis b;
  b.spec = KLKernelSpec::extended_bridge(H, P.kappa, parity, form);
  b.spec.generic_G = generic_G;
  b.r = r;
  for (std::size_t n = 0; n < N; ++n) {
    const double w = roots.roots[n];
    const Problem::Eval e = P.evaluate(w, true);
    const double p = w * e.q.one_G, q = e.q.A_r;
    double nb = 0.0, gb = 0.0, ib = 0.0;
    for (std::size_t i = 0; i < P.grid.size(); ++i) {
      const double bi = p * e.B[i] + q * e.G[i];
      const double dm = P.grid.w[i] * P.m2p[i];
      nb += dm * bi * bi;
      gb += dm * P.g[i] * bi;
      ib += dm * bi;
    }
    if (!(nb > 0.0)) throw NumericError("extended bridge: vanishing eigenfunction");
    const double inv = 1.0 / std::sqrt(nb);
    auto raw = [prob, w, p, q, inv](double t) {
      if (t <= 0.0) return 0.0;
      const double bt = p * prob->roles.comps(t, w).B + q * prob->G_at(t, w);
      return inv * bt / std::sqrt(prob->roles.m1p(t));
    };
    double sgn = 1.0;
    for (double t : {1e-3 * r, 1e-2 * r, 0.1 * r}) {
      const double v = raw(t);
      if (v != 0.0) {
        sgn = v > 0.0 ? 1.0 : -1.0;
        break;
      }
    }
    b.eigenvalues.push_back(1.0 / (w * w));
    b.freq.push_back(w);
    b.residuals.push_back(roots.residuals[n]);
    b.phi_fn.push_back([raw, sgn](double t) { return sgn * raw(t); });
    b.params.push_back({{"w", w},
                        {"p", sgn * p * inv},
                        {"q", sgn * q * inv},
                        {"one_G", e.q.one_G},
                        {"g_G", e.q.g_G},
                        {"one_B", e.q.one_B},
                        {"one_B_closed", (1.0 - e.q.A_r) / w},
                        {"g_B", e.q.g_B},
                        {"kappa_norm2", e.q.kappa_norm2},
                        {"c", sgn * gb * inv / e.q.kappa_norm2},
                        {"int_b_dm2", sgn * ib * inv}});
  }

  // Kernel with a cache for g_t, since g needs quadrature for general kappa.
  auto cache = std::make_shared<std::pair<std::mutex, std::unordered_map<double, double>>>();
  auto gfun = [prob, cache](double t) {
    {
      std::lock_guard<std::mutex> lk(cache->first);
      auto it = cache->second.find(t);
      if (it != cache->second.end()) return it->second;
    }
    const double v = prob->g_at(t);
    std::lock_guard<std::mutex> lk(cache->first);
    cache->second.emplace(t, v);
    return v;
  };
  b.kernel_fn = [prob, gfun](double s, double t) {
    if (s <= 0.0 || t <= 0.0) return 0.0;
    const double k = prob->roles.m1(std::min(s, t)) - gfun(s) * gfun(t) / prob->kappa_norm2;
    return k / std::sqrt(prob->roles.m1p(s) * prob->roles.m1p(t));
  };
  return b;
}

}  // namespace sg
