#include "spectralgauss/suite.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <json.hpp>

#include "spectralgauss/chain.hpp"
#include "spectralgauss/format.hpp"
#include "spectralgauss/martingales.hpp"
#include "spectralgauss/processes.hpp"
#include "spectralgauss/quadrature.hpp"
#include "spectralgauss/run.hpp"
#include "spectralgauss/specfun.hpp"
#include "spectralgauss/verify.hpp"

namespace sg {

using nlohmann::json;

SuiteConfig suite_config_from_json(const std::string& text, SuiteConfig base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("verify config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("verify config must be a JSON object");
  for (const auto& [key, val] : j.items()) {
    if (key == "quick") {
      if (!val.is_boolean()) throw ConfigError("verify config: 'quick' must be a boolean");
      base.quick = val.get<bool>();
    } else if (key == "seed") {
      if (!val.is_number_unsigned()) throw ConfigError("verify config: 'seed' must be a non-negative integer");
      base.seed = val.get<std::uint64_t>();
    } else if (key == "only") {
      if (!val.is_array()) throw ConfigError("verify config: 'only' must be an array");
      base.only.clear();
      for (const auto& v : val) {
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 10)
          throw ConfigError("verify config: criteria are numbered 1 to 10");
        base.only.push_back(v.get<int>());
      }
    } else {
      auto it = base.tol.find(key);
      if (it == base.tol.end()) throw ConfigError("verify config: unknown key '" + key + "'");
      if (!val.is_number()) throw ConfigError("verify config: '" + key + "' must be a number");
      const double v = val.get<double>();
      if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("verify config: '" + key + "' must be positive and finite");
      if (key == "mc_fraction" && v > 1.0) throw ConfigError("verify config: 'mc_fraction' must not exceed 1");
      it->second = v;
    }
  }
  return base;
}

namespace {

std::string sci(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", x);
  return b;
}

std::string fix(double x, int d = 4) {
  char b[32];
  std::snprintf(b, sizeof b, "%.*f", d, x);
  return b;
}

struct Ctx {
  const SuiteConfig& cfg;
  double tol(const char* k) const { return cfg.tol.at(k); }
};

// Reference J_nu from the C++17 special functions (J and Y reflection for nu < 0).
double ref_bessel_j(double nu, double x) {
  if (nu >= 0.0) return std::cyl_bessel_j(nu, x);
  const double m = -nu;
  return std::cos(m * std::numbers::pi) * std::cyl_bessel_j(m, x) - std::sin(m * std::numbers::pi) * std::cyl_neumann(m, x);
}

CriterionResult c1(const Ctx& c) {
  CriterionResult r{1, "special functions", true, "", 0};
  const double tol = c.tol("bessel_tol");
  const double nus[] = {-0.75, -0.3, 0.0, 0.25, 0.5, 0.7, 1.3, 2.5, 0.9, -0.5};
  const double xs[] = {0.37, 4.15, 11.8, 28.3, 0.012, 17.25, 2.9, 7.7, 22.1, 1.05};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double nu = nus[i % 10], x = xs[(i * 3) % 10] * (i < 10 ? 1.0 : 1.37);
    const double ref = ref_bessel_j(nu, x);
    worst = std::max(worst, std::fabs(bessel_j(nu, x) - ref) / std::max(1.0, std::fabs(ref)));
  }
  if (!(worst <= tol)) r.pass = false;
  double wres = 0.0, wsp = 0.0;
  for (double H : {0.25, 0.5, 0.75}) {
    const RootList z = bessel_zeros(1.0 - H, 1.0, 50);
    if (z.size() != 50) {
      r.pass = false;
      r.detail += " missing zeros at H=" + fix(H, 2);
      continue;
    }
    for (std::size_t k = 0; k < 50; ++k) wres = std::max(wres, std::fabs(bessel_j(1.0 - H, z.roots[k])));
    wsp = std::max(wsp, std::fabs(z.roots[49] - z.roots[48] - std::numbers::pi));
  }
  if (!(wres <= c.tol("zero_residual_tol")) || !(wsp <= c.tol("zero_spacing_tol"))) r.pass = false;
  r.detail = "J err " + sci(worst) + ", zero residual " + sci(wres) + ", spacing gap " + sci(wsp) + r.detail;
  return r;
}

CriterionResult c2(const Ctx& c) {
  CriterionResult r{2, "kernel identities", true, "", 0};
  const double pts[] = {0.7, 1.9, 3.3, 5.2, 8.1};
  const double t = 1.0;
  double worst = 0.0;
  for (double H : {0.3, 0.7}) {
    const QuadRule q = composite_graded(0.0, t, 4, 40, 16);
    for (double w : pts)
      for (double z : pts) {
        if (w == z) continue;
        double ia = 0.0, ib = 0.0;
        for (std::size_t k = 0; k < q.x.size(); ++k) {
          const double u = q.x[k];
          const ChainComponents a = fbm_components(H, u, w), b = fbm_components(H, u, z);
          ia += q.w[k] * a.A * b.A * std::pow(u, 1.0 - 2.0 * H);
          ib += q.w[k] * a.B * b.B * std::pow(u, 2.0 * H - 1.0);
        }
        const ChainComponents Aw = fbm_components(H, t, w), Az = fbm_components(H, t, z);
        const double ra = (z * Aw.A * Az.B - w * Az.A * Aw.B) / (z * z - w * w);
        const double rb = (w * Az.B * Aw.A - z * Aw.B * Az.A) / (z * z - w * w);
        worst = std::max({worst, std::fabs(ia - ra) / std::max(1.0, std::fabs(ra)),
                          std::fabs(ib - rb) / std::max(1.0, std::fabs(rb))});
      }
  }
  std::mt19937_64 rng = make_stream(c.cfg.seed, 2);
  std::uniform_real_distribution<double> uh(0.02, 0.98), ut(0.0, 3.0), uz(-20.0, 20.0);
  double dworst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double H = uh(rng), tt = ut(rng), z = uz(rng);
    const ChainComponents m = fbm_components(H, tt, z);
    dworst = std::max(dworst, std::fabs(m.A * m.D - m.B * m.C - 1.0));
  }
  r.pass = worst <= c.tol("lagrange_tol") && dworst <= c.tol("det_tol");
  r.detail = "Lagrange err " + sci(worst) + ", |AD-BC-1| " + sci(dworst);
  return r;
}

CriterionResult c3(const Ctx& c) {
  CriterionResult r{3, "PW covariance", true, "", 0};
  for (double H : {0.25, 0.5, 0.75}) {
    const PWExpansion e = pw_fbm(H, 1.0, 5000);
    double worst = 0.0;
    for (int i = 1; i <= 9; ++i)
      for (int j = 1; j <= i; ++j) {
        const double s = i / 9.0, t = j / 9.0;
        const double ref = fbm_spectral_covariance(H, s, t);
        worst = std::max(worst, std::fabs(series_covariance(e, s, t) - ref) / std::fabs(ref));
      }
    if (!(worst <= c.tol("pw_cov_tol"))) r.pass = false;
    r.detail += (r.detail.empty() ? "" : ", ") + std::string("H=") + fix(H, 2) + " rel " + sci(worst);
  }
  return r;
}

CriterionResult c4(const Ctx& c) {
  CriterionResult r{4, "MC covariance", true, "", 0};
  const std::size_t M = c.cfg.quick ? 5000 : 20000;
  for (double H : {0.3, 0.7}) {
    const PWExpansion e = pw_fbm(H, 1.0, 512);
    const std::vector<double> grid = uniform_grid(-1.0, 1.0, 256);
    const Eigen::MatrixXd B = basis_matrix(e, grid);
    const std::vector<double> v = draw_variances(e);
    std::mt19937_64 rng = make_stream(c.cfg.seed, 4);
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd Z(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(M));
    for (Eigen::Index j = 0; j < Z.cols(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) Z(static_cast<Eigen::Index>(i), j) = std::sqrt(v[i]) * nd(rng);
    const MCCovariance mc = mc_covariance(B * Z);
    Eigen::MatrixXd T(256, 256);
    for (Eigen::Index i = 0; i < 256; ++i)
      for (Eigen::Index j = 0; j <= i; ++j)
        T(i, j) = T(j, i) = series_covariance(e, grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]);
    const BandCheck b = band_check(mc, T, c.tol("mc_z"));
    if (!(b.pass_fraction >= c.tol("mc_fraction"))) r.pass = false;
    r.detail += (r.detail.empty() ? "" : ", ") + std::string("H=") + fix(H, 1) + " inside " + fix(100 * b.pass_fraction, 2) +
                "% (max z " + fix(b.max_z, 2) + ")";
  }
  r.detail += ", " + std::to_string(M) + " paths";
  return r;
}

CriterionResult c5(const Ctx& c) {
  CriterionResult r{5, "truncation rate", true, "", 0};
  std::vector<std::size_t> Ns;
  for (int k = 5; k <= 12; ++k) Ns.push_back(std::size_t{1} << k);
  const std::vector<double> grid = uniform_grid(-1.0, 1.0, 129);
  for (double H : {0.25, 0.5, 0.75}) {
    const RateReport rep = truncation_rate(H, 1.0, Ns, grid, 16384, 0, c.cfg.seed);
    bool dec = true;
    for (std::size_t i = 1; i < rep.sup_ms.size(); ++i) dec = dec && rep.sup_ms[i] < rep.sup_ms[i - 1];
    if (!dec || !(std::fabs(rep.fit.slope + 2.0 * H) <= c.tol("rate_slope_tol"))) r.pass = false;
    r.detail += (r.detail.empty() ? "" : ", ") + std::string("H=") + fix(H, 2) + " slope " + fix(rep.fit.slope, 3);
  }
  return r;
}

struct KLCase {
  std::string kernel;
  double H;
};

std::vector<KLCase> kl_cases() {
  std::vector<KLCase> v{{"bm", 0.5}, {"bm-bridge", 0.5}, {"ou", 0.5}, {"ar", 0.5}};
  for (const char* k : {"fbm-even-martingale", "fbm-odd-martingale", "fbm-even-bridge", "fbm-odd-bridge", "ext-even-gamma"})
    for (double H : {0.3, 0.7}) v.push_back({k, H});
  return v;
}

KLConfig kl_case_config(const KLCase& k) {
  KLConfig c;
  c.kernel = k.kernel;
  c.H = k.H;
  c.theta = 1.0;
  c.sigma2 = k.kernel == "ar" ? 1.0 : 2.0;
  c.phi = {1.0, 2.0};
  return c;
}

CriterionResult c6(const Ctx& c) {
  CriterionResult r{6, "KL vs Nystrom", true, "", 0};
  double worst = 0.0, worst_ext = 0.0;
  std::string failed;
  for (const KLCase& k : kl_cases()) {
    KLConfig kc = kl_case_config(k);
    kc.nystrom = c.cfg.quick ? 1000 : 2000;
    const bool ext = k.kernel.rfind("ext-", 0) == 0;
    kc.gate = ext ? c.tol("kl_ext_tol") : c.tol("kl_tol");
    const KLTable t = kl_table(kc);
    double m = 0.0;
    for (const auto& row : t.rows) m = std::max(m, row.rel_err);
    if (t.rows.size() < 10 || !t.pass) {
      r.pass = false;
      failed += " " + k.kernel + "(" + fix(k.H, 1) + ")";
    }
    (ext ? worst_ext : worst) = std::max(ext ? worst_ext : worst, m);
  }
  r.detail = "max rel " + sci(worst) + ", extended " + sci(worst_ext) + (failed.empty() ? "" : ", failed:" + failed);
  return r;
}

CriterionResult c7(const Ctx& c) {
  CriterionResult r{7, "orthonormality", true, "", 0};
  double worst = 0.0;
  std::vector<KLCase> cases = kl_cases();
  cases.push_back({"ext-odd-alpha", 0.3});
  cases.push_back({"ext-odd-alpha", 0.7});
  for (const KLCase& k : cases) {
    const KLBasis b = kl_basis(kernel_from_tag(kl_case_config(k)), 1.0, 20);
    const auto G = b.gram(20, 32, 16);
    for (std::size_t i = 0; i < G.size(); ++i)
      for (std::size_t j = 0; j < G.size(); ++j) worst = std::max(worst, std::fabs(G[i][j] - (i == j ? 1.0 : 0.0)));
  }
  r.pass = worst <= c.tol("gram_tol");
  r.detail = "max |G - I| " + sci(worst) + " over " + std::to_string(cases.size()) + " bases";
  return r;
}

CriterionResult c8(const Ctx& c) {
  CriterionResult r{8, "martingale transforms", true, "", 0};
  const std::size_t M = c.cfg.quick ? 2000 : 10000;
  double zworst = 0.0, rms_worst = 0.0;
  const std::vector<double> grid = uniform_grid(0.0, 1.0, 257);
  const std::size_t big = c.cfg.quick ? 1024 : 4096;
  const std::vector<double> fine = uniform_grid(0.0, 1.0, big + 1);
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= 8; ++k) idx.push_back(32 * k);
  for (double H : {0.3, 0.7})
    for (Parity par : {Parity::Even, Parity::Odd}) {
      const bool even = par == Parity::Even;
      const ProcessSpec spec = even ? ProcessSpec::fbm_even(H, FbmNorm::Chain) : ProcessSpec::fbm_odd(H, FbmNorm::Chain);
      {
        CholeskySampler S(covariance_matrix(spec, grid, false));
        std::mt19937_64 rng = make_stream(c.cfg.seed, 8);
        const Eigen::MatrixXd X = S.sample_many(rng, M);
        const LinearTransform T = even ? fwd_even_transform(H, grid, idx) : fwd_odd_transform(H, grid, idx);
        const Eigen::MatrixXd Mt = T.apply_many(X);
        for (std::size_t k = 0; k < idx.size(); ++k) {
          const double t = grid[idx[k]];
          const double target = std::numbers::pi * (even ? std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H)
                                                         : std::pow(t, 2.0 * H) / (2.0 * H));
          const Eigen::ArrayXd m2 = Mt.row(static_cast<Eigen::Index>(k)).array().square();
          const double mean = m2.mean();
          const double se = std::sqrt((m2 - mean).square().sum() / (m2.size() - 1.0) / m2.size());
          const double z = std::fabs(mean - target) / se;
          zworst = std::isfinite(z) ? std::max(zworst, z) : INFINITY;
        }
      }
      {
        CholeskySampler S(covariance_matrix(spec, fine, false));
        std::mt19937_64 rng = make_stream(c.cfg.seed, 9);
        const Eigen::MatrixXd X = S.sample_many(rng, 100);
        const Eigen::MatrixXd Mt = (even ? fwd_even_transform(H, fine) : fwd_odd_transform(H, fine)).apply_many(X);
        const Eigen::RowVectorXd w = even ? inv_even_weights(H, fine) : inv_odd_weights(H, fine);
        const Eigen::RowVectorXd rec = w * Mt;
        const Eigen::RowVectorXd truth = X.row(static_cast<Eigen::Index>(big));
        rms_worst = std::max(rms_worst, (rec - truth).norm() / truth.norm());
      }
    }
  r.pass = zworst <= c.tol("mart_z") && rms_worst <= c.tol("inv_rms_tol");
  r.detail = "max z " + fix(zworst, 2) + " over " + std::to_string(M) + " paths, inv-fwd rms " + sci(rms_worst) +
             " at grid " + std::to_string(big);
  return r;
}

CriterionResult c9(const Ctx& c) {
  CriterionResult r{9, "dualities", true, "", 0};
  double spec_worst = 0.0;
  for (double H : {0.3, 0.7}) {
    const KLBasis e = kl_basis(KLKernelSpec::fbm_even_martingale(H), 1.0, 20);
    const KLBasis o = kl_basis(KLKernelSpec::fbm_odd_martingale(1.0 - H), 1.0, 20);
    for (std::size_t n = 0; n < 20; ++n)
      spec_worst = std::max(spec_worst, std::fabs(e.eigenvalues[n] - o.eigenvalues[n]) / e.eigenvalues[n]);
  }
  double cov_worst = 0.0;
  for (double H : {0.3, 0.7}) {
    const ProcessSpec a = ProcessSpec::alpha_wiener_bridge(H, 1.0), b = ProcessSpec::inverse_even_bridge(H, 1.0);
    for (int i = 0; i <= 16; ++i)
      for (int j = 0; j <= 16; ++j)
        cov_worst = std::max(cov_worst, std::fabs(covariance(a, i / 16.0, j / 16.0) - covariance(b, i / 16.0, j / 16.0)));
  }
  r.pass = spec_worst <= c.tol("duality_tol") && cov_worst <= c.tol("duality_tol");
  r.detail = "spectra rel " + sci(spec_worst) + ", bridge covariance " + sci(cov_worst);
  return r;
}

CriterionResult c10(const Ctx& c) {
  CriterionResult r{10, "determinism", true, "", 0};
  SampleConfig s;
  s.process = "fbm";
  s.H = 0.75;
  s.terms = 512;
  s.paths = 4;
  s.seed = c.cfg.seed;
  s.has_seed = true;
  const SampleOutput a = sample_run(s, 1), b = sample_run(s, 1), p = sample_run(s, 3);
  bool same = a.manifest.contents == b.manifest.contents && a.paths.size() == b.paths.size();
  bool jobs_same = a.paths.size() == p.paths.size();
  for (std::size_t i = 0; same && i < a.paths.size(); ++i) same = a.paths[i].contents == b.paths[i].contents;
  for (std::size_t i = 0; jobs_same && i < a.paths.size(); ++i) jobs_same = a.paths[i].contents == p.paths[i].contents;
  r.pass = same && jobs_same;
  r.detail = std::string(same ? "byte-identical" : "outputs differ") + " across runs, " +
             (jobs_same ? "independent of jobs" : "depends on jobs");
  return r;
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] criterion %2d %-22s %7.2fs  ", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(),
                r.seconds);
  return head + r.detail;
}

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg, const std::function<void(const CriterionResult&)>& on_result) {
  using Fn = CriterionResult (*)(const Ctx&);
  const Fn fns[] = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
  const char* titles[] = {"special functions", "kernel identities", "PW covariance", "MC covariance", "truncation rate",
                          "KL vs Nystrom", "orthonormality", "martingale transforms", "dualities", "determinism"};
  Ctx ctx{cfg};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) {
    if (!cfg.only.empty() && std::find(cfg.only.begin(), cfg.only.end(), id) == cfg.only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = fns[id - 1](ctx);
    } catch (const std::exception& e) {
      r = CriterionResult{id, titles[id - 1], false, std::string("error: ") + e.what(), 0};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(r);
  }
  return out;
}

}  // namespace sg
