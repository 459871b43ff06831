#include "spectralgauss.h"

#include <cstring>
#include <memory>
#include <string>

#include "spectralgauss/format.hpp"
#include "spectralgauss/kl.hpp"
#include "spectralgauss/martingales.hpp"
#include "spectralgauss/run.hpp"
#include "spectralgauss/series.hpp"
#include "spectralgauss/suite.hpp"
#include "spectralgauss/verify.hpp"

struct sg_pw {
  sg::PWExpansion e;
};

struct sg_kl {
  sg::KLBasis b;
};

struct sg_sample_result {
  sg::SampleOutput out;
};

namespace {

thread_local std::string g_error;

template <class F>
sg_status guard(F&& f) {
  try {
    f();
    g_error.clear();
    return SG_OK;
  } catch (const sg::ConfigError& e) {
    g_error = e.what();
    return SG_ERR_CONFIG;
  } catch (const sg::DomainError& e) {
    g_error = e.what();
    return SG_ERR_DOMAIN;
  } catch (const sg::NumericError& e) {
    g_error = e.what();
    return SG_ERR_NUMERIC;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return SG_ERR_NUMERIC;
  } catch (const std::exception& e) {
    g_error = e.what();
    return SG_ERR_NUMERIC;
  }
}

sg_status null_error(const char* what) {
  g_error = std::string("null pointer: ") + what;
  return SG_ERR_NULL;
}

#define SG_REQUIRE(p)                    \
  do {                                   \
    if (!(p)) return null_error(#p);     \
  } while (0)

sg_status copy_text(const std::string& s, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf || cap < s.size() + 1) {
    g_error = "buffer too small";
    return SG_ERR_BUFFER;
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  g_error.clear();
  return SG_OK;
}

// Runs f() -> std::string and copies the result out.
template <class F>
sg_status text_call(F&& f, char* buf, size_t cap, size_t* needed) {
  std::string s;
  const sg_status st = guard([&] { s = f(); });
  if (st != SG_OK) return st;
  return copy_text(s, buf, cap, needed);
}

std::vector<double> as_vector(const double* p, size_t n) { return std::vector<double>(p, p + n); }

}  // namespace

extern "C" {

const char* sg_last_error(void) { return g_error.c_str(); }
const char* sg_version(void) { return "1.0.0"; }

sg_status sg_bessel_j(double nu, double x, double* out) {
  SG_REQUIRE(out);
  return guard([&] { *out = sg::bessel_j(nu, x); });
}

sg_status sg_bessel_zeros(double nu, double r, size_t count, double* roots, double* residuals) {
  SG_REQUIRE(roots);
  return guard([&] {
    const sg::RootList z = sg::bessel_zeros(nu, r, count);
    if (z.size() < count) throw sg::NumericError("fewer zeros found than requested");
    for (size_t i = 0; i < count; ++i) {
      roots[i] = z.roots[i];
      if (residuals) residuals[i] = z.residuals[i];
    }
  });
}

sg_status sg_fbm_components(double H, double t, double z, double out4[4]) {
  SG_REQUIRE(out4);
  return guard([&] {
    sg::check_hurst(H);
    const sg::ChainComponents c = sg::fbm_components(H, t, z);
    out4[0] = c.A;
    out4[1] = c.B;
    out4[2] = c.C;
    out4[3] = c.D;
  });
}

sg_status sg_fbm_covariance(double H, int chain_norm, double s, double t, double* out) {
  SG_REQUIRE(out);
  return guard([&] {
    *out = sg::covariance(sg::ProcessSpec::fbm(H, chain_norm ? sg::FbmNorm::Chain : sg::FbmNorm::Standard), s, t);
  });
}

sg_status sg_pw_create_fbm(double H, double r, size_t N, int basis, int norm, sg_pw** out) {
  SG_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    if (basis != SG_PW_INCREMENT && basis != SG_PW_SINCOS) throw sg::ConfigError("unknown basis");
    if (norm != SG_NORM_STANDARD && norm != SG_NORM_CHAIN) throw sg::ConfigError("unknown normalization");
    auto p = std::make_unique<sg_pw>();
    p->e = sg::pw_fbm(H, r, N, basis == SG_PW_SINCOS ? sg::PWBasis::SinCos : sg::PWBasis::Increment,
                      norm == SG_NORM_CHAIN ? sg::FbmNorm::Chain : sg::FbmNorm::Standard);
    *out = p.release();
  });
}

sg_status sg_pw_create_stationary(const double* phi, size_t n, double sigma2, double r, size_t N, sg_pw** out) {
  SG_REQUIRE(out);
  SG_REQUIRE(phi);
  *out = nullptr;
  return guard([&] {
    sg::ProcessSpec s = n == 1 ? sg::ProcessSpec::ou(phi[0], sigma2)
                               : sg::ProcessSpec::autoregressive(sg::ArSpec{as_vector(phi, n), sigma2});
    auto p = std::make_unique<sg_pw>();
    p->e = sg::pw_stationary(s, r, N);
    *out = p.release();
  });
}

sg_status sg_pw_create_martingale(double H, double r, size_t N, int which, sg_pw** out) {
  SG_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    sg::MartingaleSeries m;
    switch (which) {
      case SG_MART_EVEN: m = sg::MartingaleSeries::Even; break;
      case SG_MART_ODD: m = sg::MartingaleSeries::Odd; break;
      case SG_MART_EVEN_BRIDGE: m = sg::MartingaleSeries::EvenBridge; break;
      default: throw sg::ConfigError("unknown martingale series");
    }
    auto p = std::make_unique<sg_pw>();
    p->e = sg::pw_martingale(H, r, N, m);
    *out = p.release();
  });
}

void sg_pw_destroy(sg_pw* pw) { delete pw; }

sg_status sg_pw_terms(const sg_pw* pw, size_t* out) {
  SG_REQUIRE(pw);
  SG_REQUIRE(out);
  *out = pw->e.terms();
  return SG_OK;
}

sg_status sg_pw_window(const sg_pw* pw, double* lo, double* hi) {
  SG_REQUIRE(pw);
  SG_REQUIRE(lo);
  SG_REQUIRE(hi);
  *lo = pw->e.window_lo();
  *hi = pw->e.window_hi();
  return SG_OK;
}

sg_status sg_pw_spectrum(const sg_pw* pw, double* freq, double* var, size_t cap) {
  SG_REQUIRE(pw);
  const size_t n = std::min(cap, pw->e.terms());
  for (size_t i = 0; i < n; ++i) {
    if (freq) freq[i] = pw->e.freq[i];
    if (var) var[i] = pw->e.var[i];
  }
  return SG_OK;
}

sg_status sg_pw_sample(const sg_pw* pw, uint64_t seed, uint64_t stream, const double* grid, size_t n, double* out,
                       double* imag) {
  SG_REQUIRE(pw);
  SG_REQUIRE(grid);
  SG_REQUIRE(out);
  return guard([&] {
    std::mt19937_64 rng = sg::make_stream(seed, stream);
    const std::vector<double> g = as_vector(grid, n);
    sg::SamplePath p;
    if (pw->e.basis == sg::PWBasis::Increment) {
      if (!imag) throw sg::ConfigError("complex expansion needs an imaginary-part buffer");
      p = sg::evaluate_complex_path(pw->e, sg::complex_draw(pw->e, rng), g);
    } else {
      p = sg::evaluate_path(pw->e, sg::sample_coefficients(pw->e, rng), g);
    }
    for (size_t i = 0; i < n; ++i) {
      out[i] = p.values[i];
      if (imag) imag[i] = p.imag.empty() ? 0.0 : p.imag[i];
    }
  });
}

sg_status sg_pw_covariance(const sg_pw* pw, double s, double t, double* out) {
  SG_REQUIRE(pw);
  SG_REQUIRE(out);
  return guard([&] { *out = sg::series_covariance(pw->e, s, t); });
}

sg_status sg_pw_json(const sg_pw* pw, char* buf, size_t cap, size_t* needed) {
  SG_REQUIRE(pw);
  return text_call([&] { return sg::pw_json(pw->e); }, buf, cap, needed);
}

sg_status sg_kl_create(const char* config_json, sg_kl** out) {
  SG_REQUIRE(config_json);
  SG_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    const sg::KLConfig c = sg::kl_config_from_json(config_json);
    auto p = std::make_unique<sg_kl>();
    p->b = sg::kl_basis(sg::kernel_from_tag(c), c.r, static_cast<size_t>(c.count));
    *out = p.release();
  });
}

void sg_kl_destroy(sg_kl* kl) { delete kl; }

sg_status sg_kl_size(const sg_kl* kl, size_t* out) {
  SG_REQUIRE(kl);
  SG_REQUIRE(out);
  *out = kl->b.size();
  return SG_OK;
}

sg_status sg_kl_eigenvalues(const sg_kl* kl, double* out, size_t cap) {
  SG_REQUIRE(kl);
  SG_REQUIRE(out);
  for (size_t i = 0; i < std::min(cap, kl->b.size()); ++i) out[i] = kl->b.eigenvalues[i];
  return SG_OK;
}

sg_status sg_kl_eval(const sg_kl* kl, size_t n, double t, double* out) {
  SG_REQUIRE(kl);
  SG_REQUIRE(out);
  return guard([&] {
    if (n >= kl->b.size()) throw sg::DomainError("eigenfunction index out of range");
    *out = kl->b.phi(n, t);
  });
}

sg_status sg_kl_kernel(const sg_kl* kl, double s, double t, double* out) {
  SG_REQUIRE(kl);
  SG_REQUIRE(out);
  return guard([&] { *out = kl->b.kernel(s, t); });
}

sg_status sg_kl_json(const sg_kl* kl, char* buf, size_t cap, size_t* needed) {
  SG_REQUIRE(kl);
  return text_call([&] { return sg::kl_json(kl->b); }, buf, cap, needed);
}

sg_status sg_kl_table_csv(const char* config_json, char* buf, size_t cap, size_t* needed, int* pass) {
  SG_REQUIRE(config_json);
  return text_call(
      [&] {
        const sg::KLTable t = sg::kl_table(sg::kl_config_from_json(config_json));
        if (pass) *pass = t.pass ? 1 : 0;
        return sg::kl_table_csv(t);
      },
      buf, cap, needed);
}

sg_status sg_nystrom_json(const char* config_json, char* buf, size_t cap, size_t* needed) {
  SG_REQUIRE(config_json);
  return text_call(
      [&] {
        const sg::KLConfig c = sg::kl_config_from_json(config_json);
        const sg::KLBasis b = sg::kl_basis(sg::kernel_from_tag(c), c.r, 1);
        return sg::eig_json(sg::nystrom_eig(b.kernel_fn, c.r, static_cast<size_t>(c.nystrom),
                                            static_cast<size_t>(c.count), c.kernel, false));
      },
      buf, cap, needed);
}

sg_status sg_rate_json(const char* config_json, char* buf, size_t cap, size_t* needed) {
  SG_REQUIRE(config_json);
  return text_call([&] { return sg::rate_run(sg::rate_config_from_json(config_json)); }, buf, cap, needed);
}

sg_status sg_martingale_json(const char* config_json, char* buf, size_t cap, size_t* needed) {
  SG_REQUIRE(config_json);
  return text_call([&] { return sg::martingale_report(sg::martingale_config_from_json(config_json)); }, buf, cap,
                   needed);
}

sg_status sg_martingale_forward(double H, int transform, const double* grid, const double* x, size_t n, double* out) {
  SG_REQUIRE(grid);
  SG_REQUIRE(x);
  SG_REQUIRE(out);
  return guard([&] {
    sg::SamplePath p{as_vector(grid, n), as_vector(x, n), {}};
    sg::SamplePath m;
    switch (transform) {
      case SG_TRANSFORM_EVEN: m = sg::fwd_even(H, p); break;
      case SG_TRANSFORM_ODD: m = sg::fwd_odd(H, p); break;
      case SG_TRANSFORM_SINGLE_SIDED: m = sg::fwd_single_sided(H, p); break;
      default: throw sg::ConfigError("unknown transform");
    }
    std::copy(m.values.begin(), m.values.end(), out);
  });
}

sg_status sg_martingale_inverse(double H, int transform, const double* grid, const double* m, size_t n, double* out) {
  SG_REQUIRE(grid);
  SG_REQUIRE(m);
  SG_REQUIRE(out);
  return guard([&] {
    const sg::SamplePath p{as_vector(grid, n), as_vector(m, n), {}};
    switch (transform) {
      case SG_TRANSFORM_EVEN: *out = sg::inv_even(H, p); break;
      case SG_TRANSFORM_ODD: *out = sg::inv_odd(H, p); break;
      case SG_TRANSFORM_SINGLE_SIDED: *out = sg::inv_single_sided(H, p); break;
      default: throw sg::ConfigError("unknown transform");
    }
  });
}

sg_status sg_sample_run(const char* config_json, unsigned jobs, sg_sample_result** out) {
  SG_REQUIRE(config_json);
  SG_REQUIRE(out);
  *out = nullptr;
  return guard([&] {
    auto r = std::make_unique<sg_sample_result>();
    r->out = sg::sample_run(sg::sample_config_from_json(config_json), jobs);
    *out = r.release();
  });
}

void sg_sample_result_destroy(sg_sample_result* res) { delete res; }

size_t sg_sample_result_count(const sg_sample_result* res) { return res ? res->out.paths.size() : 0; }

sg_status sg_sample_result_file(const sg_sample_result* res, size_t i, const char** name, const char** contents,
                                size_t* length) {
  SG_REQUIRE(res);
  SG_REQUIRE(name);
  SG_REQUIRE(contents);
  const size_t n = res->out.paths.size();
  if (i > n) {
    g_error = "file index out of range";
    return SG_ERR_DOMAIN;
  }
  const sg::OutputFile& f = i == n ? res->out.manifest : res->out.paths[i];
  *name = f.name.c_str();
  *contents = f.contents.c_str();
  if (length) *length = f.contents.size();
  return SG_OK;
}

sg_status sg_verify(const char* config_json, sg_verify_callback cb, void* user, int* failures) {
  return guard([&] {
    const sg::SuiteConfig cfg =
        config_json && *config_json ? sg::suite_config_from_json(config_json) : sg::SuiteConfig{};
    int fails = 0;
    sg::run_suite(cfg, [&](const sg::CriterionResult& r) {
      if (!r.pass) ++fails;
      if (cb) cb(r.id, r.pass ? 1 : 0, sg::format_result(r).c_str(), user);
    });
    if (failures) *failures = fails;
  });
}

}  // extern "C"
