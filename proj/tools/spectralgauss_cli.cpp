// spectralgauss command-line front end. Talks to the library through the C API only.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectralgauss.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kConfig = 2, kGate = 3, kNumeric = 4 };

int exit_for(sg_status s) {
  switch (s) {
    case SG_OK: return kOk;
    case SG_ERR_CONFIG:
    case SG_ERR_DOMAIN:
    case SG_ERR_NULL: return kConfig;
    default: return kNumeric;
  }
}

int fail(sg_status s) {
  std::cerr << "error: " << sg_last_error() << "\n";
  return exit_for(s);
}

struct Text {
  std::string s;
  sg_status st = SG_OK;
};

template <class F>
Text call_text(F&& f) {
  size_t need = 0;
  sg_status st = f(nullptr, 0, &need);
  if (st != SG_ERR_BUFFER) return {"", st};
  std::string buf(need, '\0');
  st = f(buf.data(), buf.size(), &need);
  if (st == SG_OK) buf.resize(need - 1);
  return {buf, st};
}

// SPECTRALGAUSS_SEED wins over --seed.
std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (const char* env = std::getenv("SPECTRALGAUSS_SEED"); env && *env) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (errno != 0 || *end != '\0' || env[0] == '-') throw std::invalid_argument("SPECTRALGAUSS_SEED is not a valid seed");
    return v;
  }
  return flag;
}

bool write_file(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::cout << contents;
    if (contents.empty() || contents.back() != '\n') std::cout << "\n";
    return true;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  f << contents;
  return static_cast<bool>(f);
}

struct Common {
  std::string out;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectralgauss: spectral and Karhunen-Loeve simulation of Gaussian processes"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--jobs", common.jobs, "worker threads")->check(CLI::Range(1u, 256u));

  // sample
  auto* sample = app.add_subcommand("sample", "draw sample paths (CSV per path plus a JSON manifest)");
  std::string s_process = "fbm", s_method = "auto", s_basis = "sincos", s_norm = "chain", s_out = "samples";
  double s_H = 0.5, s_r = 1.0, s_theta = 1.0, s_sigma2 = 1.0;
  long long s_terms = 256, s_paths = 1, s_grid = 257;
  std::vector<double> s_phi;
  std::optional<std::uint64_t> s_seed;
  sample->add_option("--process", s_process, "fbm, fbm-even, fbm-odd, ou, ar, bm, bm-bridge, even-martingale, ...");
  sample->add_option("--method", s_method, "auto, pw, kl or cholesky");
  sample->add_option("--basis", s_basis, "sincos or increment (fbm)");
  sample->add_option("--norm", s_norm, "chain or standard (fbm)");
  sample->add_option("--hurst", s_H, "Hurst index");
  sample->add_option("--r", s_r, "half-width of the window");
  sample->add_option("--terms", s_terms, "number of expansion terms");
  sample->add_option("--paths", s_paths, "number of paths");
  sample->add_option("--grid", s_grid, "grid points per path");
  sample->add_option("--theta", s_theta, "OU rate");
  sample->add_option("--sigma2", s_sigma2, "noise variance (OU, AR)");
  sample->add_option("--phi", s_phi, "AR roots phi_k > 0")->delimiter(',');
  sample->add_option("--seed", s_seed, "RNG seed (required)");
  sample->add_option("--out", s_out, "output directory");

  // kl
  auto* kl = app.add_subcommand("kl", "closed-form KL eigenvalues against the Nystrom oracle");
  std::string k_kernel = "ou", k_out;
  double k_H = 0.3, k_r = 1.0, k_theta = 1.0, k_sigma2 = 2.0, k_gate = -1.0;
  std::vector<double> k_phi{1.0, 2.0};
  long long k_count = 10, k_nystrom = 2000;
  std::string k_format = "csv";
  kl->add_option("--kernel", k_kernel,
                 "bm, bm-bridge, ou, ar, fbm-even-martingale, fbm-odd-martingale, fbm-even-bridge, "
                 "fbm-odd-bridge, ext-even-gamma, ext-odd-alpha");
  kl->add_option("--hurst", k_H, "Hurst index");
  kl->add_option("--r", k_r, "interval length");
  kl->add_option("--theta", k_theta, "OU rate");
  kl->add_option("--sigma2", k_sigma2, "noise variance");
  kl->add_option("--phi", k_phi, "AR roots")->delimiter(',');
  kl->add_option("--count", k_count, "number of eigenvalues");
  kl->add_option("--nystrom", k_nystrom, "Nystrom grid size");
  kl->add_option("--gate", k_gate, "maximum relative error (default 1e-4, 1e-3 for extended bridges)");
  kl->add_option("--format", k_format, "csv (table) or json (closed-form basis)")->check(CLI::IsMember({"csv", "json"}));
  kl->add_option("--out", k_out, "output file (default stdout)");

  // pw
  auto* pw = app.add_subcommand("pw", "Paley-Wiener frequencies and variances");
  std::string p_process = "fbm", p_basis = "sincos", p_norm = "chain", p_out, p_format = "json";
  double p_H = 0.5, p_r = 1.0, p_theta = 1.0, p_sigma2 = 1.0;
  std::vector<double> p_phi;
  std::size_t p_terms = 16;
  pw->add_option("--process", p_process, "fbm, ou, ar, even-martingale, odd-martingale, even-bridge")
      ->check(CLI::IsMember({"fbm", "ou", "ar", "even-martingale", "odd-martingale", "even-bridge"}));
  pw->add_option("--hurst", p_H, "Hurst index");
  pw->add_option("--r", p_r, "window parameter");
  pw->add_option("--terms", p_terms, "number of frequencies");
  pw->add_option("--basis", p_basis, "sincos or increment")->check(CLI::IsMember({"sincos", "increment"}));
  pw->add_option("--norm", p_norm, "chain or standard")->check(CLI::IsMember({"chain", "standard"}));
  pw->add_option("--theta", p_theta, "OU rate");
  pw->add_option("--sigma2", p_sigma2, "noise variance");
  pw->add_option("--phi", p_phi, "AR roots")->delimiter(',');
  pw->add_option("--format", p_format, "json or csv")->check(CLI::IsMember({"csv", "json"}));
  pw->add_option("--out", p_out, "output file (default stdout)");

  // zeros
  auto* zeros = app.add_subcommand("zeros", "positive zeros of J_nu(r x)");
  std::optional<double> z_nu, z_H;
  double z_r = 1.0;
  std::size_t z_count = 10;
  std::string z_out;
  zeros->add_option("--nu", z_nu, "Bessel order");
  zeros->add_option("--hurst", z_H, "use nu = 1 - H");
  zeros->add_option("--r", z_r, "scale");
  zeros->add_option("--count", z_count, "number of zeros");
  zeros->add_option("--out", z_out, "output file (default stdout)");

  // rate
  auto* rate = app.add_subcommand("rate", "truncation-rate study of the FBM series");
  double t_H = 0.5, t_r = 1.0, t_gate = 0.15;
  std::vector<long long> t_Ns{32, 64, 128, 256, 512, 1024, 2048, 4096};
  long long t_grid = 129, t_pool = 16384, t_mc = 0;
  std::optional<std::uint64_t> t_seed;
  std::string t_out;
  rate->add_option("--hurst", t_H, "Hurst index");
  rate->add_option("--r", t_r, "window half-width");
  rate->add_option("--Ns", t_Ns, "truncation levels")->delimiter(',');
  rate->add_option("--grid", t_grid, "grid points on [-r, r]");
  rate->add_option("--pool", t_pool, "reference pool of zeros");
  rate->add_option("--mc-paths", t_mc, "paths for the sup-norm estimate (needs --seed)");
  rate->add_option("--seed", t_seed, "RNG seed");
  rate->add_option("--gate", t_gate, "allowed |slope + 2H|");
  rate->add_option("--out", t_out, "output file (default stdout)");

  // martingale
  auto* mart = app.add_subcommand("martingale", "fundamental martingale transforms of FBM paths");
  std::string m_transform = "even", m_out;
  double m_H = 0.3, m_r = 1.0;
  long long m_grid = 257, m_paths = 2000;
  std::optional<std::uint64_t> m_seed;
  mart->add_option("--transform", m_transform, "even, odd or single-sided");
  mart->add_option("--hurst", m_H, "Hurst index");
  mart->add_option("--r", m_r, "horizon");
  mart->add_option("--grid", m_grid, "grid points");
  mart->add_option("--paths", m_paths, "number of input paths");
  mart->add_option("--seed", m_seed, "RNG seed (required)");
  mart->add_option("--out", m_out, "output file (default stdout)");

  // verify
  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  bool v_quick = false;
  std::string v_config;
  std::vector<int> v_only;
  std::optional<std::uint64_t> v_seed;
  verify->add_flag("--quick", v_quick, "smaller Monte Carlo and grid sizes");
  verify->add_option("--config", v_config, "JSON file with tolerance overrides");
  verify->add_option("--only", v_only, "criteria to run")->delimiter(',');
  verify->add_option("--seed", v_seed, "RNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (sample->parsed()) {
      const auto seed = resolve_seed(s_seed);
      json c{{"process", s_process}, {"method", s_method}, {"basis", s_basis}, {"norm", s_norm},
             {"hurst", s_H},         {"r", s_r},           {"theta", s_theta}, {"sigma2", s_sigma2},
             {"phi", s_phi},         {"terms", s_terms},   {"paths", s_paths}, {"grid", s_grid}};
      if (seed) c["seed"] = *seed;
      sg_sample_result* res = nullptr;
      const sg_status st = sg_sample_run(c.dump().c_str(), common.jobs, &res);
      if (st != SG_OK) return fail(st);
      std::error_code ec;
      std::filesystem::create_directories(s_out, ec);
      if (ec) {
        sg_sample_result_destroy(res);
        std::cerr << "error: cannot create " << s_out << "\n";
        return kConfig;
      }
      const size_t n = sg_sample_result_count(res);
      bool ok = true;
      for (size_t i = 0; i <= n && ok; ++i) {
        const char *name = nullptr, *contents = nullptr;
        size_t len = 0;
        sg_sample_result_file(res, i, &name, &contents, &len);
        std::ofstream f(std::filesystem::path(s_out) / name, std::ios::binary);
        f.write(contents, static_cast<std::streamsize>(len));
        ok = static_cast<bool>(f);
      }
      sg_sample_result_destroy(res);
      if (!ok) {
        std::cerr << "error: writing to " << s_out << " failed\n";
        return kNumeric;
      }
      std::cerr << "wrote " << n << " paths and manifest.json to " << s_out << "\n";
      return kOk;
    }

    if (kl->parsed()) {
      json c{{"kernel", k_kernel}, {"hurst", k_H},     {"r", k_r},           {"theta", k_theta},
             {"sigma2", k_sigma2}, {"phi", k_phi},     {"count", k_count},   {"nystrom", k_nystrom},
             {"gate", k_gate}};
      if (k_format == "json") {
        sg_kl* h = nullptr;
        sg_status st = sg_kl_create(c.dump().c_str(), &h);
        if (st != SG_OK) return fail(st);
        const Text t = call_text([&](char* b, size_t cap, size_t* need) { return sg_kl_json(h, b, cap, need); });
        sg_kl_destroy(h);
        if (t.st != SG_OK) return fail(t.st);
        return write_file(k_out, t.s) ? kOk : kNumeric;
      }
      int pass = 0;
      const Text t = call_text(
          [&](char* b, size_t cap, size_t* need) { return sg_kl_table_csv(c.dump().c_str(), b, cap, need, &pass); });
      if (t.st != SG_OK) return fail(t.st);
      if (!write_file(k_out, t.s)) return kNumeric;
      if (!pass) {
        std::cerr << "gate failure: rel_err above the configured gate\n";
        return kGate;
      }
      return kOk;
    }

    if (pw->parsed()) {
      sg_pw* h = nullptr;
      sg_status st;
      if (p_process == "fbm") {
        st = sg_pw_create_fbm(p_H, p_r, p_terms, p_basis == "sincos" ? SG_PW_SINCOS : SG_PW_INCREMENT,
                              p_norm == "chain" ? SG_NORM_CHAIN : SG_NORM_STANDARD, &h);
      } else if (p_process == "ou") {
        st = sg_pw_create_stationary(&p_theta, 1, p_sigma2, p_r, p_terms, &h);
      } else if (p_process == "ar") {
        if (p_phi.empty()) {
          std::cerr << "error: ar needs --phi\n";
          return kConfig;
        }
        st = sg_pw_create_stationary(p_phi.data(), p_phi.size(), p_sigma2, p_r, p_terms, &h);
      } else {
        const int which = p_process == "even-martingale" ? SG_MART_EVEN
                          : p_process == "odd-martingale" ? SG_MART_ODD
                                                          : SG_MART_EVEN_BRIDGE;
        st = sg_pw_create_martingale(p_H, p_r, p_terms, which, &h);
      }
      if (st != SG_OK) return fail(st);
      std::string text;
      if (p_format == "json") {
        const Text t = call_text([&](char* b, size_t cap, size_t* need) { return sg_pw_json(h, b, cap, need); });
        if (t.st != SG_OK) {
          sg_pw_destroy(h);
          return fail(t.st);
        }
        text = t.s;
      } else {
        size_t n = 0;
        sg_pw_terms(h, &n);
        std::vector<double> f(n), v(n);
        sg_pw_spectrum(h, f.data(), v.data(), n);
        text = "n,lambda,variance\n";
        char line[96];
        for (size_t i = 0; i < n; ++i) {
          std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, f[i], v[i]);
          text += line;
        }
      }
      sg_pw_destroy(h);
      return write_file(p_out, text) ? kOk : kNumeric;
    }

    if (zeros->parsed()) {
      if (z_nu.has_value() == z_H.has_value()) {
        std::cerr << "error: give exactly one of --nu and --hurst\n";
        return kConfig;
      }
      const double nu = z_nu ? *z_nu : 1.0 - *z_H;
      std::vector<double> roots(z_count), res(z_count);
      const sg_status st = sg_bessel_zeros(nu, z_r, z_count, roots.data(), res.data());
      if (st != SG_OK) return fail(st);
      std::string text = "n,zero,residual\n";
      char line[96];
      for (size_t i = 0; i < z_count; ++i) {
        std::snprintf(line, sizeof line, "%zu,%.17g,%.3e\n", i + 1, roots[i], res[i]);
        text += line;
      }
      return write_file(z_out, text) ? kOk : kNumeric;
    }

    if (rate->parsed()) {
      const auto seed = resolve_seed(t_seed);
      if (t_mc > 0 && !seed) {
        std::cerr << "error: --mc-paths needs --seed\n";
        return kConfig;
      }
      json c{{"hurst", t_H}, {"r", t_r}, {"Ns", t_Ns}, {"grid", t_grid}, {"pool", t_pool}, {"mc_paths", t_mc}};
      if (seed) c["seed"] = *seed;
      const Text t =
          call_text([&](char* b, size_t cap, size_t* need) { return sg_rate_json(c.dump().c_str(), b, cap, need); });
      if (t.st != SG_OK) return fail(t.st);
      if (!write_file(t_out, t.s)) return kNumeric;
      const double slope = json::parse(t.s).at("slope").get<double>();
      if (!(std::fabs(slope + 2.0 * t_H) <= t_gate)) {
        std::cerr << "gate failure: slope " << slope << " vs " << -2.0 * t_H << "\n";
        return kGate;
      }
      return kOk;
    }

    if (mart->parsed()) {
      const auto seed = resolve_seed(m_seed);
      json c{{"transform", m_transform}, {"hurst", m_H}, {"r", m_r}, {"grid", m_grid}, {"paths", m_paths}};
      if (seed) c["seed"] = *seed;
      const Text t = call_text(
          [&](char* b, size_t cap, size_t* need) { return sg_martingale_json(c.dump().c_str(), b, cap, need); });
      if (t.st != SG_OK) return fail(t.st);
      return write_file(m_out, t.s) ? kOk : kNumeric;
    }

    if (verify->parsed()) {
      json c = json::object();
      if (!v_config.empty()) {
        std::ifstream f(v_config);
        if (!f) {
          std::cerr << "error: cannot read " << v_config << "\n";
          return kConfig;
        }
        try {
          c = json::parse(f);
        } catch (const json::parse_error& e) {
          std::cerr << "error: " << v_config << " is not valid JSON\n";
          return kConfig;
        }
        if (!c.is_object()) {
          std::cerr << "error: " << v_config << " must hold a JSON object\n";
          return kConfig;
        }
      }
      if (v_quick) c["quick"] = true;
      if (!v_only.empty()) c["only"] = v_only;
      if (const auto seed = resolve_seed(v_seed)) c["seed"] = *seed;
      int failures = 0;
      auto cb = [](int, int, const char* line, void*) { std::cout << line << "\n" << std::flush; };
      const sg_status st = sg_verify(c.dump().c_str(), cb, nullptr, &failures);
      if (st != SG_OK) return fail(st);
      std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
      return failures == 0 ? kOk : kGate;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}
