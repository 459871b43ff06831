#include "spectralgauss/run.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <thread>

#include <json.hpp>

#include "spectralgauss/format.hpp"
#include "spectralgauss/martingales.hpp"
#include "spectralgauss/verify.hpp"

namespace sg {

using nlohmann::json;

namespace {

const std::vector<std::string> kProcesses{"fbm",          "fbm-even",       "fbm-odd",          "ou",
                                          "ar",           "bm",             "bm-bridge",        "even-martingale",
                                          "odd-martingale", "even-bridge",  "odd-bridge",       "single-sided-martingale",
                                          "alpha-wiener-bridge", "inverse-even-bridge"};

bool member(const std::vector<std::string>& v, const std::string& s) {
  for (const auto& x : v)
    if (x == s) return true;
  return false;
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

json parse(const std::string& text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

bool uses_hurst(const std::string& p) {
  return p != "ou" && p != "ar" && p != "bm" && p != "bm-bridge";
}

Parity parity_of(const std::string& p) {
  return p.rfind("odd", 0) == 0 ? Parity::Odd : Parity::Even;
}

}  // namespace

SampleConfig sample_config_from_json(const std::string& text) {
  const json j = parse(text);
  SampleConfig c;
  read(j, "process", c.process);
  read(j, "method", c.method);
  read(j, "basis", c.basis);
  read(j, "norm", c.norm);
  read(j, "hurst", c.H);
  read(j, "r", c.r);
  read(j, "theta", c.theta);
  read(j, "sigma2", c.sigma2);
  read(j, "phi", c.phi);
  read(j, "terms", c.terms);
  read(j, "paths", c.paths);
  read(j, "grid", c.grid);
  if (j.contains("seed")) {
    read(j, "seed", c.seed);
    c.has_seed = true;
  }
  return c;
}

std::string sample_config_to_json(const SampleConfig& c) {
  json j{{"process", c.process}, {"method", c.method}, {"basis", c.basis}, {"norm", c.norm},
         {"hurst", c.H},         {"r", c.r},           {"theta", c.theta}, {"sigma2", c.sigma2},
         {"phi", c.phi},         {"terms", c.terms},   {"paths", c.paths}, {"grid", c.grid}};
  if (c.has_seed) j["seed"] = c.seed;
  return j.dump();
}

void validate(const SampleConfig& c) {
  if (!member(kProcesses, c.process)) throw ConfigError("unknown process '" + c.process + "'");
  if (!member({"auto", "pw", "kl", "cholesky"}, c.method)) throw ConfigError("unknown method '" + c.method + "'");
  if (!member({"sincos", "increment"}, c.basis)) throw ConfigError("unknown basis '" + c.basis + "'");
  if (!member({"chain", "standard"}, c.norm)) throw ConfigError("unknown normalization '" + c.norm + "'");
  if (!c.has_seed) throw ConfigError("a seed is required for sampling");
  if (c.terms < 1) throw ConfigError("terms must be at least 1");
  if (c.terms > 1000000) throw ConfigError("terms must be at most 1e6");
  if (c.paths < 1) throw ConfigError("paths must be at least 1");
  if (c.paths > 1000000) throw ConfigError("paths must be at most 1e6");
  if (c.grid < 2) throw ConfigError("grid must have at least 2 points");
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw ConfigError("r must be positive");
  if (uses_hurst(c.process) && !(c.H > 0.0 && c.H < 1.0)) throw ConfigError("hurst must lie in (0, 1)");
  if (c.process == "ou" && !(c.theta > 0.0 && c.sigma2 > 0.0)) throw ConfigError("ou needs theta > 0 and sigma2 > 0");
  if (c.process == "ar") {
    if (c.phi.empty()) throw ConfigError("ar needs at least one phi");
    for (double p : c.phi)
      if (!(p > 0.0)) throw ConfigError("ar phi values must be positive");
    if (!(c.sigma2 > 0.0)) throw ConfigError("ar needs sigma2 > 0");
  }
  const std::string m = resolve_method(c);
  if (m == "pw" && !member({"fbm", "ou", "ar", "even-martingale", "odd-martingale", "even-bridge"}, c.process))
    throw ConfigError("process '" + c.process + "' has no Paley-Wiener sampler");
  if (m == "kl" && !member({"bm", "bm-bridge", "ou", "ar", "even-martingale", "odd-martingale", "even-bridge",
                            "odd-bridge"},
                           c.process))
    throw ConfigError("process '" + c.process + "' has no Karhunen-Loeve sampler");
  if (c.basis == "increment" && !(m == "pw" && c.process == "fbm"))
    throw ConfigError("the increment basis applies to pw FBM sampling only");
}

std::string resolve_method(const SampleConfig& c) {
  if (c.method != "auto") return c.method;
  if (member({"fbm", "ou", "ar", "even-martingale", "odd-martingale", "even-bridge"}, c.process)) return "pw";
  if (member({"bm", "bm-bridge", "odd-bridge"}, c.process)) return "kl";
  return "cholesky";
}

ProcessSpec process_from_tag(const SampleConfig& c) {
  const FbmNorm n = c.norm == "chain" ? FbmNorm::Chain : FbmNorm::Standard;
  ProcessSpec s;
  if (c.process == "fbm") s = ProcessSpec::fbm(c.H, n);
  else if (c.process == "fbm-even") s = ProcessSpec::fbm_even(c.H, n);
  else if (c.process == "fbm-odd") s = ProcessSpec::fbm_odd(c.H, n);
  else if (c.process == "ou") s = ProcessSpec::ou(c.theta, c.sigma2);
  else if (c.process == "ar") s = ProcessSpec::autoregressive(ArSpec{c.phi, c.sigma2});
  else if (c.process == "bm") s = ProcessSpec::brownian_motion();
  else if (c.process == "bm-bridge") s = ProcessSpec::brownian_bridge(c.r);
  else if (c.process == "even-martingale") s = ProcessSpec::even_martingale(c.H);
  else if (c.process == "odd-martingale") s = ProcessSpec::odd_martingale(c.H);
  else if (c.process == "even-bridge") s = ProcessSpec::even_bridge(c.H, c.r);
  else if (c.process == "odd-bridge") s = ProcessSpec::odd_bridge(c.H, c.r);
  else if (c.process == "single-sided-martingale") s = ProcessSpec::single_sided_martingale(c.H);
  else if (c.process == "alpha-wiener-bridge") s = ProcessSpec::alpha_wiener_bridge(c.H, c.r);
  else if (c.process == "inverse-even-bridge") s = ProcessSpec::inverse_even_bridge(c.H, c.r);
  else throw ConfigError("unknown process '" + c.process + "'");
  s.r = c.r;
  return s;
}

SampleOutput sample_run(const SampleConfig& c, unsigned jobs) {
  validate(c);
  const std::string method = resolve_method(c);
  const auto N = static_cast<std::size_t>(c.terms);
  const auto P = static_cast<std::size_t>(c.paths);
  const auto G = static_cast<std::size_t>(c.grid);
  const ProcessSpec spec = process_from_tag(c);

  std::function<SamplePath(std::mt19937_64&)> draw;
  std::vector<double> grid;
  json info;
  if (method == "pw") {
    auto e = std::make_shared<PWExpansion>();
    if (c.process == "fbm")
      *e = pw_fbm(c.H, c.r, N, c.basis == "increment" ? PWBasis::Increment : PWBasis::SinCos, spec.norm);
    else if (c.process == "ou" || c.process == "ar")
      *e = pw_stationary(spec, c.r, N);
    else
      *e = pw_martingale(c.H, c.r, N,
                         c.process == "even-martingale"  ? MartingaleSeries::Even
                         : c.process == "odd-martingale" ? MartingaleSeries::Odd
                                                         : MartingaleSeries::EvenBridge);
    grid = uniform_grid(e->window_lo(), e->window_hi(), G);
    info["basis"] = basis_name(e->basis);
    info["amplitude"] = e->amplitude;
    if (e->basis == PWBasis::Increment)
      draw = [e, grid](std::mt19937_64& rng) { return evaluate_complex_path(*e, complex_draw(*e, rng), grid); };
    else
      draw = [e, grid](std::mt19937_64& rng) { return evaluate_path(*e, sample_coefficients(*e, rng), grid); };
  } else if (method == "kl") {
    KLConfig kc;
    kc.H = c.H;
    kc.r = c.r;
    kc.theta = c.theta;
    kc.sigma2 = c.sigma2;
    kc.phi = c.phi;
    kc.kernel = member({"even-martingale", "odd-martingale", "even-bridge", "odd-bridge"}, c.process)
                    ? "fbm-" + c.process
                    : c.process;
    auto b = std::make_shared<KLBasis>(kl_basis(kernel_from_tag(kc), c.r, N));
    grid = uniform_grid(0.0, c.r, G);
    // Martingale kernels are taken in L^2(dt) after dividing by sqrt(m'_s m'_t).
    const bool mart = kc.kernel.rfind("fbm-", 0) == 0;
    const bool odd = parity_of(c.process) == Parity::Odd;
    const double H = c.H;
    std::vector<double> scale(G, 1.0);
    for (std::size_t i = 0; i < G && mart; ++i) {
      const double t = grid[i];
      scale[i] = t > 0.0 ? std::sqrt(std::numbers::pi * std::pow(t, odd ? 2.0 * H - 1.0 : 1.0 - 2.0 * H)) : 0.0;
    }
    auto phis = std::make_shared<std::vector<std::vector<double>>>(b->size(), std::vector<double>(G));
    for (std::size_t n = 0; n < b->size(); ++n)
      for (std::size_t i = 0; i < G; ++i) (*phis)[n][i] = scale[i] * b->phi(n, grid[i]);
    info["kernel"] = kernel_name(b->spec.kind);
    draw = [b, phis, grid](std::mt19937_64& rng) {
      std::normal_distribution<double> nd(0.0, 1.0);
      SamplePath p;
      p.grid = grid;
      p.values.assign(grid.size(), 0.0);
      for (std::size_t n = 0; n < b->size(); ++n) {
        const double z = b->weight(n) * nd(rng);
        for (std::size_t i = 0; i < grid.size(); ++i) p.values[i] += z * (*phis)[n][i];
      }
      return p;
    };
  } else {
    const bool twosided = c.process == "fbm" || c.process == "ou" || c.process == "ar";
    grid = uniform_grid(twosided ? -c.r : 0.0, c.r, G);
    auto s = std::make_shared<CholeskySampler>(covariance_matrix(spec, grid, false));
    info["jitter"] = s->jitter();
    draw = [s](std::mt19937_64& rng) { return s->sample(rng); };
  }

  SampleOutput out;
  out.paths.resize(P);
  std::vector<std::string> errors(P);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p; (p = next++) < P;) {
      try {
        std::mt19937_64 rng = make_stream(c.seed, p);
        char name[32];
        std::snprintf(name, sizeof name, "path_%05zu.csv", p);
        out.paths[p] = OutputFile{name, path_csv(draw(rng))};
      } catch (const std::exception& e) {
        errors[p] = e.what();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(P)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < jobs; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw NumericError("sampling failed: " + e);

  json m;
  m["config"] = json::parse(sample_config_to_json(c));
  m["method"] = method;
  m["seed"] = c.seed;
  m["terms"] = c.terms;
  m["normalization"] = c.norm;
  m["process"] = kind_name(spec.kind);
  m["grid"] = {{"lo", grid.front()}, {"hi", grid.back()}, {"points", grid.size()}};
  m["stream"] = "mt19937_64 seeded by seed_seq(seed, path index)";
  m["info"] = info;
  json files = json::array();
  for (const auto& f : out.paths) files.push_back(f.name);
  m["files"] = files;
  out.manifest = OutputFile{"manifest.json", m.dump(2) + "\n"};
  return out;
}

KLConfig kl_config_from_json(const std::string& text) {
  const json j = parse(text);
  KLConfig c;
  read(j, "kernel", c.kernel);
  read(j, "hurst", c.H);
  read(j, "r", c.r);
  read(j, "theta", c.theta);
  read(j, "sigma2", c.sigma2);
  read(j, "phi", c.phi);
  read(j, "count", c.count);
  read(j, "nystrom", c.nystrom);
  read(j, "gate", c.gate);
  if (c.count < 1 || c.count > 2000) throw ConfigError("count must lie in [1, 2000]");
  if (c.nystrom < 16 || c.nystrom > 20000) throw ConfigError("nystrom grid must lie in [16, 20000]");
  if (!(c.r > 0.0)) throw ConfigError("r must be positive");
  return c;
}

KLKernelSpec kernel_from_tag(const KLConfig& c) {
  const std::string& k = c.kernel;
  auto hurst = [&] {
    if (!(c.H > 0.0 && c.H < 1.0)) throw ConfigError("hurst must lie in (0, 1)");
    return c.H;
  };
  if (k == "bm") return KLKernelSpec::bm();
  if (k == "bm-bridge") return KLKernelSpec::bm_bridge();
  if (k == "ou") {
    if (!(c.theta > 0.0 && c.sigma2 > 0.0)) throw ConfigError("ou needs theta > 0 and sigma2 > 0");
    return KLKernelSpec::ou(c.theta, c.sigma2);
  }
  if (k == "ar") {
    ArSpec a{c.phi, c.sigma2};
    try {
      check_ar(a);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    return KLKernelSpec::autoregressive(a);
  }
  if (k == "fbm-even-martingale") return KLKernelSpec::fbm_even_martingale(hurst());
  if (k == "fbm-odd-martingale") return KLKernelSpec::fbm_odd_martingale(hurst());
  if (k == "fbm-even-bridge") return KLKernelSpec::fbm_even_bridge(hurst());
  if (k == "fbm-odd-bridge") return KLKernelSpec::fbm_odd_bridge(hurst());
  if (k == "ext-even-gamma") {
    const double H = hurst();
    return KLKernelSpec::extended_bridge(
        H, [H](double t) { return std::pow(t, 2.0 * H) / (2.0 * H); }, Parity::Even, KappaForm::Gamma);
  }
  if (k == "ext-odd-alpha") {
    const double H = hurst();
    return KLKernelSpec::extended_bridge(
        H, [H](double t) { return std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H); }, Parity::Odd, KappaForm::Alpha);
  }
  throw ConfigError("unknown kernel '" + k + "'");
}

double default_gate(const std::string& kernel) { return kernel.rfind("ext-", 0) == 0 ? 1e-3 : 1e-4; }

KLTable kl_table(const KLConfig& c) {
  const KLKernelSpec spec = kernel_from_tag(c);
  const auto count = static_cast<std::size_t>(c.count);
  const KLBasis b = kl_basis(spec, c.r, count);
  const EigReport e = nystrom_eig(b.kernel_fn, c.r, static_cast<std::size_t>(c.nystrom), count, c.kernel, false);
  KLTable t;
  t.gate = c.gate > 0.0 ? c.gate : default_gate(c.kernel);
  for (std::size_t n = 0; n < std::min(b.size(), e.eigenvalues.size()); ++n) {
    KLTableRow row{n + 1, b.eigenvalues[n], e.eigenvalues[n], 0.0};
    row.rel_err = std::fabs(row.closed_form - row.nystrom) / std::fabs(row.nystrom);
    if (!(row.rel_err <= t.gate)) t.pass = false;
    t.rows.push_back(row);
  }
  return t;
}

std::string kl_table_csv(const KLTable& t) {
  std::string out = "n,closed_form,nystrom,rel_err\n";
  for (const auto& r : t.rows)
    out += std::to_string(r.n) + "," + format_double(r.closed_form) + "," + format_double(r.nystrom) + "," +
           format_double(r.rel_err) + "\n";
  return out;
}

MartingaleConfig martingale_config_from_json(const std::string& text) {
  const json j = parse(text);
  MartingaleConfig c;
  read(j, "transform", c.transform);
  read(j, "hurst", c.H);
  read(j, "r", c.r);
  read(j, "grid", c.grid);
  read(j, "paths", c.paths);
  if (j.contains("seed")) {
    read(j, "seed", c.seed);
    c.has_seed = true;
  }
  if (!member({"even", "odd", "single-sided"}, c.transform)) throw ConfigError("unknown transform '" + c.transform + "'");
  if (!(c.H > 0.0 && c.H < 1.0)) throw ConfigError("hurst must lie in (0, 1)");
  if (!(c.r > 0.0) || !std::isfinite(c.r)) throw ConfigError("r must be positive");
  if (c.grid < 17 || c.grid > 8193) throw ConfigError("grid must lie in [17, 8193]");
  if (c.paths < 100 || c.paths > 1000000) throw ConfigError("paths must lie in [100, 1e6]");
  if (!c.has_seed) throw ConfigError("a seed is required");
  return c;
}

std::string martingale_report(const MartingaleConfig& c) {
  const double H = c.H, r = c.r;
  const bool single = c.transform == "single-sided";
  const bool even = c.transform != "odd";
  auto G = static_cast<std::size_t>(c.grid);
  if (single && G % 2 == 0) ++G;  // M lives on the first half
  const std::vector<double> grid = uniform_grid(0.0, single ? 2.0 * r : r, G);
  ProcessSpec spec = single ? ProcessSpec::fbm(H, FbmNorm::Chain)
                     : even ? ProcessSpec::fbm_even(H, FbmNorm::Chain)
                            : ProcessSpec::fbm_odd(H, FbmNorm::Chain);
  CholeskySampler S(covariance_matrix(spec, grid, false));
  std::mt19937_64 rng = make_stream(c.seed, 0);
  const Eigen::MatrixXd X = S.sample_many(rng, static_cast<std::size_t>(c.paths));
  const std::size_t last = single ? (G - 1) / 2 : G - 1;
  const LinearTransform T = single ? fwd_single_sided_transform(H, grid)
                            : even ? fwd_even_transform(H, grid)
                                   : fwd_odd_transform(H, grid);
  const Eigen::MatrixXd M = T.apply_many(X);
  json items = json::array();
  double zmax = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    const std::size_t i = k * last / 8;
    if (i == 0) continue;
    const double t = grid[i];
    const double target = std::numbers::pi * (even ? std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H)
                                                   : std::pow(t, 2.0 * H) / (2.0 * H));
    const Eigen::ArrayXd m2 = M.row(static_cast<Eigen::Index>(i)).array().square();
    const double mean = m2.mean();
    const double se = std::sqrt((m2 - mean).square().sum() / (m2.size() - 1.0) / m2.size());
    const double z = std::fabs(mean - target) / se;
    zmax = std::max(zmax, z);
    items.push_back({{"t", t}, {"mean_m2", mean}, {"target", target}, {"stderr", se}, {"z", z}});
  }
  // Endpoint inversion from M on [0, grid[last]].
  const std::vector<double> mgrid(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  const Eigen::RowVectorXd w = single ? inv_single_sided_weights(H, mgrid)
                               : even ? inv_even_weights(H, mgrid)
                                      : inv_odd_weights(H, mgrid);
  const Eigen::RowVectorXd rec = w * M.topRows(static_cast<Eigen::Index>(last) + 1);
  const Eigen::RowVectorXd truth = X.row(static_cast<Eigen::Index>(G - 1));
  json out;
  out["kind"] = "martingale";
  out["transform"] = c.transform;
  out["H"] = H;
  out["r"] = r;
  out["grid"] = G;
  out["paths"] = c.paths;
  out["seed"] = c.seed;
  out["items"] = items;
  out["max_z"] = zmax;
  out["inverse_rms_rel"] = (rec - truth).norm() / truth.norm();
  return out.dump();
}

RateConfig rate_config_from_json(const std::string& text) {
  const json j = parse(text);
  RateConfig c;
  read(j, "hurst", c.H);
  read(j, "r", c.r);
  read(j, "Ns", c.Ns);
  read(j, "grid", c.grid);
  read(j, "pool", c.pool);
  read(j, "mc_paths", c.mc_paths);
  read(j, "seed", c.seed);
  if (!(c.H > 0.0 && c.H < 1.0)) throw ConfigError("hurst must lie in (0, 1)");
  if (!(c.r > 0.0)) throw ConfigError("r must be positive");
  if (c.grid < 2) throw ConfigError("grid must have at least 2 points");
  if (c.pool < 1 || c.mc_paths < 0) throw ConfigError("pool must be positive and mc_paths non-negative");
  for (long long n : c.Ns)
    if (n < 1) throw ConfigError("Ns must be positive");
  return c;
}

std::string rate_run(const RateConfig& c) {
  std::vector<std::size_t> Ns(c.Ns.begin(), c.Ns.end());
  const RateReport rep = truncation_rate(c.H, c.r, Ns, uniform_grid(-c.r, c.r, static_cast<std::size_t>(c.grid)),
                                         static_cast<std::size_t>(c.pool), static_cast<std::size_t>(c.mc_paths), c.seed);
  return rate_json(rep);
}

}  // namespace sg
