#include "spectralgauss/format.hpp"

#include <charconv>
#include <cmath>

#include <json.hpp>

namespace sg {

using nlohmann::json;

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string path_csv(const SamplePath& p) {
  std::string out = p.imag.empty() ? "t,value\n" : "t,re,im\n";
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    out += format_double(p.grid[i]);
    out += ',';
    out += format_double(p.values[i]);
    if (!p.imag.empty()) {
      out += ',';
      out += format_double(p.imag[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

json num(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

}  // namespace

std::string pw_json(const PWExpansion& e) {
  json j;
  j["kind"] = "pw";
  j["basis"] = basis_name(e.basis);
  j["r"] = e.r;
  if (e.stationary) {
    j["phi"] = e.ar.phi;
    j["sigma2"] = e.ar.sigma2;
  } else {
    j["H"] = e.H;
    j["norm"] = e.norm == FbmNorm::Chain ? "chain" : "standard";
  }
  j["amplitude"] = e.amplitude;
  json items = json::array();
  for (std::size_t i = 0; i < e.terms(); ++i)
    items.push_back({{"n", i}, {"lambda", e.freq[i]}, {"var", e.var[i]},
                     {"residual", i < e.residuals.size() ? num(e.residuals[i]) : json(0.0)}});
  j["items"] = items;
  return j.dump();
}

std::string kl_json(const KLBasis& b) {
  json j;
  j["kind"] = "kl";
  j["kernel"] = kernel_name(b.spec.kind);
  j["r"] = b.r;
  j["H"] = b.spec.H;
  json items = json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    json it{{"n", i + 1}, {"eigenvalue", b.eigenvalues[i]}, {"w", b.freq[i]}};
    if (i < b.residuals.size()) it["residual"] = num(b.residuals[i]);
    if (i < b.params.size())
      for (const auto& [k, v] : b.params[i]) it["params"][k] = num(v);
    items.push_back(it);
  }
  j["items"] = items;
  return j.dump();
}

std::string eig_json(const EigReport& r) {
  json j;
  j["kind"] = "nystrom";
  j["kernel"] = r.kernel_tag;
  j["r"] = r.r;
  j["n"] = r.n;
  json items = json::array();
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) items.push_back({{"n", i + 1}, {"eigenvalue", r.eigenvalues[i]}});
  j["items"] = items;
  return j.dump();
}

std::string eig_csv(const EigReport& r) {
  std::string out = "n,eigenvalue\n";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
    out += std::to_string(i + 1) + "," + format_double(r.eigenvalues[i]) + "\n";
  return out;
}

std::string rate_json(const RateReport& r) {
  json j;
  j["kind"] = "rate";
  j["H"] = r.H;
  j["r"] = r.r;
  j["pool"] = r.pool;
  j["slope"] = r.fit.slope;
  j["slope_stderr"] = r.fit.stderr_;
  j["slope_ci"] = {r.fit.ci_lo, r.fit.ci_hi};
  j["expected_slope"] = -2.0 * r.H;
  json items = json::array();
  for (std::size_t i = 0; i < r.Ns.size(); ++i) {
    json it{{"N", r.Ns[i]}, {"sup_mean_square", r.sup_ms[i]}};
    if (i < r.sup_abs.size()) it["sup_abs_mc"] = r.sup_abs[i];
    items.push_back(it);
  }
  j["items"] = items;
  return j.dump();
}

}  // namespace sg
