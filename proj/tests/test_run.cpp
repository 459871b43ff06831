#include <cmath>
#include <cstdlib>
#include <random>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "spectralgauss/format.hpp"
#include "spectralgauss/run.hpp"
#include "spectralgauss/suite.hpp"

using namespace sg;
using nlohmann::json;

namespace {

SampleConfig small(const std::string& process) {
  SampleConfig c;
  c.process = process;
  c.H = 0.3;
  c.r = 1.0;
  c.terms = 32;
  c.paths = 3;
  c.grid = 17;
  c.phi = {1.0, 2.0};
  c.seed = 99;
  c.has_seed = true;
  return c;
}

}  // namespace

TEST_SUITE("format") {
  TEST_CASE("shortest round-trip decimals") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1e3, 1e3);
    for (int i = 0; i < 2000; ++i) {
      const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
      CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(0.1) == "0.1");
  }

  TEST_CASE("path CSV layout") {
    CHECK(path_csv(SamplePath{{0.0, 0.5}, {0.0, 1.25}, {}}) == "t,value\n0,0\n0.5,1.25\n");
    CHECK(path_csv(SamplePath{{0.0}, {1.0}, {2.0}}) == "t,re,im\n0,1,2\n");
  }

  TEST_CASE("expansion and basis JSON") {
    const json p = json::parse(pw_json(pw_fbm(0.3, 1.0, 4)));
    CHECK(p["kind"] == "pw");
    CHECK(p["items"].size() == 5);
    const json k = json::parse(kl_json(kl_basis(KLKernelSpec::bm(), 1.0, 3)));
    CHECK(k["items"].size() == 3);
  }
}

TEST_SUITE("run") {
  TEST_CASE("sample configs round-trip through JSON") {
    const SampleConfig c = small("ou");
    const SampleConfig d = sample_config_from_json(sample_config_to_json(c));
    CHECK(sample_config_to_json(d) == sample_config_to_json(c));
    CHECK(d.seed == 99);
    CHECK(d.has_seed);
  }

  TEST_CASE("invalid sample configs") {
    SampleConfig c = small("fbm");
    c.terms = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = small("fbm");
    c.has_seed = false;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = small("no-such-process");
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = small("fbm");
    c.method = "fourier";
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(sample_config_from_json("{\"process\": 3}"), ConfigError);
    CHECK_THROWS_AS(sample_config_from_json("not json"), ConfigError);
  }

  TEST_CASE("every process tag samples deterministically") {
    for (const char* p : {"fbm", "fbm-even", "fbm-odd", "ou", "ar", "bm", "bm-bridge", "even-martingale",
                          "odd-martingale", "even-bridge", "odd-bridge", "single-sided-martingale",
                          "alpha-wiener-bridge", "inverse-even-bridge"}) {
      CAPTURE(p);
      const SampleConfig c = small(p);
      const SampleOutput a = sample_run(c, 1), b = sample_run(c, 2);
      REQUIRE(a.paths.size() == 3);
      CHECK(a.paths[0].name == "path_00000.csv");
      CHECK(a.manifest.name == "manifest.json");
      for (std::size_t i = 0; i < 3; ++i) CHECK(a.paths[i].contents == b.paths[i].contents);
      CHECK(a.manifest.contents == b.manifest.contents);
      CHECK(a.paths[0].contents != a.paths[1].contents);
      const json m = json::parse(a.manifest.contents);
      CHECK(m["seed"] == 99);
      CHECK(m["method"] == resolve_method(c));
      // The manifest config reproduces the run.
      const SampleOutput again = sample_run(sample_config_from_json(m["config"].dump()), 1);
      CHECK(again.paths[2].contents == a.paths[2].contents);
    }
  }

  TEST_CASE("method resolution") {
    CHECK(resolve_method(small("fbm")) == "pw");
    CHECK(resolve_method(small("bm")) == "kl");
    CHECK(resolve_method(small("alpha-wiener-bridge")) == "cholesky");
    SampleConfig c = small("fbm");
    c.method = "cholesky";
    CHECK(resolve_method(c) == "cholesky");
  }

  TEST_CASE("KL tables and kernel tags") {
    KLConfig k;
    k.kernel = "bm";
    k.count = 3;
    k.nystrom = 2000;
    const KLTable t = kl_table(k);
    CHECK(t.pass);
    CHECK(t.gate == 1e-4);
    CHECK(kl_table_csv(t).rfind("n,closed_form,nystrom,rel_err\n", 0) == 0);
    k.kernel = "nope";
    CHECK_THROWS_AS(kernel_from_tag(k), ConfigError);
    CHECK(default_gate("ext-even-gamma") == 1e-3);
    CHECK(kl_config_from_json("{\"kernel\":\"ou\",\"count\":4}").count == 4);
  }

  TEST_CASE("rate and martingale runs emit JSON") {
    RateConfig r;
    r.Ns = {32, 64, 128, 256};
    r.pool = 2048;
    r.mc_paths = 0;
    const json j = json::parse(rate_run(r));
    CHECK(j["kind"] == "rate");
    CHECK(j["items"].size() == 4);
    MartingaleConfig m;
    m.paths = 200;
    m.grid = 65;
    m.seed = 1;
    m.has_seed = true;
    const std::string qs = martingale_report(m);
    const json q = json::parse(qs);
    CHECK(q["items"].size() == 8);
    CHECK(q["max_z"].get<double>() >= 0.0);
    CHECK(martingale_report(m) == qs);
  }

  TEST_CASE("suite configuration") {
    const SuiteConfig c = suite_config_from_json("{\"quick\": true, \"bessel_tol\": 1e-9, \"only\": [9]}");
    CHECK(c.quick);
    CHECK(c.tol.at("bessel_tol") == 1e-9);
    CHECK(c.only == std::vector<int>{9});
    CHECK_THROWS_AS(suite_config_from_json("{\"bessel_tolerance\": 1e-9}"), ConfigError);
    CHECK_THROWS_AS(suite_config_from_json("{\"bessel_tol\": -1}"), ConfigError);
    CHECK_THROWS_AS(suite_config_from_json("{\"bessel_tol\": \"tight\"}"), ConfigError);
    CHECK_THROWS_AS(suite_config_from_json("{\"bessel_tol\": 1e-9"), ConfigError);
    const auto res = run_suite(c);
    REQUIRE(res.size() == 1);
    CHECK(res[0].id == 9);
    CHECK(res[0].pass);
    CHECK(format_result(res[0]).rfind("[PASS] criterion  9", 0) == 0);
  }
}
