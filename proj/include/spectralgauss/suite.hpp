#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sg {

struct SuiteConfig {
  bool quick = false;
  std::uint64_t seed = 20261014;
  std::vector<int> only;  // empty: all criteria
  std::map<std::string, double> tol{
      {"bessel_tol", 1e-10},  {"zero_residual_tol", 1e-10}, {"zero_spacing_tol", 1e-3},
      {"lagrange_tol", 1e-7}, {"det_tol", 1e-9},            {"pw_cov_tol", 1e-3},
      {"mc_z", 4.0},          {"mc_fraction", 0.99},        {"rate_slope_tol", 0.15},
      {"kl_tol", 1e-4},       {"kl_ext_tol", 1e-3},         {"gram_tol", 1e-8},
      {"mart_z", 4.0},        {"inv_rms_tol", 0.01},        {"duality_tol", 1e-10}};
};

// Overrides tolerances and options from a JSON object; unknown keys and
// non-positive or non-finite tolerances are rejected.
SuiteConfig suite_config_from_json(const std::string& json, SuiteConfig base = {});

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

// One line per criterion.
std::string format_result(const CriterionResult& r);

}  // namespace sg
