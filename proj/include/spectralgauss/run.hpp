#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spectralgauss/kl.hpp"
#include "spectralgauss/processes.hpp"
#include "spectralgauss/series.hpp"

namespace sg {

// Reproducible CLI-style runs. Configs travel as JSON so the C API can carry them.

struct SampleConfig {
  std::string process = "fbm";
  std::string method = "auto";  // auto | pw | kl | cholesky
  std::string basis = "sincos";  // fbm only: sincos | increment
  std::string norm = "chain";    // fbm only: chain | standard
  double H = 0.5;
  double r = 1.0;
  double theta = 1.0;
  double sigma2 = 1.0;
  std::vector<double> phi;
  long long terms = 256;
  long long paths = 1;
  long long grid = 257;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

SampleConfig sample_config_from_json(const std::string& json);
std::string sample_config_to_json(const SampleConfig& c);
void validate(const SampleConfig& c);

// Process tags and the method "auto" resolves to.
ProcessSpec process_from_tag(const SampleConfig& c);
std::string resolve_method(const SampleConfig& c);

struct OutputFile {
  std::string name;
  std::string contents;
};

struct SampleOutput {
  std::vector<OutputFile> paths;
  OutputFile manifest;
};

// Paths are independent streams (seed, index), so the result does not depend on jobs.
SampleOutput sample_run(const SampleConfig& c, unsigned jobs = 1);

struct KLConfig {
  std::string kernel = "ou";
  double H = 0.3;
  double r = 1.0;
  double theta = 1.0;
  double sigma2 = 2.0;
  std::vector<double> phi{1.0, 2.0};
  long long count = 10;
  long long nystrom = 2000;
  double gate = -1.0;  // default: 1e-4, or 1e-3 for extended bridges
};

KLConfig kl_config_from_json(const std::string& json);
KLKernelSpec kernel_from_tag(const KLConfig& c);
double default_gate(const std::string& kernel);

struct KLTableRow {
  std::size_t n = 0;
  double closed_form = 0.0, nystrom = 0.0, rel_err = 0.0;
};

struct KLTable {
  std::vector<KLTableRow> rows;
  double gate = 0.0;
  bool pass = true;
};

KLTable kl_table(const KLConfig& c);
std::string kl_table_csv(const KLTable& t);

struct MartingaleConfig {
  std::string transform = "even";  // even | odd | single-sided
  double H = 0.3;
  double r = 1.0;
  long long grid = 257;
  long long paths = 2000;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

MartingaleConfig martingale_config_from_json(const std::string& json);

// Transforms chain-normalized FBM paths (Cholesky) and compares E M_t^2 with
// pi alpha_t at up to 8 times; also reports the endpoint inversion error.
std::string martingale_report(const MartingaleConfig& c);

struct RateConfig {
  double H = 0.5;
  double r = 1.0;
  std::vector<long long> Ns{32, 64, 128, 256, 512, 1024, 2048, 4096};
  long long grid = 129;
  long long pool = 16384;
  long long mc_paths = 16;
  std::uint64_t seed = 1;
};

RateConfig rate_config_from_json(const std::string& json);
std::string rate_run(const RateConfig& c);

}  // namespace sg
