#pragma once

#include <string>
#include <vector>

#include "spectralgauss/kl.hpp"
#include "spectralgauss/series.hpp"
#include "spectralgauss/verify.hpp"

namespace sg {

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

// Header row "t,value" ("t,re,im" for complex paths), one line per grid point.
std::string path_csv(const SamplePath& p);

std::string pw_json(const PWExpansion& e);
std::string kl_json(const KLBasis& b);
std::string eig_json(const EigReport& r);
std::string rate_json(const RateReport& r);
std::string eig_csv(const EigReport& r);

}  // namespace sg
