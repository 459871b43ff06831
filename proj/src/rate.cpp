#include <algorithm>
#include <cmath>

#include "spectralgauss/verify.hpp"

namespace sg {

RateReport truncation_rate(double H, double r, const std::vector<std::size_t>& Ns, const std::vector<double>& grid,
                           std::size_t pool, std::size_t mc_paths, std::uint64_t seed) {
  check_hurst(H);
  if (!(r > 0.0)) throw DomainError("truncation_rate: r must be positive");
  if (Ns.size() < 4) throw ConfigError("truncation_rate: need at least four values of N");
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    if (Ns[i] == 0) throw ConfigError("truncation_rate: N must be positive");
    if (i > 0 && Ns[i] <= Ns[i - 1]) throw ConfigError("truncation_rate: Ns must be strictly increasing");
  }
  if (pool < 4 * Ns.back()) throw ConfigError("truncation_rate: insufficient pool (need pool >= 4 max N)");
  if (grid.empty()) throw ConfigError("truncation_rate: empty grid");
  for (double t : grid)
    if (std::fabs(t) > r * (1.0 + 1e-12)) throw DomainError("truncation_rate: grid leaves [-r, r]");

  const PWExpansion e = pw_fbm(H, r, pool, PWBasis::SinCos, FbmNorm::Chain);
  const std::size_t off = e.has_zero ? 1 : 0;
  const double kappa = chain_scale(H);

  RateReport rep;
  rep.H = H;
  rep.r = r;
  rep.Ns = Ns;
  rep.pool = pool;
  rep.sup_ms.assign(Ns.size(), 0.0);

  for (double t : grid) {
    // Suffix sums of 2 sigma_n^2 |1_t(lambda_n)|^2 from the end of the pool.
    const double total = kappa * std::pow(std::fabs(t), 2.0 * H);
    double partial = e.has_zero ? e.var[0] * t * t : 0.0;
    std::vector<double> term(pool);
    for (std::size_t n = 0; n < pool; ++n) {
      const double l = e.freq[off + n];
      const double s = std::sin(0.5 * l * t);
      term[n] = 8.0 * e.var[off + n] * s * s / (l * l);
      partial += term[n];
    }
    // Mass beyond the pool, taken from the exact variance.
    double tail = std::max(total - partial, 0.0);
    std::size_t k = Ns.size();
    for (std::size_t n = pool; n-- > 0;) {
      while (k > 0 && Ns[k - 1] == n + 1) {
        --k;
        rep.sup_ms[k] = std::max(rep.sup_ms[k], tail);
      }
      if (k == 0) break;
      tail += term[n];
    }
  }

  std::vector<double> x(Ns.begin(), Ns.end());
  rep.fit = fit_loglog(x, rep.sup_ms);

  if (mc_paths > 0) {
    rep.sup_abs.assign(Ns.size(), 0.0);
    std::vector<double> sn(pool), cs(pool);
    for (std::size_t p = 0; p < mc_paths; ++p) {
      std::mt19937_64 rng = make_stream(seed, p);
      std::normal_distribution<double> nd(0.0, 1.0);
      for (std::size_t n = 0; n < pool; ++n) {
        const double sd = std::sqrt(0.5 * e.var[off + n]);
        sn[n] = sd * nd(rng);
        cs[n] = sd * nd(rng);
      }
      std::vector<double> sup(Ns.size(), 0.0);
      for (double t : grid) {
        double tail = 0.0;
        std::size_t k = Ns.size();
        for (std::size_t n = pool; n-- > 0 && k > 0;) {
          const double l = e.freq[off + n];
          tail += (2.0 * std::sin(l * t) * sn[n] + 2.0 * (std::cos(l * t) - 1.0) * cs[n]) / l;
          while (k > 0 && Ns[k - 1] == n) {
            --k;
            sup[k] = std::max(sup[k], std::fabs(tail));
          }
        }
      }
      for (std::size_t k = 0; k < Ns.size(); ++k) rep.sup_abs[k] += sup[k] / static_cast<double>(mc_paths);
    }
  }
  return rep;
}

}  // namespace sg
