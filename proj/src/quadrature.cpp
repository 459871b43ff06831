#include "spectralgauss/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sg {

namespace {

QuadRule make_gauss_legendre(std::size_t n) {
  QuadRule q;
  q.x.resize(n);
  q.w.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
    }
    dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
    q.x[i] = -z;
    q.x[n - 1 - i] = z;
    q.w[i] = q.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return q;
}

}  // namespace

const QuadRule& gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<QuadRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, std::make_unique<QuadRule>(make_gauss_legendre(n))).first;
  return *it->second;
}

QuadRule composite_rule(const std::vector<double>& breaks, std::size_t order) {
  const QuadRule& g = gauss_legendre(order);
  QuadRule q;
  if (breaks.size() < 2) return q;
  q.x.reserve((breaks.size() - 1) * order);
  q.w.reserve((breaks.size() - 1) * order);
  for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
    const double a = breaks[p], b = breaks[p + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < order; ++i) {
      q.x.push_back(c + h * g.x[i]);
      q.w.push_back(h * g.w[i]);
    }
  }
  return q;
}

QuadRule composite_uniform(double a, double b, std::size_t panels, std::size_t order) {
  std::vector<double> br(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i)
    br[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  br[panels] = b;
  return composite_rule(br, order);
}

QuadRule composite_graded(double a, double b, std::size_t panels, std::size_t levels,
                          std::size_t order) {
  std::vector<double> br;
  const double h = (b - a) / static_cast<double>(panels);
  br.push_back(a);
  for (std::size_t l = levels; l > 0; --l) br.push_back(a + h * std::ldexp(1.0, -static_cast<int>(l)));
  for (std::size_t i = 1; i <= panels; ++i) br.push_back(a + h * static_cast<double>(i));
  br.back() = b;
  return composite_rule(br, order);
}

double integrate(const std::function<double(double)>& f, const QuadRule& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.x.size(); ++i) s += rule.w[i] * f(rule.x[i]);
  return s;
}

double integrate_uniform(const std::function<double(double)>& f, double a, double b,
                         std::size_t panels, std::size_t order) {
  return integrate(f, composite_uniform(a, b, panels, order));
}

}  // namespace sg
