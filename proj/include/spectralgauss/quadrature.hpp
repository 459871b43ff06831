#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sg {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

// n-point Gauss-Legendre rule on [-1, 1]; cached, safe for concurrent use.
const QuadRule& gauss_legendre(std::size_t n);

// Nodes and weights of a composite rule over explicit panel breakpoints.
QuadRule composite_rule(const std::vector<double>& breaks, std::size_t order);

// Uniform panels on [a, b].
QuadRule composite_uniform(double a, double b, std::size_t panels, std::size_t order);

// Panels refined geometrically toward `a` (levels halvings of the first
// panel), uniform elsewhere. Suited to integrable endpoint singularities.
QuadRule composite_graded(double a, double b, std::size_t panels, std::size_t levels,
                          std::size_t order);

double integrate(const std::function<double(double)>& f, const QuadRule& rule);

double integrate_uniform(const std::function<double(double)>& f, double a, double b,
                         std::size_t panels, std::size_t order = 16);

}  // namespace sg
