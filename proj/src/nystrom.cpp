#include <algorithm>
#include <cmath>

#include "spectralgauss/verify.hpp"

namespace sg {

EigReport nystrom_eig(const std::function<double(double, double)>& kernel, double r, std::size_t n,
                      std::size_t count, const std::string& tag, bool vectors) {
  if (n < 16) throw DomainError("nystrom_eig: n must be at least 16");
  if (!(r > 0.0)) throw DomainError("nystrom_eig: r must be positive");
  const double h = r / static_cast<double>(n);
  const auto N = static_cast<Eigen::Index>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (static_cast<double>(i) + 0.5) * h;
  Eigen::MatrixXd K(N, N);
  double kmax = 0.0, asym = 0.0;
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double a = kernel(x[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(j)]);
      K(i, j) = K(j, i) = a;
      kmax = std::max(kmax, std::fabs(a));
    }
  // Spot-check symmetry of the kernel itself on a coarse subgrid.
  const std::size_t step = std::max<std::size_t>(1, n / 16);
  for (std::size_t i = 0; i < n; i += step)
    for (std::size_t j = 0; j < i; j += step)
      asym = std::max(asym, std::fabs(kernel(x[i], x[j]) - kernel(x[j], x[i])));
  if (asym > 1e-10 * std::max(kmax, 1e-300)) throw DomainError("nystrom_eig: kernel is not symmetric");
  K *= h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericError("nystrom_eig: eigensolver failed");
  EigReport rep;
  rep.kernel_tag = tag;
  rep.n = n;
  rep.r = r;
  rep.grid = x;
  count = std::min(count, n);
  for (std::size_t k = 0; k < count; ++k) {
    const Eigen::Index c = N - 1 - static_cast<Eigen::Index>(k);
    rep.eigenvalues.push_back(es.eigenvalues()(c));
    if (!vectors) continue;
    Eigen::VectorXd v = es.eigenvectors().col(c) / std::sqrt(h);
    // Orientation: positive near the left end, as for the closed-form bases.
    for (Eigen::Index i = 0; i < N; ++i)
      if (std::fabs(v(i)) > 1e-8 * v.cwiseAbs().maxCoeff()) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    rep.eigenvectors.emplace_back(v.data(), v.data() + v.size());
  }
  return rep;
}

double mercer_check(const KLBasis& basis, const std::function<double(double, double)>& kernel,
                    const std::vector<double>& grid, std::size_t N) {
  N = std::min(N, basis.size());
  std::vector<std::vector<double>> phi(N, std::vector<double>(grid.size()));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t i = 0; i < grid.size(); ++i) phi[n][i] = basis.phi(n, grid[i]);
  double err = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t n = N; n-- > 0;) s += basis.eigenvalues[n] * phi[n][i] * phi[n][j];
      err = std::max(err, std::fabs(s - kernel(grid[i], grid[j])));
    }
  return err;
}

}  // namespace sg
