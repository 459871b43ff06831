#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "spectralgauss/kl.hpp"
#include "spectralgauss/series.hpp"

namespace sg {

// A path transform that is linear in the node values of a piecewise-linear
// input path: out = W * in.
struct LinearTransform {
  std::vector<double> in_grid;
  std::vector<double> out_times;
  Eigen::MatrixXd W;

  SamplePath apply(const SamplePath& p) const;
  // Columns of X are paths sampled on in_grid.
  Eigen::MatrixXd apply_many(const Eigen::MatrixXd& X) const;
};

// Normalizing constants of the transforms.
double fwd_constant(double H);  // 1/C = (1-H) B(1/2, 3/2-H)
double inv_constant(double H);  // C_1 = 2 / B(1-H, H+1/2)

void check_uniform_grid(const std::vector<double>& grid);

// Output at every grid time (or at the selected indices).
LinearTransform fwd_even_transform(double H, const std::vector<double>& grid,
                                   const std::vector<std::size_t>& out_index = {});
LinearTransform fwd_odd_transform(double H, const std::vector<double>& grid,
                                  const std::vector<std::size_t>& out_index = {});
// Output at grid times t with 2t inside the input window.
LinearTransform fwd_single_sided_transform(double H, const std::vector<double>& grid,
                                           const std::vector<std::size_t>& out_index = {});

SamplePath fwd_even(double H, const SamplePath& x);
SamplePath fwd_odd(double H, const SamplePath& x);
SamplePath fwd_single_sided(double H, const SamplePath& x);

// Endpoint reconstruction weights on the martingale node values; r is the
// last grid time.
Eigen::RowVectorXd inv_even_weights(double H, const std::vector<double>& grid);
Eigen::RowVectorXd inv_odd_weights(double H, const std::vector<double>& grid);
// Reconstructs X at 2r from M on [0, r].
Eigen::RowVectorXd inv_single_sided_weights(double H, const std::vector<double>& grid);

double inv_even(double H, const SamplePath& m);
double inv_odd(double H, const SamplePath& m);
double inv_single_sided(double H, const SamplePath& m);

// Inverse kernels.
double inv_odd_kernel(double H, double r, double t);
double inv_single_sided_kernel(double H, double r, double t);

SamplePath bridge(const SamplePath& m, double H, Parity parity, double r);
SamplePath extended_bridge(const SamplePath& m, const std::function<double(double)>& kappa, double H,
                           Parity parity, double r);
SamplePath inverse_bridge(const SamplePath& b);

// Multiplies a standard-FBM path by sqrt(kappa(H)).
SamplePath standard_to_chain(double H, const SamplePath& x);

}  // namespace sg
