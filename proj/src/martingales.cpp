#include "spectralgauss/martingales.hpp"

#include <algorithm>
#include <cmath>

#include "spectralgauss/processes.hpp"
#include "spectralgauss/quadrature.hpp"

namespace sg {

namespace {

// int_a^b f, where f may behave like (t-a)^{eL} or (b-t)^{eR}; the power
// substitution t = a + (b-a) s^{1/(1+e)} removes the endpoint singularity.
// f also receives d = R - t, formed without cancellation near R = b.
double cell_quad(const std::function<double(double, double)>& f, double a, double b, double eL, double eR,
                 std::size_t n, double R) {
  if (!(b > a)) return 0.0;
  const QuadRule& g = gauss_legendre(n);
  double s = 0.0;
  if (eL == 0.0 && eR == 0.0) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = c + h * g.x[i];
      s += g.w[i] * f(t, R - t);
    }
    return h * s;
  }
  if (eL != 0.0 && eR != 0.0) {
    const double m = 0.5 * (a + b);
    return cell_quad(f, a, m, eL, 0.0, n, R) + cell_quad(f, m, b, 0.0, eR, n, R);
  }
  const double e = eL != 0.0 ? eL : eR;
  const double q = 1.0 / (1.0 + e);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = 0.5 * (g.x[i] + 1.0);
    const double sq = std::pow(u, q);
    const double t = eL != 0.0 ? a + (b - a) * sq : b - (b - a) * sq;
    const double d = eL != 0.0 ? R - t : (R - b) + (b - a) * sq;
    s += 0.5 * g.w[i] * f(t, d) * q * sq / u;
  }
  return (b - a) * s;
}

double cell_quad(const std::function<double(double)>& f, double a, double b, double eL, double eR,
                 std::size_t n) {
  return cell_quad([&f](double t, double) { return f(t); }, a, b, eL, eR, n, b);
}

// int_t^r f(u) du with f ~ (u-t)^e near t and structure on the scale of t.
double tail_integral(const std::function<double(double)>& f, double t, double r, double e) {
  if (!(r > t)) return 0.0;
  const double first = std::min(r, 2.0 * t);
  double s = cell_quad(f, t, first, e, 0.0, 32);
  double a = first;
  while (a < r) {
    const double b = std::min(r, 2.0 * a);
    s += cell_quad(f, a, b, 0.0, 0.0, 16);
    a = b;
  }
  return s;
}

std::size_t nodes_for(double dist, double h) { return dist > 4.0 * h ? 6 : 16; }

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

// Adds the weights of int k dX over cells [t_j, t_{j+1}], j < jmax, to row.
template <class Row>
void add_stieltjes(Row&& row, const std::vector<double>& grid, std::size_t jmax,
                   const std::function<double(double, double)>& k, double eL_first, double eR_last, double sing_at) {
  const double h = grid[1] - grid[0];
  for (std::size_t j = 0; j < jmax; ++j) {
    const double a = grid[j], b = grid[j + 1];
    const double eL = j == 0 ? eL_first : 0.0;
    const double eR = j + 1 == jmax ? eR_last : 0.0;
    const std::size_t n = (eL != 0.0 || eR != 0.0) ? 64 : nodes_for(std::fabs(sing_at - b), h);
    const double m0 = cell_quad(k, a, b, eL, eR, n, sing_at) / h;
    row(static_cast<Eigen::Index>(j + 1)) += m0;
    row(static_cast<Eigen::Index>(j)) -= m0;
  }
}

// Adds the weights of int k X dt over the first jmax cells.
template <class Row>
void add_lebesgue(Row&& row, const std::vector<double>& grid, std::size_t jmax,
                  const std::function<double(double, double)>& k, double eR_last, double sing_at) {
  const double h = grid[1] - grid[0];
  for (std::size_t j = 0; j < jmax; ++j) {
    const double a = grid[j], b = grid[j + 1];
    const double eR = j + 1 == jmax ? eR_last : 0.0;
    const std::size_t n = eR != 0.0 ? 64 : nodes_for(std::fabs(sing_at - b), h);
    const double m0 = cell_quad(k, a, b, 0.0, eR, n, sing_at);
    const double m1 = cell_quad([&](double t, double d) { return k(t, d) * (t - a) / h; }, a, b, 0.0, eR, n, sing_at);
    row(static_cast<Eigen::Index>(j)) += m0 - m1;
    row(static_cast<Eigen::Index>(j + 1)) += m1;
  }
}

SamplePath apply_path(const LinearTransform& T, const SamplePath& x) {
  if (x.values.size() != T.in_grid.size()) throw ConfigError("path does not match the transform grid");
  const Eigen::Map<const Eigen::VectorXd> v(x.values.data(), static_cast<Eigen::Index>(x.values.size()));
  const Eigen::VectorXd o = T.W * v;
  SamplePath p;
  p.grid = T.out_times;
  p.values.assign(o.data(), o.data() + o.size());
  return p;
}

void check_start(const SamplePath& x) {
  check_uniform_grid(x.grid);
  if (x.values.size() != x.grid.size()) throw ConfigError("path values and grid differ in length");
  if (x.values.front() != 0.0) throw DomainError("input path must start at 0");
  for (double v : x.values)
    if (!std::isfinite(v)) throw DomainError("path values must be finite");
}

Eigen::Index find_index(const std::vector<double>& grid, double r) {
  const double h = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::fabs(grid[i] - r) <= 1e-9 * h) return static_cast<Eigen::Index>(i);
  throw DomainError("r must be a grid time of the path");
}

}  // namespace

SamplePath LinearTransform::apply(const SamplePath& p) const { return apply_path(*this, p); }

Eigen::MatrixXd LinearTransform::apply_many(const Eigen::MatrixXd& X) const {
  if (X.rows() != W.cols()) throw ConfigError("path matrix does not match the transform grid");
  return W * X;
}

double fwd_constant(double H) {
  check_hurst(H);
  return 1.0 / ((1.0 - H) * beta_fn(0.5, 1.5 - H));
}

double inv_constant(double H) {
  check_hurst(H);
  return 2.0 / beta_fn(1.0 - H, H + 0.5);
}

void check_uniform_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw DomainError("path grid needs at least two points");
  if (grid.front() != 0.0) throw DomainError("path grid must start at 0");
  const double h = grid[1] - grid[0];
  if (!(h > 0.0)) throw DomainError("path grid must be ascending");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (std::fabs(grid[i] - grid[i - 1] - h) > 1e-9 * h) throw DomainError("path grid must be uniform");
}

LinearTransform fwd_even_transform(double H, const std::vector<double>& grid, const std::vector<std::size_t>& out) {
  check_hurst(H);
  check_uniform_grid(grid);
  const std::vector<std::size_t> idx = out.empty() ? all_indices(grid.size()) : out;
  const double C = fwd_constant(H), be = 0.5 - H;
  LinearTransform T;
  T.in_grid = grid;
  T.W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t o = 0; o < idx.size(); ++o) {
    const std::size_t m = idx.at(o);
    if (m >= grid.size()) throw DomainError("output index outside the grid");
    T.out_times.push_back(grid[m]);
    if (m == 0) continue;
    const double r = grid[m];
    auto k = [C, be, r](double t, double d) { return C * std::pow(d, be) * std::pow(r + t, be); };
    add_stieltjes(T.W.row(static_cast<Eigen::Index>(o)), grid, m, k, 0.0, be, r);
  }
  return T;
}

LinearTransform fwd_odd_transform(double H, const std::vector<double>& grid, const std::vector<std::size_t>& out) {
  check_hurst(H);
  check_uniform_grid(grid);
  const std::vector<std::size_t> idx = out.empty() ? all_indices(grid.size()) : out;
  LinearTransform T;
  T.in_grid = grid;
  T.W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t o = 0; o < idx.size(); ++o) {
    const std::size_t m = idx.at(o);
    if (m >= grid.size()) throw DomainError("output index outside the grid");
    T.out_times.push_back(grid[m]);
    if (m == 0) continue;
    const double r = grid[m];
    auto row = T.W.row(static_cast<Eigen::Index>(o));
    if (H < 0.5) {
      // M_r = 2 r^{2H} / B(1/2, 1/2-H) int_0^r (r^2-t^2)^{-1/2-H} X_t dt
      const double c = 2.0 * std::pow(r, 2.0 * H) / beta_fn(0.5, 0.5 - H), e = -0.5 - H;
      auto k = [c, e, r](double t, double d) { return c * std::pow(d, e) * std::pow(r + t, e); };
      add_lebesgue(row, grid, m, k, e, r);
    } else {
      // M_r = C / alpha_r int_0^r (r^2-t^2)^{1/2-H} (X_t dt + alpha_t / alpha'_t dX_t)
      const double be = 0.5 - H;
      const double ar = std::pow(r, 2.0 - 2.0 * H) / (2.0 - 2.0 * H);
      const double c = fwd_constant(H) / ar;
      auto k = [c, be, r](double t, double d) { return c * std::pow(d, be) * std::pow(r + t, be); };
      add_lebesgue(row, grid, m, k, be, r);
      auto kt = [k, H](double t, double d) { return k(t, d) * t / (2.0 - 2.0 * H); };
      add_stieltjes(row, grid, m, kt, 0.0, be, r);
    }
  }
  return T;
}

LinearTransform fwd_single_sided_transform(double H, const std::vector<double>& grid,
                                           const std::vector<std::size_t>& out) {
  check_hurst(H);
  check_uniform_grid(grid);
  const std::size_t half = (grid.size() - 1) / 2;
  std::vector<std::size_t> idx = out;
  if (idx.empty())
    for (std::size_t i = 0; i <= half; ++i) idx.push_back(i);
  const double C = fwd_constant(H), be = 0.5 - H;
  LinearTransform T;
  T.in_grid = grid;
  T.W = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t o = 0; o < idx.size(); ++o) {
    const std::size_t m = idx[o];
    if (m > half) throw DomainError("single-sided output needs 2t inside the input window");
    T.out_times.push_back(grid[m]);
    if (m == 0) continue;
    const double R = grid[2 * m];
    auto k = [C, be](double t, double d) { return 0.5 * C * std::pow(t, be) * std::pow(d, be); };
    add_stieltjes(T.W.row(static_cast<Eigen::Index>(o)), grid, 2 * m, k, be, be, R);
  }
  return T;
}

SamplePath fwd_even(double H, const SamplePath& x) {
  check_start(x);
  return fwd_even_transform(H, x.grid).apply(x);
}

SamplePath fwd_odd(double H, const SamplePath& x) {
  check_start(x);
  return fwd_odd_transform(H, x.grid).apply(x);
}

SamplePath fwd_single_sided(double H, const SamplePath& x) {
  check_start(x);
  return fwd_single_sided_transform(H, x.grid).apply(x);
}

Eigen::RowVectorXd inv_even_weights(double H, const std::vector<double>& grid) {
  check_hurst(H);
  check_uniform_grid(grid);
  const double C1 = inv_constant(H), a = H - 0.5, r = grid.back();
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  auto k = [C1, a, r](double t, double d) { return C1 * std::pow(d, a) * std::pow(r + t, a); };
  add_stieltjes(w, grid, grid.size() - 1, k, 0.0, a, r);
  return w;
}

namespace {

// d = r - t supplied by the caller.
double inv_odd_kernel_d(double H, double r, double t, double d) {
  // t^{-2H} [ r (r^2-t^2)^{H-1/2} - 2H int_t^r (u^2-t^2)^{H-1/2} du ]
  const double a = H - 0.5;
  const double phi =
      tail_integral([a, t](double u) { return std::pow(u - t, a) * std::pow(u + t, a); }, t, r, a);
  return std::pow(t, -2.0 * H) * (r * std::pow(d, a) * std::pow(r + t, a) - 2.0 * H * phi);
}

double inv_single_sided_kernel_d(double H, double r, double t, double d) {
  // r^{H-1/2} (r-t)^{H-1/2} - int_t^r (u-t)^{H-1/2} d(u^{H-1/2})
  const double a = H - 0.5;
  const double inner =
      tail_integral([a, t](double u) { return std::pow(u - t, a) * a * std::pow(u, a - 1.0); }, t, r, a);
  return std::pow(r, a) * std::pow(d, a) - inner;
}

}  // namespace

double inv_odd_kernel(double H, double r, double t) {
  if (!(t > 0.0 && t < r)) throw DomainError("inv_odd_kernel: t must lie in (0, r)");
  return inv_odd_kernel_d(H, r, t, r - t);
}

double inv_single_sided_kernel(double H, double r, double t) {
  if (!(t > 0.0 && t < r)) throw DomainError("inv_single_sided_kernel: t must lie in (0, r)");
  return inv_single_sided_kernel_d(H, r, t, r - t);
}

Eigen::RowVectorXd inv_odd_weights(double H, const std::vector<double>& grid) {
  check_hurst(H);
  check_uniform_grid(grid);
  const double C1 = inv_constant(H), a = H - 0.5, r = grid.back();
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  auto k = [C1, H, r](double t, double d) { return C1 * inv_odd_kernel_d(H, r, t, d); };
  add_stieltjes(w, grid, grid.size() - 1, k, 0.0, a < 0.0 ? a : 0.0, r);
  return w;
}

Eigen::RowVectorXd inv_single_sided_weights(double H, const std::vector<double>& grid) {
  check_hurst(H);
  check_uniform_grid(grid);
  // The constant is 2^{2H} C_1; both match 2 C_1 at H = 1/2.
  const double c = std::pow(2.0, 2.0 * H) * inv_constant(H), a = H - 0.5, r = grid.back();
  Eigen::RowVectorXd w = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(grid.size()));
  auto k = [c, H, r](double t, double d) { return c * inv_single_sided_kernel_d(H, r, t, d); };
  add_stieltjes(w, grid, grid.size() - 1, k, 0.0, a, r);
  return w;
}

namespace {
double apply_row(const Eigen::RowVectorXd& w, const SamplePath& m) {
  if (m.values.size() != static_cast<std::size_t>(w.size())) throw ConfigError("path does not match weights");
  double s = 0.0;
  for (std::size_t i = 0; i < m.values.size(); ++i) s += w(static_cast<Eigen::Index>(i)) * m.values[i];
  return s;
}
}  // namespace

double inv_even(double H, const SamplePath& m) {
  check_start(m);
  return apply_row(inv_even_weights(H, m.grid), m);
}

double inv_odd(double H, const SamplePath& m) {
  check_start(m);
  return apply_row(inv_odd_weights(H, m.grid), m);
}

double inv_single_sided(double H, const SamplePath& m) {
  check_start(m);
  return apply_row(inv_single_sided_weights(H, m.grid), m);
}

SamplePath bridge(const SamplePath& m, double H, Parity parity, double r) {
  check_hurst(H);
  check_uniform_grid(m.grid);
  const Eigen::Index ir = find_index(m.grid, r);
  auto f = [H, parity](double t) {
    return parity == Parity::Even ? std::pow(t, 2.0 - 2.0 * H) / (2.0 - 2.0 * H) : std::pow(t, 2.0 * H) / (2.0 * H);
  };
  const double fr = f(r), mr = m.values.at(static_cast<std::size_t>(ir));
  SamplePath b;
  for (Eigen::Index i = 0; i <= ir; ++i) {
    const double t = m.grid[static_cast<std::size_t>(i)];
    b.grid.push_back(t);
    b.values.push_back(m.values[static_cast<std::size_t>(i)] - f(t) / fr * mr);
  }
  b.values.front() = 0.0;
  b.values.back() = 0.0;
  return b;
}

SamplePath extended_bridge(const SamplePath& m, const std::function<double(double)>& kappa, double H, Parity parity,
                           double r) {
  check_hurst(H);
  check_uniform_grid(m.grid);
  if (!kappa) throw ConfigError("extended_bridge needs kappa");
  const Eigen::Index ir = find_index(m.grid, r);
  const double e = parity == Parity::Even ? 1.0 - 2.0 * H : 2.0 * H - 1.0;  // density of the measure
  auto dens = [e](double t) { return std::pow(t, e); };
  const double h = m.grid[1] - m.grid[0];
  // g_t and |kappa|^2 cell by cell; N_r = int kappa dM with cell-averaged kappa.
  std::vector<double> g(static_cast<std::size_t>(ir) + 1, 0.0);
  double norm2 = 0.0, N = 0.0;
  for (Eigen::Index j = 0; j < ir; ++j) {
    const double a = m.grid[static_cast<std::size_t>(j)], b = m.grid[static_cast<std::size_t>(j) + 1];
    const double eL = j == 0 ? std::min(e, 0.0) : 0.0;
    g[static_cast<std::size_t>(j) + 1] =
        g[static_cast<std::size_t>(j)] + cell_quad([&](double t) { return kappa(t) * dens(t); }, a, b, eL, 0.0, 16);
    norm2 += cell_quad([&](double t) { return kappa(t) * kappa(t) * dens(t); }, a, b, eL, 0.0, 16);
    const double kbar = cell_quad(kappa, a, b, 0.0, 0.0, 8) / h;
    N += kbar * (m.values[static_cast<std::size_t>(j) + 1] - m.values[static_cast<std::size_t>(j)]);
  }
  if (!(norm2 >= 1e-14)) throw DomainError("extended_bridge: degenerate kappa (norm below 1e-14)");
  SamplePath out;
  for (Eigen::Index i = 0; i <= ir; ++i) {
    out.grid.push_back(m.grid[static_cast<std::size_t>(i)]);
    out.values.push_back(m.values[static_cast<std::size_t>(i)] - g[static_cast<std::size_t>(i)] / norm2 * N);
  }
  return out;
}

SamplePath inverse_bridge(const SamplePath& b) {
  check_uniform_grid(b.grid);
  SamplePath o;
  o.grid = b.grid;
  o.values.assign(b.values.rbegin(), b.values.rend());
  return o;
}

SamplePath standard_to_chain(double H, const SamplePath& x) {
  const double s = std::sqrt(chain_scale(H));
  SamplePath o = x;
  for (double& v : o.values) v *= s;
  for (double& v : o.imag) v *= s;
  return o;
}

}  // namespace sg
