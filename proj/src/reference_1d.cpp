#include "ttc/reference_1d.hpp"

#include <algorithm>
#include <cmath>

#include "ttc/errors.hpp"
#include "ttc/quadrature.hpp"

namespace ttc {

double ReferenceSolution1D::operator()(double x) const {
  const std::size_t n = grid.size();
  if (x <= lo) return values.front();
  if (x >= hi) return values.back();
  const double h = (hi - lo) / double(n - 1);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>((x - lo) / h), n - 2);
  const double t = (x - grid[i]) / h;
  return (1.0 - t) * values[i] + t * values[i + 1];
}

std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> super,
                                      std::vector<double> rhs) {
  const std::size_t n = diag.size();
  if (sub.size() != n || super.size() != n || rhs.size() != n) throw InputError("solve_tridiagonal: size mismatch");
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) throw NumericalError("solve_tridiagonal: zero pivot at row " + std::to_string(i - 1));
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * super[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) throw NumericalError("solve_tridiagonal: zero pivot at last row");
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - super[i] * x[i + 1]) / diag[i];
  for (double v : x)
    if (!std::isfinite(v)) throw NumericalError("solve_tridiagonal: non-finite solution");
  return x;
}

namespace {

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * double(i) / double(n - 1);
  g.back() = hi;
  return g;
}

double dw_v1(double x) {
  const double t = x * x - 1.0;
  return t * t;
}

} // namespace

ReferenceSolution1D solve_dw_reference(double beta, std::size_t grid_points) {
  if (grid_points < 3) throw InputError("solve_dw_reference: need at least 3 grid points");
  ReferenceSolution1D ref;
  ref.lo = -1.0;
  ref.hi = 1.0;
  ref.grid = uniform_grid(-1.0, 1.0, grid_points);
  const std::size_t n = grid_points - 2;
  const double h = 2.0 / double(grid_points - 1);
  std::vector<double> sub(n), diag(n), super(n), rhs(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ref.grid[i + 1];
    const double c = beta * 4.0 * x * (x * x - 1.0);
    sub[i] = 1.0 / (h * h) + c / (2.0 * h);
    diag[i] = -2.0 / (h * h);
    super[i] = 1.0 / (h * h) - c / (2.0 * h);
  }
  rhs[n - 1] = -super[n - 1];  // f(1) = 1 moved to the right-hand side
  const auto inner = solve_tridiagonal(sub, diag, super, rhs);
  ref.values.resize(grid_points);
  ref.values.front() = 0.0;
  ref.values.back() = 1.0;
  std::copy(inner.begin(), inner.end(), ref.values.begin() + 1);
  return ref;
}

ReferenceSolution1D dw_reference_closed_form(double beta, std::size_t grid_points) {
  if (grid_points < 2) throw InputError("dw_reference_closed_form: need at least 2 grid points");
  ReferenceSolution1D ref;
  ref.lo = -1.0;
  ref.hi = 1.0;
  ref.grid = uniform_grid(-1.0, 1.0, grid_points);
  ref.values.assign(grid_points, 0.0);
  const auto rule = gauss_legendre(8, -1.0, 1.0);
  for (std::size_t i = 1; i < grid_points; ++i) {
    const double a = ref.grid[i - 1], b = ref.grid[i];
    const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::exp(beta * dw_v1(mid + rad * rule.nodes[q]));
    ref.values[i] = ref.values[i - 1] + rad * s;
  }
  const double total = ref.values.back();
  for (auto& v : ref.values) v /= total;
  ref.values.back() = 1.0;
  return ref;
}

ReferenceSolution1D soft_committor_1d_fd(const std::function<double(double)>& V, double beta,
                                         const std::function<double(double)>& pA,
                                         const std::function<double(double)>& pB, double rho, double lo,
                                         double hi, std::size_t grid_points) {
  if (grid_points < 3 || !(lo < hi)) throw InputError("soft_committor_1d_fd: invalid grid");
  if (!(rho > 0.0)) throw InputError("soft_committor_1d_fd: rho must be positive");
  ReferenceSolution1D ref;
  ref.lo = lo;
  ref.hi = hi;
  ref.grid = uniform_grid(lo, hi, grid_points);
  const std::size_t n = grid_points;
  const double h = (hi - lo) / double(n - 1);
  // Flux coefficients at cell faces; half-width control volumes at the ends.
  std::vector<double> face(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) face[i] = std::exp(-beta * V(0.5 * (ref.grid[i] + ref.grid[i + 1]))) / h;
  std::vector<double> sub(n, 0.0), diag(n, 0.0), super(n, 0.0), rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = ref.grid[i];
    const double vol = (i == 0 || i + 1 == n) ? 0.5 * h : h;
    if (i > 0) {
      sub[i] = -face[i - 1];
      diag[i] += face[i - 1];
    }
    if (i + 1 < n) {
      super[i] = -face[i];
      diag[i] += face[i];
    }
    const double b = pB(x);
    diag[i] += vol * rho * (pA(x) + b);
    rhs[i] = vol * rho * b;
  }
  ref.values = solve_tridiagonal(sub, diag, super, rhs);
  return ref;
}

} // namespace ttc
