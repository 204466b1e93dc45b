#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ttc {

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = -1.0;
  double hi = 1.0;

  std::size_t size() const { return nodes.size(); }
  double integrate(const std::function<double(double)>& f) const;
};

/// Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2*order-1.
Quadrature gauss_legendre(std::size_t order, double a, double b);

/// `panels` equal sub-intervals, each with an `order`-point Gauss-Legendre rule.
Quadrature gauss_legendre_composite(std::size_t order, std::size_t panels, double a, double b);

/// Default per-dimension order: max(4 * max(L, K), 64).
std::size_t default_quadrature_order(std::size_t L, std::size_t K);

/// Smallest g in (0, upper] (to bisection accuracy) with
/// mass(|x| > g) < tail * mass(|x| <= upper) for a univariate unnormalized density.
double truncation_halfwidth(const std::function<double(double)>& density, double tail, double upper);

} // namespace ttc
