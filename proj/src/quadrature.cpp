#include "ttc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "ttc/errors.hpp"

namespace ttc {

double Quadrature::integrate(const std::function<double(double)>& f) const {
  double s = 0.0;
  for (std::size_t q = 0; q < nodes.size(); ++q) s += weights[q] * f(nodes[q]);
  return s;
}

namespace {

// P_n(z) and P_n'(z) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double z) {
  double p0 = 1.0, p1 = z;
  for (std::size_t j = 2; j <= n; ++j) {
    const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / double(j);
    p0 = p1;
    p1 = p2;
  }
  return {p1, double(n) * (z * p1 - p0) / (z * z - 1.0)};
}

} // namespace

Quadrature gauss_legendre(std::size_t order, double a, double b) {
  if (order < 1) throw InputError("gauss_legendre: order must be at least 1");
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw InputError("gauss_legendre: invalid interval");
  const std::size_t n = order;
  std::vector<double> x(n, 0.0), w(n, 2.0);
  if (n > 1) {
    for (std::size_t k = 0; k < (n + 1) / 2; ++k) {
      double z = std::cos(std::numbers::pi * (double(k) + 0.75) / (double(n) + 0.5));
      for (int it = 0; it < 100; ++it) {
        const auto [p, dp] = legendre(n, z);
        const double dz = p / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      const double dp = legendre(n, z).second;
      const double wk = 2.0 / ((1.0 - z * z) * dp * dp);
      x[n - 1 - k] = z;
      x[k] = -z;
      w[n - 1 - k] = wk;
      w[k] = wk;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
  }
  Quadrature quad;
  quad.lo = a;
  quad.hi = b;
  const double mid = 0.5 * (a + b), rad = 0.5 * (b - a);
  for (std::size_t i = 0; i < n; ++i) {
    quad.nodes.push_back(mid + rad * x[i]);
    quad.weights.push_back(rad * w[i]);
  }
  return quad;
}

Quadrature gauss_legendre_composite(std::size_t order, std::size_t panels, double a, double b) {
  if (panels < 1) throw InputError("gauss_legendre_composite: panels must be at least 1");
  Quadrature out;
  out.lo = a;
  out.hi = b;
  const double h = (b - a) / double(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * double(p);
    const double hi = p + 1 == panels ? b : lo + h;
    auto q = gauss_legendre(order, lo, hi);
    out.nodes.insert(out.nodes.end(), q.nodes.begin(), q.nodes.end());
    out.weights.insert(out.weights.end(), q.weights.begin(), q.weights.end());
  }
  return out;
}

std::size_t default_quadrature_order(std::size_t L, std::size_t K) {
  return std::max<std::size_t>(4 * std::max(L, K), 64);
}

double truncation_halfwidth(const std::function<double(double)>& density, double tail, double upper) {
  if (!(upper > 0.0) || !(tail > 0.0)) throw InputError("truncation_halfwidth: invalid arguments");
  const auto rule = gauss_legendre_composite(32, 200, -upper, upper);
  std::vector<double> f(rule.size());
  double total = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    f[q] = density(rule.nodes[q]);
    total += rule.weights[q] * f[q];
  }
  if (!(total > 0.0)) throw NumericalError("truncation_halfwidth: density has no mass");
  auto outside = [&](double g) {
    // Mass with |x| > g: integrate exactly on [g, upper] and [-upper, -g].
    const auto right = gauss_legendre_composite(32, 20, g, upper);
    double s = 0.0;
    for (std::size_t q = 0; q < right.size(); ++q)
      s += right.weights[q] * (density(right.nodes[q]) + density(-right.nodes[q]));
    return s;
  };
  double lo = 0.0, hi = upper;
  if (outside(upper * (1.0 - 1e-12)) >= tail * total) return upper;
  for (int it = 0; it < 80 && hi - lo > 1e-10 * upper; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (outside(mid) < tail * total) hi = mid;
    else lo = mid;
  }
  return hi;
}

} // namespace ttc
