#include "ttc/potentials.hpp"

#include <sstream>

#include "ttc/errors.hpp"

namespace ttc {

double Potential::term(std::size_t, double) const {
  throw UnsupportedError("potential is not separable");
}

double Potential::term_deriv(std::size_t, double) const {
  throw UnsupportedError("potential is not separable");
}

namespace {

void check_dim(std::size_t d, std::size_t n) {
  if (n != d) throw InputError("potential: point has dimension " + std::to_string(n) + ", expected " + std::to_string(d));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

} // namespace

DoubleWellPotential::DoubleWellPotential(std::size_t d, double transverse) : d_(d), transverse_(transverse) {
  if (d < 1) throw InputError("DoubleWellPotential: d must be at least 1");
}

double DoubleWellPotential::term(std::size_t k, double s) const {
  if (k == 0) {
    const double t = s * s - 1.0;
    return t * t;
  }
  return transverse_ * s * s;
}

double DoubleWellPotential::term_deriv(std::size_t k, double s) const {
  if (k == 0) return 4.0 * s * (s * s - 1.0);
  return 2.0 * transverse_ * s;
}

double DoubleWellPotential::value(std::span<const double> x) const {
  check_dim(d_, x.size());
  double v = 0.0;
  for (std::size_t k = 0; k < d_; ++k) v += term(k, x[k]);
  return v;
}

void DoubleWellPotential::gradient(std::span<const double> x, std::span<double> grad) const {
  check_dim(d_, x.size());
  for (std::size_t k = 0; k < d_; ++k) grad[k] = term_deriv(k, x[k]);
}

std::string DoubleWellPotential::descriptor() const {
  return "potential=double_well\nd=" + std::to_string(d_) + "\ntransverse=" + fmt(transverse_) + "\n";
}

GinzburgLandauPotential::GinzburgLandauPotential(std::size_t d, double lambda, double h)
    : d_(d), lambda_(lambda), h_(h) {
  if (d < 1) throw InputError("GinzburgLandauPotential: d must be at least 1");
  if (!(lambda > 0.0) || !(h > 0.0)) throw InputError("GinzburgLandauPotential: lambda and h must be positive");
}

double GinzburgLandauPotential::value(std::span<const double> x) const {
  check_dim(d_, x.size());
  const double kin = lambda_ / (2.0 * h_ * h_);
  const double pot = 1.0 / (4.0 * lambda_);
  double v = 0.0, prev = 0.0;
  for (std::size_t i = 0; i <= d_; ++i) {
    const double u = i < d_ ? x[i] : 0.0;
    const double w = 1.0 - u * u;
    v += kin * (u - prev) * (u - prev) + pot * w * w;
    prev = u;
  }
  return v;
}

void GinzburgLandauPotential::gradient(std::span<const double> x, std::span<double> grad) const {
  check_dim(d_, x.size());
  const double kin = lambda_ / (h_ * h_);
  const double pot = 1.0 / lambda_;
  for (std::size_t i = 0; i < d_; ++i) {
    const double u = x[i];
    const double left = i > 0 ? x[i - 1] : 0.0;
    const double right = i + 1 < d_ ? x[i + 1] : 0.0;
    grad[i] = kin * (2.0 * u - left - right) - pot * u * (1.0 - u * u);
  }
}

std::string GinzburgLandauPotential::descriptor() const {
  return "potential=ginzburg_landau\nd=" + std::to_string(d_) + "\nlambda=" + fmt(lambda_) + "\nh=" + fmt(h_) + "\n";
}

} // namespace ttc
