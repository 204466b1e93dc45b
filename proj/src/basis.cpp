#include "ttc/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ttc/errors.hpp"

namespace ttc {

std::string to_string(BasisFamily f) {
  switch (f) {
  case BasisFamily::fourier: return "fourier";
  case BasisFamily::chebyshev: return "chebyshev";
  case BasisFamily::density_orthogonal: return "density_orthogonal";
  case BasisFamily::table: return "table";
  }
  return "unknown";
}

void BasisSet::eval(double x, std::span<double> out) const {
  const std::size_t L = count_;
  switch (family_) {
  case BasisFamily::fourier: {
    const double c0 = 1.0 / std::sqrt(2.0 * scale_), c1 = 1.0 / std::sqrt(scale_);
    out[0] = c0;
    for (std::size_t m = 1; m < L; ++m) {
      const double k = double((m + 1) / 2);
      const double t = k * std::numbers::pi * x / scale_;
      out[m] = c1 * (m % 2 == 1 ? std::cos(t) : std::sin(t));
    }
    break;
  }
  case BasisFamily::chebyshev: {
    const double t = x / scale_;
    out[0] = 1.0;
    if (L > 1) out[1] = t;
    for (std::size_t n = 2; n < L; ++n) out[n] = 2.0 * t * out[n - 1] - out[n - 2];
    break;
  }
  case BasisFamily::density_orthogonal: {
    out[0] = 1.0 / b_[0];
    if (L > 1) out[1] = (x - alpha_[0]) * out[0] / b_[1];
    for (std::size_t j = 1; j + 1 < L; ++j)
      out[j + 1] = ((x - alpha_[j]) * out[j] - b_[j] * out[j - 1]) / b_[j + 1];
    break;
  }
  case BasisFamily::table: out[0] = (*f_)(x); break;
  }
}

void BasisSet::eval_deriv(double x, std::span<double> out) const {
  const std::size_t L = count_;
  switch (family_) {
  case BasisFamily::fourier: {
    const double c1 = 1.0 / std::sqrt(scale_);
    out[0] = 0.0;
    for (std::size_t m = 1; m < L; ++m) {
      const double k = double((m + 1) / 2);
      const double w = k * std::numbers::pi / scale_;
      out[m] = c1 * w * (m % 2 == 1 ? -std::sin(w * x) : std::cos(w * x));
    }
    break;
  }
  case BasisFamily::chebyshev: {
    // T_n' = n U_{n-1}, chain rule 1/R.
    const double t = x / scale_;
    double u_prev = 0.0, u = 1.0;  // U_{-1}, U_0
    out[0] = 0.0;
    for (std::size_t n = 1; n < L; ++n) {
      out[n] = double(n) * u / scale_;
      const double u_next = 2.0 * t * u - u_prev;
      u_prev = u;
      u = u_next;
    }
    break;
  }
  case BasisFamily::density_orthogonal: {
    std::vector<double> p(L);
    eval(x, p);
    out[0] = 0.0;
    if (L > 1) out[1] = p[0] / b_[1];
    for (std::size_t j = 1; j + 1 < L; ++j)
      out[j + 1] = ((x - alpha_[j]) * out[j] + p[j] - b_[j] * out[j - 1]) / b_[j + 1];
    break;
  }
  case BasisFamily::table: out[0] = df_ ? (*df_)(x) : 0.0; break;
  }
}

Eigen::VectorXd BasisSet::eval(double x) const {
  Eigen::VectorXd v(count_);
  eval(x, std::span<double>(v.data(), count_));
  return v;
}

Eigen::VectorXd BasisSet::eval_deriv(double x) const {
  Eigen::VectorXd v(count_);
  eval_deriv(x, std::span<double>(v.data(), count_));
  return v;
}

void BasisSet::fill_tables() {
  const std::size_t nq = quad_.size();
  values_.resize(count_, nq);
  derivs_.resize(count_, nq);
  Eigen::VectorXd v(count_), dv(count_);
  for (std::size_t q = 0; q < nq; ++q) {
    eval(quad_.nodes[q], std::span<double>(v.data(), count_));
    eval_deriv(quad_.nodes[q], std::span<double>(dv.data(), count_));
    values_.col(q) = v;
    derivs_.col(q) = dv;
  }
}

namespace {

void check_quad(const Quadrature& quad) {
  if (quad.size() == 0 || quad.nodes.size() != quad.weights.size())
    throw InputError("basis: quadrature rule is empty or inconsistent");
}

} // namespace

BasisSet fourier_basis(std::size_t L, double gamma, const Quadrature& quad) {
  if (L < 1) throw InputError("fourier_basis: L must be at least 1");
  if (!(gamma > 0.0)) throw InputError("fourier_basis: gamma must be positive");
  check_quad(quad);
  BasisSet s;
  s.family_ = BasisFamily::fourier;
  s.quad_ = quad;
  s.count_ = L;
  s.scale_ = gamma;
  s.fill_tables();
  return s;
}

BasisSet chebyshev_basis(std::size_t N, double R, const Quadrature& quad) {
  if (!(R > 0.0)) throw InputError("chebyshev_basis: R must be positive");
  check_quad(quad);
  BasisSet s;
  s.family_ = BasisFamily::chebyshev;
  s.quad_ = quad;
  s.count_ = N + 1;
  s.scale_ = R;
  s.fill_tables();
  return s;
}

BasisSet density_orthogonal_basis(std::span<const double> weight_values, std::size_t L,
                                  const Quadrature& quad) {
  check_quad(quad);
  const std::size_t nq = quad.size();
  if (L < 1) throw InputError("density_orthogonal_basis: L must be at least 1");
  if (L > nq) throw InputError("density_orthogonal_basis: L exceeds the quadrature order");
  if (weight_values.size() != nq)
    throw InputError("density_orthogonal_basis: weight table does not match quadrature");
  Eigen::VectorXd w(nq), x(nq);
  double xmax = 0.0;
  for (std::size_t q = 0; q < nq; ++q) {
    if (weight_values[q] < 0.0 || !std::isfinite(weight_values[q]))
      throw InputError("density_orthogonal_basis: weight must be finite and nonnegative");
    w(q) = quad.weights[q] * weight_values[q];
    x(q) = quad.nodes[q];
    xmax = std::max(xmax, std::abs(x(q)));
  }
  const double mass = w.sum();
  if (!(mass > 0.0)) throw InputError("density_orthogonal_basis: weight is identically zero");

  std::vector<double> alpha(L), b(L);
  b[0] = std::sqrt(mass);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(nq);
  Eigen::VectorXd cur = Eigen::VectorXd::Constant(nq, 1.0 / b[0]);
  const double floor = 1e-13 * std::max(1.0, xmax * xmax);
  for (std::size_t j = 0; j < L; ++j) {
    alpha[j] = (w.array() * x.array() * cur.array().square()).sum();
    if (j + 1 == L) break;
    Eigen::VectorXd next = (x.array() - alpha[j]) * cur.array() - b[j] * prev.array();
    const double beta = (w.array() * next.array().square()).sum();
    if (!(beta > floor))
      throw DegeneracyError("density_orthogonal_basis: recurrence collapsed at degree " + std::to_string(j + 1));
    b[j + 1] = std::sqrt(beta);
    prev = std::move(cur);
    cur = next / b[j + 1];
  }

  BasisSet s;
  s.family_ = BasisFamily::density_orthogonal;
  s.quad_ = quad;
  s.count_ = L;
  s.alpha_ = std::move(alpha);
  s.b_ = std::move(b);
  s.fill_tables();
  return s;
}

BasisSet table_basis(std::function<double(double)> f, std::function<double(double)> df,
                     const Quadrature& quad) {
  check_quad(quad);
  if (!f) throw InputError("table_basis: function is empty");
  BasisSet s;
  s.family_ = BasisFamily::table;
  s.quad_ = quad;
  s.count_ = 1;
  s.f_ = std::make_shared<const std::function<double(double)>>(std::move(f));
  if (df) s.df_ = std::make_shared<const std::function<double(double)>>(std::move(df));
  s.fill_tables();
  return s;
}

} // namespace ttc
