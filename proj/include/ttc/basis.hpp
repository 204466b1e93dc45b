#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ttc/quadrature.hpp"

namespace ttc {

enum class BasisFamily { fourier, chebyshev, density_orthogonal, table };

std::string to_string(BasisFamily f);

/// Univariate function family with value and derivative tables at the
/// quadrature nodes plus a pointwise evaluator. Row m of the tables is function m.
class BasisSet {
public:
  BasisFamily family() const { return family_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double lo() const { return quad_.lo; }
  double hi() const { return quad_.hi; }
  const Quadrature& quadrature() const { return quad_; }

  /// L x (#nodes).
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::MatrixXd& derivs() const { return derivs_; }

  /// All functions (resp. derivatives) at x, written to out[0..L).
  void eval(double x, std::span<double> out) const;
  void eval_deriv(double x, std::span<double> out) const;
  Eigen::VectorXd eval(double x) const;
  Eigen::VectorXd eval_deriv(double x) const;

  /// Recurrence coefficients (density_orthogonal only): alpha_0..alpha_{L-1}, b_0..b_{L-1}
  /// with b_j = sqrt(beta_j), b_0 = sqrt(mass).
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& b() const { return b_; }

  friend BasisSet fourier_basis(std::size_t L, double gamma, const Quadrature& quad);
  friend BasisSet chebyshev_basis(std::size_t N, double R, const Quadrature& quad);
  friend BasisSet density_orthogonal_basis(std::span<const double> weight_values, std::size_t L,
                                           const Quadrature& quad);
  friend BasisSet table_basis(std::function<double(double)> f, std::function<double(double)> df,
                              const Quadrature& quad);

private:
  void fill_tables();

  BasisFamily family_ = BasisFamily::table;
  Quadrature quad_;
  std::size_t count_ = 0;
  double scale_ = 1.0;  // gamma (fourier) or R (chebyshev)
  std::vector<double> alpha_, b_;
  std::shared_ptr<const std::function<double(double)>> f_, df_;
  Eigen::MatrixXd values_, derivs_;
};

/// {1, cos(pi x/g), sin(pi x/g), cos(2 pi x/g), ...} normalized in L2([-g, g]).
BasisSet fourier_basis(std::size_t L, double gamma, const Quadrature& quad);

/// T_0(x/R), ..., T_N(x/R) (unnormalized).
BasisSet chebyshev_basis(std::size_t N, double R, const Quadrature& quad);

/// Polynomials orthonormal for sum_q w_q p(x_q) f(x_q) g(x_q), built by the
/// discretized Stieltjes procedure.
BasisSet density_orthogonal_basis(std::span<const double> weight_values, std::size_t L,
                                  const Quadrature& quad);

/// Single-function family holding f (and optionally its derivative).
BasisSet table_basis(std::function<double(double)> f, std::function<double(double)> df,
                     const Quadrature& quad);

} // namespace ttc
