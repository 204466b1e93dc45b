#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>

namespace ttc {

class Potential {
public:
  virtual ~Potential() = default;
  virtual std::size_t dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> grad) const = 0;
  /// Key-value description, one `key=value` per line.
  virtual std::string descriptor() const = 0;

  /// Separable potentials expose V(x) = sum_k term(k, x_k).
  virtual bool separable() const { return false; }
  virtual double term(std::size_t k, double s) const;
  virtual double term_deriv(std::size_t k, double s) const;
};

/// V(x) = (x_1^2 - 1)^2 + 0.3 * sum_{i>=2} x_i^2.
class DoubleWellPotential final : public Potential {
public:
  explicit DoubleWellPotential(std::size_t d, double transverse = 0.3);
  std::size_t dim() const override { return d_; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> grad) const override;
  std::string descriptor() const override;
  bool separable() const override { return true; }
  double term(std::size_t k, double s) const override;
  double term_deriv(std::size_t k, double s) const override;

private:
  std::size_t d_;
  double transverse_;
};

/// Discretized Ginzburg-Landau chain energy with U_0 = U_{d+1} = 0:
/// sum_{i=1}^{d+1} lambda/2 ((U_i - U_{i-1})/h)^2 + (1 - U_i^2)^2 / (4 lambda).
class GinzburgLandauPotential final : public Potential {
public:
  GinzburgLandauPotential(std::size_t d, double lambda, double h);
  std::size_t dim() const override { return d_; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> grad) const override;
  std::string descriptor() const override;

  double lambda() const { return lambda_; }
  double h() const { return h_; }

private:
  std::size_t d_;
  double lambda_;
  double h_;
};

} // namespace ttc
