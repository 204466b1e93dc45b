#pragma once

// Test-side reference implementations. Everything here is written from the
// definitions with plain loops and shares no code path with the library kernels.

#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttc/basis.hpp"
#include "ttc/density.hpp"
#include "ttc/mpo.hpp"
#include "ttc/quadrature.hpp"
#include "ttc/tensor_train.hpp"

namespace oracle {

std::size_t product(std::span<const std::size_t> modes);

/// Calls fn(flat, idx) for every multi-index in row-major order (first index slowest).
void for_each_index(std::span<const std::size_t> modes,
                    const std::function<void(std::size_t, const std::vector<std::size_t>&)>& fn);

/// Entry of a train by explicit row-vector times matrix products.
double tt_entry(const ttc::TensorTrain& tt, const std::vector<std::size_t>& idx);
std::vector<double> dense_tt(const ttc::TensorTrain& tt);
Eigen::MatrixXd dense_mpo(const ttc::Mpo& mpo);

double frob(std::span<const double> a);
double rel_diff(std::span<const double> a, std::span<const double> b);

/// a x + b y, elementwise.
std::vector<double> axpby(double a, std::span<const double> x, double b, std::span<const double> y);

/// Median wall time in seconds of `reps` calls.
double time_median(const std::function<void()>& fn, int reps);

struct SlopeFit {
  double intercept = 0.0;
  double linear = 0.0;
  double quadratic = 0.0;
};

/// Least-squares fit t = a + b x + c x^2.
SlopeFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& t);

/// Least-squares slope of log t against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& t);

/// Linear cost has log-log slope 1, quadratic 2.
bool linear_scaling(const std::vector<double>& x, const std::vector<double>& t, double max_slope = 1.5);

/// Composite Simpson rule with n (even) panels; an independent reference integrator.
double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n);

struct GalerkinDense {
  Eigen::MatrixXd E, HA, HB;
  Eigen::VectorXd hB;
  double mass_A = 0.0, mass_B = 0.0;
};

/// Energy, penalty and linear terms by summing over the full tensor-product grid of `quad`.
/// The density is rebuilt from its dense coefficient array; p_A and p_B are given pointwise.
GalerkinDense galerkin_by_grid(const ttc::DensityModel& density,
                               const std::function<double(const std::vector<double>&)>& pA,
                               const std::function<double(const std::vector<double>&)>& pB,
                               const std::vector<ttc::BasisSet>& phi, const ttc::Quadrature& quad);

/// Product of isotropic Gaussians, written from the formula.
double gaussian_product(const std::vector<double>& x, const std::vector<double>& center, double sigma);

} // namespace oracle
