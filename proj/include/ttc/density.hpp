#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ttc/basis.hpp"
#include "ttc/potentials.hpp"
#include "ttc/quadrature.hpp"
#include "ttc/tensor_train.hpp"

namespace ttc {

/// Unnormalized equilibrium density in tensor-train form: p(x) = sum_m P(m) psi_m(x).
struct DensityModel {
  TensorTrain tt;
  std::vector<BasisSet> bases;
  std::shared_ptr<const Potential> potential;
  double beta = 1.0;
  /// log p(x) = log_prefactor - beta * V(x) for the exact (untruncated) density.
  double log_prefactor = 0.0;
  /// Extra key-value lines for the descriptor (truncation parameters etc.).
  std::string extra_descriptor;

  std::size_t dim() const { return tt.dim(); }
  double log_density(std::span<const double> x) const;
  /// Value of the tensor-train reconstruction.
  double tt_value(std::span<const double> x) const;
  std::string descriptor() const;
};

/// Rank-1 density with psi^(k) a single-function table holding exp(-beta V_k).
DensityModel product_density(std::shared_ptr<const Potential> potential, double beta,
                             const std::vector<Quadrature>& quads);

struct KernelEigensystem {
  double lambda = 0.0;
  double beta = 1.0;
  double h = 0.0;
  double R = 0.0;
  Quadrature quad;
  /// Full spectrum, descending, with values below 1e-14 * lambda_1 clipped to 0.
  Eigen::VectorXd eigenvalues;
  std::size_t J = 0;
  /// (#nodes) x J table of u_j at the nodes, orthonormal under the quadrature weights.
  Eigen::MatrixXd u;
  /// v_j(0) = sqrt(lambda_j) u_j(0), j < J.
  Eigen::VectorXd v0;
  double log_c = 0.0;

  double kernel(double x, double y) const;
  /// v_j(x) = sqrt(lambda_j) u_j(x) for j < J by Nystrom extension.
  Eigen::VectorXd v(double x) const;
  /// (#nodes) x J table of v_j at the nodes.
  Eigen::MatrixXd v_nodes() const;
};

KernelEigensystem gl_kernel_eigensystem(double lambda, double beta, double h, double R,
                                        const Quadrature& quad, std::size_t J);

/// Chain density c * K(0,x_1) K(x_1,x_2) ... K(x_d,0) with Chebyshev coefficient cores.
DensityModel gl_density(const KernelEigensystem& eig, std::size_t d, std::size_t n_cheb,
                        const Quadrature& quad);

/// Chebyshev coefficients c_n, n <= N, of f on [-R, R] by Chebyshev-Gauss interpolation with M points.
Eigen::VectorXd chebyshev_coefficients(const std::function<double(double)>& f, double R, std::size_t N,
                                       std::size_t M);

enum class MeasureGeometry { sphere, hyperplane };

struct BoundaryMeasure {
  TensorTrain tt;
  std::vector<BasisSet> bases;
  MeasureGeometry geometry = MeasureGeometry::sphere;
  std::vector<double> center;  // sphere
  double radius = 0.0;         // sphere
  std::size_t axis = 0;        // hyperplane, zero-based
  double offset = 0.0;         // hyperplane
  double sigma = 0.0;
  /// Optional off-axis factors for hyperplanes (empty function = 1).
  std::vector<std::function<double(double)>> off_axis;

  std::size_t dim() const { return tt.dim(); }
  /// Closed-form value.
  double value(std::span<const double> x) const;
  double tt_value(std::span<const double> x) const;
};

/// Product Gaussian with sigma = radius / sqrt(d).
BoundaryMeasure sphere_boundary_measure(std::span<const double> center, double radius,
                                        const std::vector<Quadrature>& quads);

/// Gaussian of width sigma in x_axis around `offset`; other factors 1 unless
/// `off_axis[k]` is given.
BoundaryMeasure hyperplane_boundary_measure(std::size_t axis, double offset, double sigma,
                                            const std::vector<Quadrature>& quads,
                                            std::vector<std::function<double(double)>> off_axis = {});

double gaussian_pdf(double x, double mean, double sigma);

} // namespace ttc
