#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ttc {

/// Grid function on [lo, hi] with uniform nodes, evaluated by linear interpolation.
struct ReferenceSolution1D {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> grid;
  std::vector<double> values;

  /// Clamps x to [lo, hi].
  double operator()(double x) const;
};

/// f'' - beta V_1'(x) f' = 0 on [-1, 1], f(-1) = 0, f(1) = 1, V_1 = (x^2-1)^2, by central differences.
ReferenceSolution1D solve_dw_reference(double beta, std::size_t grid_points);

/// Same boundary value problem by quadrature of f(x) ∝ int_{-1}^x exp(beta V_1).
ReferenceSolution1D dw_reference_closed_form(double beta, std::size_t grid_points);

/// Soft committor in 1D: -(p q')' + rho (p_A + p_B) q = rho p_B on [lo, hi] with zero-flux ends,
/// p = exp(-beta V). Finite-volume discretization, symmetric tridiagonal solve.
ReferenceSolution1D soft_committor_1d_fd(const std::function<double(double)>& V, double beta,
                                         const std::function<double(double)>& pA,
                                         const std::function<double(double)>& pB, double rho, double lo,
                                         double hi, std::size_t grid_points);

/// Solves a tridiagonal system (sub, diag, super) in place; returns the solution.
std::vector<double> solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> super,
                                      std::vector<double> rhs);

} // namespace ttc
