#pragma once

// Brute-force checks for small problems: full-grid quadrature of the Galerkin
// tensors and 1D soft-committor comparisons.

#include <cstddef>
#include <cstdint>

#include "ttc/als.hpp"
#include "ttc/reference_1d.hpp"

namespace ttc {

struct DenseOracleReport {
  double energy = 0.0;
  double HA = 0.0;
  double HB = 0.0;
  double hB = 0.0;
  double objective = 0.0;
  std::size_t grid_points = 0;
};

/// Random rank-`rank` density train on Chebyshev functions (K per dimension), Fourier phi
/// (L per dimension), sphere measures; relative discrepancies of every assembled term
/// against sums over the full tensor-product quadrature grid.
DenseOracleReport dense_oracle_check(std::size_t d, std::size_t L, std::size_t K, std::size_t rank,
                                     std::uint64_t seed, std::size_t cap = 10'000'000);

struct SoftCommittor1DCase {
  double beta = 1.0;
  double sigma = 0.05;
  double rho = 1e3;
  double lo = -2.0, hi = 2.0;
  std::size_t basis_size = 60;
  std::size_t quadrature_order = 400;
  std::size_t fd_points = 40'001;
};

struct SoftCommittor1DResult {
  ReferenceSolution1D fd;
  CommittorSolution als;
  /// sqrt(int (q_als - q_fd)^2 p / int p).
  double l2_error = 0.0;
};

/// 1D double well with Gaussian p_A, p_B at -1, +1: ALS (d = 1) and finite volumes.
SoftCommittor1DResult soft_committor_1d_compare(const SoftCommittor1DCase& c);

} // namespace ttc
