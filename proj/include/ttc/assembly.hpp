#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "ttc/basis.hpp"
#include "ttc/density.hpp"
#include "ttc/mpo.hpp"
#include "ttc/tensor_train.hpp"

namespace ttc {

/// Table of int w_m(x) f_i(x) g_j(x) dx, stored as one L x L matrix per m.
using TripleTable = std::vector<Eigen::MatrixXd>;

struct UnivariateIntegralTables {
  /// Per dimension: int psi_m phi_i phi_j and int psi_m phi_i' phi_j'.
  std::vector<TripleTable> I, I_deriv;
  /// Per dimension: int a_m phi_i phi_j and int b_m phi_i phi_j.
  std::vector<TripleTable> overlap_A, overlap_B;
  /// Per dimension: K_B x L matrix int b_m phi_i.
  std::vector<Eigen::MatrixXd> J_B;
  /// Per dimension: int a_m and int b_m.
  std::vector<Eigen::VectorXd> mass_A, mass_B;
};

/// Products of basis tables against one weight family: out[m](i, j) = sum_q w_q psi_m f_i g_j.
TripleTable triple_table(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                         const std::vector<double>& weights);

UnivariateIntegralTables compute_integral_tables(const std::vector<BasisSet>& phi,
                                                 const std::vector<BasisSet>& psi,
                                                 const std::vector<BasisSet>& a,
                                                 const std::vector<BasisSet>& b, std::size_t threads = 0);

/// Contract a coefficient train with per-dimension triple tables: W_l(a,i,j,b) = sum_m C_l(a,m,b) T_l[m](i,j).
Mpo contract_tables(const TensorTrain& coeffs, const std::vector<TripleTable>& tables);

/// Single MPO of sum_k H^k with block upper-bidiagonal cores [[H, H~], [0, H]].
Mpo build_energy_mpo(const DensityModel& density, const UnivariateIntegralTables& tables);
Mpo build_penalty_mpo(const BoundaryMeasure& measure, const std::vector<TripleTable>& overlap);
TensorTrain build_linear_term(const BoundaryMeasure& measure_B, const UnivariateIntegralTables& tables);

/// Average every core with its (i, j) transpose.
Mpo symmetrize(const Mpo& mpo);

/// Full integral of a measure given the per-dimension masses of its basis functions.
double measure_mass(const TensorTrain& coeffs, const std::vector<Eigen::VectorXd>& masses);

struct GalerkinProblem {
  Mpo energy;
  Mpo HA;
  Mpo HB;
  TensorTrain hB;
  double rho = 1.0;
  double mass_A = 0.0;
  double mass_B = 0.0;

  /// rho * int p_B.
  double constant_term() const { return rho * mass_B; }
  std::size_t dim() const { return energy.dim(); }
  std::vector<std::size_t> modes() const { return energy.row_modes(); }
};

GalerkinProblem assemble_problem(const DensityModel& density, const BoundaryMeasure& pA,
                                 const BoundaryMeasure& pB, const UnivariateIntegralTables& tables, double rho);

/// Convenience: tables + problem from the bases.
GalerkinProblem assemble_problem(const DensityModel& density, const BoundaryMeasure& pA,
                                 const BoundaryMeasure& pB, const std::vector<BasisSet>& phi, double rho,
                                 std::size_t threads = 0);

} // namespace ttc
