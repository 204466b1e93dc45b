#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttc/assembly.hpp"
#include "ttc/basis.hpp"
#include "ttc/function_tt.hpp"
#include "ttc/mpo.hpp"
#include "ttc/tensor_train.hpp"

namespace ttc {

struct RhoStage {
  double rho = 1.0;
  std::size_t sweeps = 4;
};

struct SolverConfig {
  /// d-1 bond ranks, or a single value used for every bond. Clamped to what the modes allow.
  std::vector<std::size_t> ranks{6};
  std::vector<RhoStage> rho_schedule{{10.0, 4}, {100.0, 4}, {1000.0, 4}, {10000.0, 4}};
  double convergence_tol = 1e-10;
  double regularization = 1e-12;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TraceEntry {
  double rho = 0.0;
  std::size_t sweep = 0;
  std::size_t core = 0;
  double objective = 0.0;
};

struct CommittorSolution {
  TensorTrain Q;
  std::vector<BasisSet> phi_bases;
  std::vector<TraceEntry> objective_trace;
  double final_rho = 0.0;
  OutOfDomain policy = OutOfDomain::error;

  std::size_t dim() const { return Q.dim(); }
};

/// Objective of the discretized soft variational problem including the constant term.
double evaluate_objective(const GalerkinProblem& problem, const TensorTrain& Q);

/// Mean squared penalty residuals: int q^2 p_A / int p_A and int (q-1)^2 p_B / int p_B.
std::pair<double, double> boundary_residuals(const GalerkinProblem& problem, const TensorTrain& Q);

/// Bond ranks clamped to min(prod of modes left, prod of modes right).
std::vector<std::size_t> feasible_ranks(std::span<const std::size_t> modes, std::span<const std::size_t> requested);

/// Mixed-canonical ALS state with cached environments for every term of the objective.
class AlsState {
public:
  /// Q is right-orthogonalized (center at core 0) and all environments are built.
  AlsState(const GalerkinProblem& problem, TensorTrain Q, double regularization = 1e-12);

  const TensorTrain& Q() const { return Q_; }
  std::size_t center() const { return center_; }
  void set_rho(double rho) { rho_ = rho; }
  double rho() const { return rho_; }

  /// Solve the local system at the current center (which must equal k) and return the objective.
  double update_core(std::size_t k);
  /// Shift the orthogonality center by one, updating the affected environments.
  void move_right();
  void move_left();

  /// Local operator and right-hand side at the center: objective = x^T M x - 2 x^T b + const.
  void local_system(Eigen::MatrixXd& M, Eigen::VectorXd& b) const;

  /// Cached environment of term t (0 energy, 1 A, 2 B) left of core k / right of core k.
  const Env3& left_env(std::size_t term, std::size_t k) const { return left_[term][k]; }
  const Env3& right_env(std::size_t term, std::size_t k) const { return right_[term][k]; }
  const Eigen::MatrixXd& left_linear_env(std::size_t k) const { return left_h_[k]; }
  const Eigen::MatrixXd& right_linear_env(std::size_t k) const { return right_h_[k]; }

  /// Environments of Q computed from scratch (for consistency checks).
  static Env3 fresh_left_env(const Mpo& op, const TensorTrain& Q, std::size_t k);
  static Env3 fresh_right_env(const Mpo& op, const TensorTrain& Q, std::size_t k);

  /// Full sweep 0..d-2 then d-1..1; appends one trace entry per core update.
  void sweep(std::size_t sweep_index, std::vector<TraceEntry>& trace);

private:
  const Mpo& term(std::size_t t) const;
  void update_left(std::size_t k);
  void update_right(std::size_t k);

  const GalerkinProblem* problem_;
  TensorTrain Q_;
  double rho_;
  double regularization_;
  std::size_t center_ = 0;
  // left_[t][k]: cores < k; right_[t][k]: cores > k.
  std::vector<Env3> left_[3], right_[3];
  std::vector<Eigen::MatrixXd> left_h_, right_h_;
};

/// Random N(0,1) initialization and penalty continuation. `problem.rho` is ignored:
/// the schedule sets rho for every stage. Warm-starts across stages.
CommittorSolution solve(const GalerkinProblem& problem, const std::vector<BasisSet>& phi, const SolverConfig& config);

double eval_q(const CommittorSolution& sol, std::span<const double> x);
Eigen::VectorXd eval_q_gradient(const CommittorSolution& sol, std::span<const double> x);

} // namespace ttc
