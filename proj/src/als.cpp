#include "ttc/als.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Cholesky>

#include "ttc/errors.hpp"

namespace ttc {

void SolverConfig::validate() const {
  if (ranks.empty()) throw InputError("solver.ranks: at least one rank is required");
  for (auto r : ranks)
    if (r < 1) throw InputError("solver.ranks: ranks must be at least 1");
  if (rho_schedule.empty()) throw InputError("solver.rho_schedule: empty schedule");
  for (std::size_t s = 0; s < rho_schedule.size(); ++s) {
    if (!(rho_schedule[s].rho > 0.0) || !std::isfinite(rho_schedule[s].rho))
      throw InputError("solver.rho_schedule: rho values must be positive");
    if (s > 0 && !(rho_schedule[s].rho > rho_schedule[s - 1].rho))
      throw InputError("solver.rho_schedule: rho values must increase");
  }
  if (!(convergence_tol > 0.0)) throw InputError("solver.convergence_tol: must be positive");
  if (!(regularization > 0.0)) throw InputError("solver.regularization: must be positive");
}

double evaluate_objective(const GalerkinProblem& p, const TensorTrain& Q) {
  return mpo_quadratic_form(p.energy, Q, Q) + p.rho * mpo_quadratic_form(p.HA, Q, Q) +
         p.rho * mpo_quadratic_form(p.HB, Q, Q) - 2.0 * p.rho * tt_inner(p.hB, Q) + p.constant_term();
}

std::pair<double, double> boundary_residuals(const GalerkinProblem& p, const TensorTrain& Q) {
  const double a = mpo_quadratic_form(p.HA, Q, Q) / p.mass_A;
  const double b = (mpo_quadratic_form(p.HB, Q, Q) - 2.0 * tt_inner(p.hB, Q) + p.mass_B) / p.mass_B;
  return {a, b};
}

std::vector<std::size_t> feasible_ranks(std::span<const std::size_t> modes, std::span<const std::size_t> requested) {
  const std::size_t d = modes.size();
  if (d == 0) throw InputError("feasible_ranks: empty mode list");
  if (requested.size() != 1 && requested.size() + 1 != d)
    throw InputError("solver.ranks: expected 1 or d-1 values");
  std::vector<std::size_t> out(d - 1);
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const std::size_t want = requested.size() == 1 ? requested[0] : requested[k];
    double left = 1.0, right = 1.0;
    for (std::size_t i = 0; i <= k; ++i) left *= double(modes[i]);
    for (std::size_t i = k + 1; i < d; ++i) right *= double(modes[i]);
    out[k] = static_cast<std::size_t>(std::min<double>(double(want), std::min(left, right)));
  }
  return out;
}

AlsState::AlsState(const GalerkinProblem& problem, TensorTrain Q, double regularization)
    : problem_(&problem), Q_(std::move(Q)), rho_(problem.rho), regularization_(regularization) {
  if (Q_.modes() != problem.modes()) throw InputError("AlsState: Q modes do not match the problem");
  right_orthogonalize(Q_);
  center_ = 0;
  const std::size_t d = Q_.dim();
  for (auto& v : left_) v.assign(d, Env3{});
  for (auto& v : right_) v.assign(d, Env3{});
  left_h_.assign(d, Eigen::MatrixXd::Ones(1, 1));
  right_h_.assign(d, Eigen::MatrixXd::Ones(1, 1));
  for (std::size_t k = d; k-- > 1;) update_right(k);
}

const Mpo& AlsState::term(std::size_t t) const {
  return t == 0 ? problem_->energy : (t == 1 ? problem_->HA : problem_->HB);
}

// right_[t][k-1] from right_[t][k] and core k.
void AlsState::update_right(std::size_t k) {
  const Core3& q = Q_.core(k);
  for (std::size_t t = 0; t < 3; ++t) right_[t][k - 1] = extend_right(right_[t][k], q, term(t).core(k), q);
  right_h_[k - 1] = extend_right(right_h_[k], q, problem_->hB.core(k));
}

// left_[t][k+1] from left_[t][k] and core k.
void AlsState::update_left(std::size_t k) {
  const Core3& q = Q_.core(k);
  for (std::size_t t = 0; t < 3; ++t) left_[t][k + 1] = extend_left(left_[t][k], q, term(t).core(k), q);
  left_h_[k + 1] = extend_left(left_h_[k], q, problem_->hB.core(k));
}

Env3 AlsState::fresh_left_env(const Mpo& op, const TensorTrain& Q, std::size_t k) {
  Env3 e;
  for (std::size_t i = 0; i < k; ++i) e = extend_left(e, Q.core(i), op.core(i), Q.core(i));
  return e;
}

Env3 AlsState::fresh_right_env(const Mpo& op, const TensorTrain& Q, std::size_t k) {
  Env3 e;
  for (std::size_t i = Q.dim(); i-- > k + 1;) e = extend_right(e, Q.core(i), op.core(i), Q.core(i));
  return e;
}

namespace {

// Adds scale * sum_{w,w'} L(a,w,a') W(w,i,j,w') R(b,w',b') into M[(a,i,b), (a',j,b')].
void add_local_operator(Eigen::MatrixXd& M, const Env3& L, const Core4& W, const Env3& R, double scale) {
  const std::size_t rl = L.rx, rr = R.rx, n = W.rows(), rw = L.rw, rw2 = R.rw;
  RowMatrix lp(rl * rl, rw);
  for (std::size_t a = 0; a < rl; ++a)
    for (std::size_t w = 0; w < rw; ++w)
      for (std::size_t a2 = 0; a2 < rl; ++a2) lp(a * rl + a2, w) = L(a, w, a2);
  ConstRowMatrixMap wm(W.data().data(), rw, n * n * rw2);
  RowMatrix lw = lp * wm;
  ConstRowMatrixMap lwv(lw.data(), rl * rl * n * n, rw2);
  RowMatrix rp(rw2, rr * rr);
  for (std::size_t b = 0; b < rr; ++b)
    for (std::size_t w = 0; w < rw2; ++w)
      for (std::size_t b2 = 0; b2 < rr; ++b2) rp(w, b * rr + b2) = R(b, w, b2);
  const RowMatrix t = lwv * rp;
  for (std::size_t a = 0; a < rl; ++a)
    for (std::size_t a2 = 0; a2 < rl; ++a2)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          const auto row = t.row(((a * rl + a2) * n + i) * n + j);
          for (std::size_t b = 0; b < rr; ++b)
            for (std::size_t b2 = 0; b2 < rr; ++b2)
              M((a * n + i) * rr + b, (a2 * n + j) * rr + b2) += scale * row(b * rr + b2);
        }
}

} // namespace

void AlsState::local_system(Eigen::MatrixXd& M, Eigen::VectorXd& b) const {
  const std::size_t k = center_;
  const Core3& q = Q_.core(k);
  const std::size_t N = q.size();
  M.setZero(N, N);
  const double scales[3] = {1.0, rho_, rho_};
  for (std::size_t t = 0; t < 3; ++t) add_local_operator(M, left_[t][k], term(t).core(k), right_[t][k], scales[t]);
  M = 0.5 * (M + M.transpose()).eval();
  const Core3& h = problem_->hB.core(k);
  RowMatrix t1 = left_h_[k] * h.right_unfolding();
  ConstRowMatrixMap t1v(t1.data(), q.left() * q.mode(), h.right());
  RowMatrix rhs = t1v * right_h_[k].transpose();
  b = rho_ * Eigen::Map<const Eigen::VectorXd>(rhs.data(), N);
}

double AlsState::update_core(std::size_t k) {
  if (k != center_) throw InputError("AlsState::update_core: core " + std::to_string(k) + " is not the center");
  Eigen::MatrixXd M;
  Eigen::VectorXd b;
  local_system(M, b);
  const std::size_t N = b.size();
  const double shift = regularization_ * M.trace() / double(N);
  Eigen::MatrixXd Mr = M;
  Mr.diagonal().array() += shift;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Mr);
  Eigen::VectorXd x;
  if (ldlt.info() == Eigen::Success) x = ldlt.solve(b);
  if (ldlt.info() != Eigen::Success || !x.allFinite())
    throw NumericalError("ALS local solve failed at core " + std::to_string(k) +
                         " (reciprocal condition estimate " + std::to_string(ldlt.rcond()) + ")");
  const Core3& q = Q_.core(k);
  Q_.set_core(k, Core3(q.left(), q.mode(), q.right(), std::vector<double>(x.data(), x.data() + N)));
  const double obj = x.dot(M * x) - 2.0 * x.dot(b) + rho_ * problem_->mass_B;
  if (!std::isfinite(obj)) throw NumericalError("ALS objective is not finite at core " + std::to_string(k));
  return obj;
}

void AlsState::move_right() {
  move_center_right(Q_, center_);
  update_left(center_);
  ++center_;
}

void AlsState::move_left() {
  move_center_left(Q_, center_);
  update_right(center_);
  --center_;
}

void AlsState::sweep(std::size_t sweep_index, std::vector<TraceEntry>& trace) {
  const std::size_t d = Q_.dim();
  if (d == 1) {
    trace.push_back({rho_, sweep_index, 0, update_core(0)});
    return;
  }
  while (center_ > 0) move_left();
  for (std::size_t k = 0; k + 1 < d; ++k) {
    trace.push_back({rho_, sweep_index, k, update_core(k)});
    move_right();
  }
  for (std::size_t k = d - 1; k >= 1; --k) {
    trace.push_back({rho_, sweep_index, k, update_core(k)});
    move_left();
  }
}

CommittorSolution solve(const GalerkinProblem& problem, const std::vector<BasisSet>& phi, const SolverConfig& config) {
  config.validate();
  const auto modes = problem.modes();
  if (phi.size() != modes.size()) throw InputError("solve: need one basis per dimension");
  for (std::size_t k = 0; k < modes.size(); ++k)
    if (phi[k].size() != modes[k]) throw InputError("solve: basis size mismatch in dimension " + std::to_string(k));
  const auto ranks = feasible_ranks(modes, config.ranks);
  std::mt19937_64 rng(config.seed);
  AlsState state(problem, TensorTrain::random(modes, ranks, rng), config.regularization);

  CommittorSolution sol;
  sol.phi_bases = phi;
  std::size_t sweep_index = 0;
  for (const auto& stage : config.rho_schedule) {
    state.set_rho(stage.rho);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t s = 0; s < stage.sweeps; ++s) {
      state.sweep(sweep_index++, sol.objective_trace);
      const double obj = sol.objective_trace.back().objective;
      if (std::isfinite(prev) && (prev - obj) <= config.convergence_tol * std::abs(prev)) break;
      prev = obj;
    }
  }
  sol.Q = state.Q();
  sol.final_rho = config.rho_schedule.back().rho;
  return sol;
}

double eval_q(const CommittorSolution& sol, std::span<const double> x) {
  return eval_function_tt(sol.Q, sol.phi_bases, x, sol.policy);
}

Eigen::VectorXd eval_q_gradient(const CommittorSolution& sol, std::span<const double> x) {
  return eval_function_tt_gradient(sol.Q, sol.phi_bases, x, nullptr, sol.policy);
}

} // namespace ttc
