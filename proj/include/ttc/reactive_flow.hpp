#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ttc {

struct PathPoint {
  double t = 0.0;
  std::vector<double> x;
  double q = 0.0;
};

/// q(x) and its gradient.
using ValueGradientFn = std::function<double(std::span<const double>, Eigen::VectorXd&)>;

/// Integrates dU/dt = beta^{-1} p(U) grad q(U) from x0 until q >= q_hi. Steps are taken in q
/// (midpoint rule on dU/dq = grad q / |grad q|^2, |dq| <= max_dq); physical time is accumulated
/// from dt = dq / (beta^{-1} p |grad q|^2).
std::vector<PathPoint> reactive_flow(const ValueGradientFn& q, const std::function<double(std::span<const double>)>& p,
                                     double beta, std::span<const double> x0, double q_hi = 0.9,
                                     double max_dq = 1e-3, std::size_t max_steps = 1'000'000);

} // namespace ttc
