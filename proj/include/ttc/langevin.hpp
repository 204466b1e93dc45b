#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace ttc {

using GradientFn = std::function<void(std::span<const double>, std::span<double>)>;
using ScalarFn = std::function<double(std::span<const double>)>;
using RegionFn = std::function<bool(std::span<const double>)>;
using StepObserver = std::function<void(std::size_t, std::span<const double>)>;

/// Euler-Maruyama for dX = -grad V dt + sqrt(2/beta) dW. Calls `observer(step, x)`
/// after every step when given. Returns the final state.
std::vector<double> langevin_sample(const GradientFn& grad, double beta, double dt, std::size_t n_steps,
                                    std::span<const double> x0, std::mt19937_64& rng,
                                    const StepObserver& observer = {});
std::vector<double> langevin_sample(const GradientFn& grad, double beta, double dt, std::size_t n_steps,
                                    std::span<const double> x0, std::uint64_t seed,
                                    const StepObserver& observer = {});

enum class HitOutcome { A, B, censored };

/// Runs until the state lies in A or B (checked after each step) or max_steps.
HitOutcome run_until_hit(const GradientFn& grad, double beta, double dt, std::span<const double> x0,
                         const RegionFn& in_A, const RegionFn& in_B, std::size_t max_steps, std::mt19937_64& rng);

struct CemeteryEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  std::size_t trajectories = 0;
  std::size_t hits_B = 0;
  std::size_t censored = 0;
  /// More than 5% of trajectories were censored.
  bool censoring_warning = false;
};

/// Hitting probability of the B cemetery state for the jump-augmented Langevin process
/// with killing rates f (to A) and g (to B). Per step, a jump happens with probability
/// 1 - exp(-(f+g) dt) and goes to B with probability g / (f+g).
CemeteryEstimate cemetery_estimate(std::span<const double> x0, const ScalarFn& f, const ScalarFn& g,
                                   const GradientFn& grad, double beta, double dt, std::size_t n_traj,
                                   std::size_t max_steps, std::uint64_t seed, std::size_t threads = 0);

} // namespace ttc
