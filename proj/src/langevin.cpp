#include "ttc/langevin.hpp"

#include <cmath>
#include <string>

#include "ttc/errors.hpp"
#include "ttc/parallel.hpp"
#include "ttc/random.hpp"

namespace ttc {

namespace {

void check_step(double beta, double dt) {
  if (!(dt > 0.0)) throw InputError("langevin: dt must be positive");
  if (!(beta > 0.0)) throw InputError("langevin: beta must be positive");
}

void em_step(const GradientFn& grad, double noise, double dt, std::vector<double>& x, std::vector<double>& g,
             std::normal_distribution<double>& normal, std::mt19937_64& rng, std::size_t step) {
  grad(x, g);
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] += -g[k] * dt + noise * normal(rng);
    if (!std::isfinite(x[k])) throw NumericalError("langevin: non-finite state at step " + std::to_string(step));
  }
}

} // namespace

std::vector<double> langevin_sample(const GradientFn& grad, double beta, double dt, std::size_t n_steps,
                                    std::span<const double> x0, std::mt19937_64& rng, const StepObserver& observer) {
  check_step(beta, dt);
  std::vector<double> x(x0.begin(), x0.end()), g(x.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise = std::sqrt(2.0 * dt / beta);
  for (std::size_t s = 0; s < n_steps; ++s) {
    em_step(grad, noise, dt, x, g, normal, rng, s);
    if (observer) observer(s, x);
  }
  return x;
}

std::vector<double> langevin_sample(const GradientFn& grad, double beta, double dt, std::size_t n_steps,
                                    std::span<const double> x0, std::uint64_t seed, const StepObserver& observer) {
  std::mt19937_64 rng(seed);
  return langevin_sample(grad, beta, dt, n_steps, x0, rng, observer);
}

HitOutcome run_until_hit(const GradientFn& grad, double beta, double dt, std::span<const double> x0,
                         const RegionFn& in_A, const RegionFn& in_B, std::size_t max_steps, std::mt19937_64& rng) {
  check_step(beta, dt);
  std::vector<double> x(x0.begin(), x0.end()), g(x.size());
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise = std::sqrt(2.0 * dt / beta);
  for (std::size_t s = 0; s < max_steps; ++s) {
    em_step(grad, noise, dt, x, g, normal, rng, s);
    if (in_A(x)) return HitOutcome::A;
    if (in_B(x)) return HitOutcome::B;
  }
  return HitOutcome::censored;
}

CemeteryEstimate cemetery_estimate(std::span<const double> x0, const ScalarFn& f, const ScalarFn& g,
                                   const GradientFn& grad, double beta, double dt, std::size_t n_traj,
                                   std::size_t max_steps, std::uint64_t seed, std::size_t threads) {
  check_step(beta, dt);
  if (n_traj < 1) throw InputError("cemetery_estimate: need at least one trajectory");
  std::vector<int> outcome(n_traj);  // 0 A, 1 B, -1 censored
  const double noise = std::sqrt(2.0 * dt / beta);
  parallel_for(
      n_traj,
      [&](std::size_t t) {
        auto rng = stream_rng(seed, t);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::vector<double> x(x0.begin(), x0.end()), gr(x.size());
        outcome[t] = -1;
        for (std::size_t s = 0; s < max_steps; ++s) {
          const double fa = f(x), gb = g(x);
          if (!(fa >= 0.0) || !(gb >= 0.0) || !std::isfinite(fa + gb))
            throw NumericalError("cemetery_estimate: invalid jump rate at step " + std::to_string(s));
          const double total = fa + gb;
          if (total > 0.0 && uni(rng) < -std::expm1(-total * dt)) {
            outcome[t] = uni(rng) * total < gb ? 1 : 0;
            return;
          }
          em_step(grad, noise, dt, x, gr, normal, rng, s);
        }
      },
      threads);
  CemeteryEstimate est;
  est.trajectories = n_traj;
  for (int o : outcome) {
    if (o < 0) ++est.censored;
    else if (o == 1) ++est.hits_B;
  }
  const std::size_t done = n_traj - est.censored;
  est.censoring_warning = double(est.censored) > 0.05 * double(n_traj);
  if (done > 0) {
    const double p = double(est.hits_B) / double(done);
    est.probability = p;
    est.std_error = std::sqrt(p * (1.0 - p) / double(done));
  }
  return est;
}

} // namespace ttc
