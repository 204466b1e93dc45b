#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ttc/langevin.hpp"

namespace ttc {

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
  bool contains(std::span<const double> x) const;
};

struct IsosurfaceConfig {
  double eps = 5e-3;
  std::size_t N_s = 5000;
  std::size_t N_t = 100;
  double dt = 1e-5;
  /// Sampling chain: steps discarded first, steps between candidate samples, total budget.
  std::size_t burn_in = 10000;
  std::size_t stride = 100;
  std::size_t max_chain_steps = 100'000'000;
  /// Per-trajectory step cap; censored trajectories are reported and excluded.
  std::size_t max_steps = 10'000'000;
  std::size_t histogram_bins = 20;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

struct TrajectoryStats {
  std::size_t N_t = 0;
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> n;         // successes (B before A) per point
  std::vector<std::size_t> finished;  // uncensored trajectories per point
  std::vector<double> fractions;
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram_counts;
  /// (sorted empirical fraction, theoretical quantile of N(1/2, 1/(4 N_t))).
  std::vector<std::pair<double, double>> qq;
  double grand_mean = 0.0;
  double std_dev = 0.0;
  double theoretical_std = 0.0;
  /// 3 (4 N_s N_t)^{-1/2}.
  double mean_tolerance = 0.0;
  bool mean_pass = false;
  std::size_t censored = 0;
  std::size_t chain_steps = 0;
  std::size_t candidates = 0;
};

/// Inverse of the standard normal CDF.
double normal_quantile(double p);

/// Collects N_s points of {|q - 1/2| <= eps} from one Langevin chain started at x0, then runs
/// N_t trajectories from each to absorption in A or B. q may return NaN to reject a point.
TrajectoryStats isosurface_hitting_test(const ScalarFn& q, const GradientFn& grad, double beta,
                                        std::span<const double> x0, const RegionFn& in_A, const RegionFn& in_B,
                                        const IsosurfaceConfig& config);

/// Second half only: trajectories from given start points.
TrajectoryStats hitting_statistics(std::vector<std::vector<double>> points, const GradientFn& grad, double beta,
                                   const RegionFn& in_A, const RegionFn& in_B, const IsosurfaceConfig& config);

} // namespace ttc
