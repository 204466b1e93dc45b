#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "ttc/als.hpp"
#include "ttc/density.hpp"
#include "ttc/reference_1d.hpp"

namespace ttc {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Independent per-coordinate sampling from a product of univariate unnormalized
/// densities, by inverting a tabulated CDF (piecewise-linear on a fine grid).
class ProductSampler {
public:
  ProductSampler(const std::vector<std::function<double(double)>>& densities,
                 const std::vector<std::pair<double, double>>& intervals, std::size_t cells = 20000);

  std::size_t dim() const { return grids_.size(); }
  void sample(std::mt19937_64& rng, std::span<double> out) const;

private:
  std::vector<std::vector<double>> grids_, cdfs_;
};

/// Sampler for a product density model with x_1 restricted to (x1_lo, x1_hi).
ProductSampler product_sampler(const DensityModel& density, double x1_lo, double x1_hi);

/// Relative p-weighted L2 error ||q - q_ref(x_1)|| / ||q_ref(x_1)|| with delta-method standard error.
McEstimate relative_error_mc(const std::function<double(std::span<const double>)>& q,
                             const std::function<double(double)>& q_ref, const ProductSampler& sampler,
                             std::size_t n_samples, std::uint64_t seed, std::size_t threads = 0);

McEstimate relative_error_mc(const CommittorSolution& sol, const ReferenceSolution1D& ref,
                             const DensityModel& density, std::size_t n_samples, std::uint64_t seed,
                             std::size_t threads = 0);

} // namespace ttc
