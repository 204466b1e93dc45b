#include "ttc/monte_carlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "ttc/errors.hpp"
#include "ttc/parallel.hpp"
#include "ttc/random.hpp"

namespace ttc {

ProductSampler::ProductSampler(const std::vector<std::function<double(double)>>& densities,
                               const std::vector<std::pair<double, double>>& intervals, std::size_t cells) {
  if (densities.size() != intervals.size() || densities.empty())
    throw InputError("ProductSampler: need one interval per density");
  if (cells < 2) throw InputError("ProductSampler: need at least 2 cells");
  for (std::size_t k = 0; k < densities.size(); ++k) {
    const auto [lo, hi] = intervals[k];
    if (!(lo < hi)) throw InputError("ProductSampler: empty interval in dimension " + std::to_string(k));
    std::vector<double> grid(cells + 1), cdf(cells + 1, 0.0);
    double prev = densities[k](lo);
    grid[0] = lo;
    for (std::size_t i = 1; i <= cells; ++i) {
      grid[i] = lo + (hi - lo) * double(i) / double(cells);
      const double cur = densities[k](grid[i]);
      cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (grid[i] - grid[i - 1]);
      prev = cur;
    }
    if (!(cdf.back() > 0.0)) throw NumericalError("ProductSampler: zero mass in dimension " + std::to_string(k));
    for (auto& c : cdf) c /= cdf.back();
    grids_.push_back(std::move(grid));
    cdfs_.push_back(std::move(cdf));
  }
}

void ProductSampler::sample(std::mt19937_64& rng, std::span<double> out) const {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t k = 0; k < grids_.size(); ++k) {
    const auto& cdf = cdfs_[k];
    const auto& grid = grids_[k];
    const double u = uni(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t i = std::clamp<std::size_t>(std::size_t(it - cdf.begin()), 1, cdf.size() - 1);
    const double span = cdf[i] - cdf[i - 1];
    const double t = span > 0.0 ? (u - cdf[i - 1]) / span : 0.5;
    out[k] = grid[i - 1] + t * (grid[i] - grid[i - 1]);
  }
}

ProductSampler product_sampler(const DensityModel& density, double x1_lo, double x1_hi) {
  std::vector<std::function<double(double)>> dens;
  std::vector<std::pair<double, double>> intervals;
  for (std::size_t k = 0; k < density.dim(); ++k) {
    const BasisSet& psi = density.bases[k];
    const Core3& c = density.tt.core(k);
    if (psi.family() != BasisFamily::table || c.size() != 1)
      throw UnsupportedError("product_sampler: density is not a rank-1 product of tabulated factors");
    const double coef = c(0, 0, 0);
    dens.push_back([&psi, coef](double x) { return coef * psi.eval(x)(0); });
    const double lo = k == 0 ? std::max(x1_lo, psi.lo()) : psi.lo();
    const double hi = k == 0 ? std::min(x1_hi, psi.hi()) : psi.hi();
    intervals.emplace_back(lo, hi);
  }
  return ProductSampler(dens, intervals);
}

McEstimate relative_error_mc(const std::function<double(std::span<const double>)>& q,
                             const std::function<double(double)>& q_ref, const ProductSampler& sampler,
                             std::size_t n_samples, std::uint64_t seed, std::size_t threads) {
  if (n_samples < 2) throw InputError("relative_error_mc: need at least 2 samples");
  constexpr std::size_t block = 4096;
  const std::size_t blocks = (n_samples + block - 1) / block;
  const std::size_t d = sampler.dim();
  // Per-block sums of a = (q - q_ref)^2, b = q_ref^2 and their second moments.
  std::vector<std::array<double, 5>> sums(blocks);
  parallel_for(
      blocks,
      [&](std::size_t blk) {
        auto rng = stream_rng(seed, blk);
        std::vector<double> x(d);
        std::array<double, 5> s{};
        const std::size_t end = std::min(n_samples, (blk + 1) * block);
        for (std::size_t i = blk * block; i < end; ++i) {
          sampler.sample(rng, x);
          const double r = q_ref(x[0]);
          const double e = q(x) - r;
          const double a = e * e, b = r * r;
          s[0] += a;
          s[1] += b;
          s[2] += a * a;
          s[3] += b * b;
          s[4] += a * b;
        }
        sums[blk] = s;
      },
      threads);
  std::array<double, 5> t{};
  for (const auto& s : sums)
    for (std::size_t j = 0; j < 5; ++j) t[j] += s[j];
  const double n = double(n_samples);
  const double ma = t[0] / n, mb = t[1] / n;
  if (!(mb > 0.0)) throw NumericalError("relative_error_mc: reference has zero norm");
  const double va = t[2] / n - ma * ma, vb = t[3] / n - mb * mb, cab = t[4] / n - ma * mb;
  const double ratio = ma / mb;
  const double var_ratio = std::max(0.0, (va - 2.0 * ratio * cab + ratio * ratio * vb) / (mb * mb * n));
  McEstimate est;
  est.samples = n_samples;
  est.value = std::sqrt(ratio);
  est.std_error = est.value > 0.0 ? std::sqrt(var_ratio) / (2.0 * est.value) : std::sqrt(std::sqrt(var_ratio));
  return est;
}

McEstimate relative_error_mc(const CommittorSolution& sol, const ReferenceSolution1D& ref,
                             const DensityModel& density, std::size_t n_samples, std::uint64_t seed,
                             std::size_t threads) {
  const auto sampler = product_sampler(density, ref.lo, ref.hi);
  return relative_error_mc([&sol](std::span<const double> x) { return eval_q(sol, x); },
                           [&ref](double x1) { return ref(x1); }, sampler, n_samples, seed, threads);
}

} // namespace ttc
