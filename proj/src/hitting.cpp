#include "ttc/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ttc/errors.hpp"
#include "ttc/parallel.hpp"
#include "ttc/random.hpp"

namespace ttc {

bool Ball::contains(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - center[k]) * (x[k] - center[k]);
  return s <= radius * radius;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InputError("normal_quantile: p must lie in (0, 1)");
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::numbers::sqrt2) < p) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

TrajectoryStats hitting_statistics(std::vector<std::vector<double>> points, const GradientFn& grad, double beta,
                                   const RegionFn& in_A, const RegionFn& in_B, const IsosurfaceConfig& config) {
  if (points.empty()) throw InputError("hitting_statistics: no start points");
  if (config.N_t < 1) throw InputError("hitting.N_t: must be at least 1");
  const std::size_t ns = points.size(), nt = config.N_t;
  std::vector<int> outcome(ns * nt);
  parallel_for(
      ns * nt,
      [&](std::size_t idx) {
        auto rng = stream_rng(config.seed, 1 + idx);
        const auto o = run_until_hit(grad, beta, config.dt, points[idx / nt], in_A, in_B, config.max_steps, rng);
        outcome[idx] = o == HitOutcome::B ? 1 : (o == HitOutcome::A ? 0 : -1);
      },
      config.threads);

  TrajectoryStats st;
  st.N_t = nt;
  st.points = std::move(points);
  st.n.assign(ns, 0);
  st.finished.assign(ns, 0);
  std::size_t total_n = 0, total_done = 0;
  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t t = 0; t < nt; ++t) {
      const int o = outcome[j * nt + t];
      if (o < 0) {
        ++st.censored;
        continue;
      }
      ++st.finished[j];
      st.n[j] += std::size_t(o);
    }
    total_n += st.n[j];
    total_done += st.finished[j];
    st.fractions.push_back(st.finished[j] ? double(st.n[j]) / double(st.finished[j]) : 0.5);
  }
  st.grand_mean = total_done ? double(total_n) / double(total_done) : 0.5;
  double m = 0.0;
  for (double f : st.fractions) m += f;
  m /= double(ns);
  double v = 0.0;
  for (double f : st.fractions) v += (f - m) * (f - m);
  st.std_dev = ns > 1 ? std::sqrt(v / double(ns - 1)) : 0.0;
  st.theoretical_std = 1.0 / std::sqrt(4.0 * double(nt));
  st.mean_tolerance = 3.0 / std::sqrt(4.0 * double(ns) * double(nt));
  st.mean_pass = std::abs(st.grand_mean - 0.5) <= st.mean_tolerance;

  const std::size_t bins = std::max<std::size_t>(1, config.histogram_bins);
  st.histogram_counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) st.histogram_edges.push_back(double(b) / double(bins));
  for (double f : st.fractions) ++st.histogram_counts[std::min(bins - 1, static_cast<std::size_t>(f * double(bins)))];

  std::vector<double> sorted = st.fractions;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t j = 0; j < ns; ++j) {
    const double z = normal_quantile((double(j) + 0.5) / double(ns));
    st.qq.emplace_back(sorted[j], 0.5 + st.theoretical_std * z);
  }
  return st;
}

TrajectoryStats isosurface_hitting_test(const ScalarFn& q, const GradientFn& grad, double beta,
                                        std::span<const double> x0, const RegionFn& in_A, const RegionFn& in_B,
                                        const IsosurfaceConfig& config) {
  if (!(config.eps >= 0.0)) throw InputError("hitting.eps: must be nonnegative");
  if (config.N_s < 1) throw InputError("hitting.N_s: must be at least 1");
  if (config.stride < 1) throw InputError("hitting.stride: must be at least 1");
  std::vector<std::vector<double>> points;
  std::size_t steps = 0, candidates = 0;
  auto rng = stream_rng(config.seed, 0);
  std::vector<double> x(x0.begin(), x0.end());
  x = langevin_sample(grad, beta, config.dt, config.burn_in, x, rng);
  steps += config.burn_in;
  while (points.size() < config.N_s) {
    if (steps + config.stride > config.max_chain_steps)
      throw ResourceError("isosurface_hitting_test: only " + std::to_string(points.size()) + " of " +
                          std::to_string(config.N_s) + " isosurface samples within " +
                          std::to_string(config.max_chain_steps) + " chain steps");
    x = langevin_sample(grad, beta, config.dt, config.stride, x, rng);
    steps += config.stride;
    ++candidates;
    const double qv = q(x);
    if (std::isfinite(qv) && std::abs(qv - 0.5) <= config.eps) points.push_back(x);
  }
  auto st = hitting_statistics(std::move(points), grad, beta, in_A, in_B, config);
  st.chain_steps = steps;
  st.candidates = candidates;
  return st;
}

} // namespace ttc
