#include "ttc/kmeans.hpp"

#include "ttc/errors.hpp"

namespace ttc {

namespace {

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

} // namespace

double line_coordinate(const std::vector<double>& x, const std::vector<double>& u1, const std::vector<double>& u2) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dir = u1[k] - u2[k];
    num += (x[k] - u2[k]) * dir;
    den += dir * dir;
  }
  if (!(den > 0.0)) throw DegeneracyError("line_coordinate: centroids coincide");
  return num / den;
}

KMeans2Result kmeans2(const std::vector<std::vector<double>>& samples, std::size_t max_iterations) {
  const std::size_t n = samples.size();
  if (n < 2) throw InputError("kmeans2: need at least two samples");
  const std::size_t d = samples[0].size();
  for (const auto& s : samples)
    if (s.size() != d) throw InputError("kmeans2: samples differ in dimension");

  std::size_t ia = 0, ib = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = dist2(samples[i], samples[j]);
      if (v > best) {
        best = v;
        ia = i;
        ib = j;
      }
    }
  if (!(best > 0.0)) throw DegeneracyError("kmeans2: all samples are identical");

  KMeans2Result r;
  r.centroid1 = samples[ia];
  r.centroid2 = samples[ib];
  r.assignment.assign(n, -1);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = dist2(samples[i], r.centroid1) <= dist2(samples[i], r.centroid2) ? 0 : 1;
      if (a != r.assignment[i]) {
        r.assignment[i] = a;
        changed = true;
      }
    }
    r.iterations = it + 1;
    if (!changed) break;
    std::vector<double> c[2] = {std::vector<double>(d, 0.0), std::vector<double>(d, 0.0)};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      auto& dst = c[r.assignment[i]];
      for (std::size_t k = 0; k < d; ++k) dst[k] += samples[i][k];
      ++count[r.assignment[i]];
    }
    for (int g = 0; g < 2; ++g) {
      if (count[g] == 0) continue;
      for (auto& v : c[g]) v /= double(count[g]);
    }
    if (count[0]) r.centroid1 = std::move(c[0]);
    if (count[1]) r.centroid2 = std::move(c[1]);
  }
  r.theta.reserve(n);
  for (const auto& s : samples) r.theta.push_back(line_coordinate(s, r.centroid1, r.centroid2));
  return r;
}

} // namespace ttc
