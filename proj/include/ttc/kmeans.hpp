#pragma once

#include <cstddef>
#include <vector>

namespace ttc {

struct KMeans2Result {
  std::vector<double> centroid1;
  std::vector<double> centroid2;
  std::vector<int> assignment;  // 0 or 1
  /// theta_i with x_i ≈ theta U1 + (1 - theta) U2.
  std::vector<double> theta;
  std::size_t iterations = 0;
};

/// Lloyd's algorithm with k = 2, initialized at the farthest pair of samples.
KMeans2Result kmeans2(const std::vector<std::vector<double>>& samples, std::size_t max_iterations = 1000);

/// Projection coordinate of x onto the line through u1 (theta = 1) and u2 (theta = 0).
double line_coordinate(const std::vector<double>& x, const std::vector<double>& u1, const std::vector<double>& u2);

} // namespace ttc
