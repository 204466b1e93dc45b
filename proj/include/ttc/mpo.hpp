#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttc/tensor_train.hpp"

namespace ttc {

/// Four-index core W(a, i, j, b) of shape (left, rows, cols, right), `b` fastest.
class Core4 {
public:
  Core4() = default;
  Core4(std::size_t left, std::size_t rows, std::size_t cols, std::size_t right);
  Core4(std::size_t left, std::size_t rows, std::size_t cols, std::size_t right,
        std::vector<double> data);

  std::size_t left() const { return left_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t right() const { return right_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t a, std::size_t i, std::size_t j, std::size_t b) const {
    return data_[((a * rows_ + i) * cols_ + j) * right_ + b];
  }
  double& operator()(std::size_t a, std::size_t i, std::size_t j, std::size_t b) {
    return data_[((a * rows_ + i) * cols_ + j) * right_ + b];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// Matrix P with P(a*cols + j, i*right + b) = W(a, i, j, b); the layout both
  /// environment sweeps contract against.
  RowMatrix sweep_matrix() const;

private:
  std::size_t left_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t right_ = 0;
  std::vector<double> data_;
};

class Mpo {
public:
  Mpo() = default;
  explicit Mpo(std::vector<Core4> cores);

  static Mpo identity(std::span<const std::size_t> modes);
  static Mpo random(std::span<const std::size_t> row_modes, std::span<const std::size_t> col_modes,
                    std::span<const std::size_t> bond_ranks, std::mt19937_64& rng);

  std::size_t dim() const { return cores_.size(); }
  std::vector<std::size_t> row_modes() const;
  std::vector<std::size_t> col_modes() const;
  std::vector<std::size_t> ranks() const;

  const Core4& core(std::size_t k) const { return cores_.at(k); }
  const std::vector<Core4>& cores() const { return cores_; }

private:
  void validate() const;
  std::vector<Core4> cores_;
};

/// Three-index environment E(a, w, b) for x^T A y, `b` fastest.
struct Env3 {
  std::size_t rx = 1;
  std::size_t rw = 1;
  std::size_t ry = 1;
  std::vector<double> data{1.0};

  double operator()(std::size_t a, std::size_t w, std::size_t b) const {
    return data[(a * rw + w) * ry + b];
  }
};

/// Absorb core k into a left environment (cores < k) giving the one for cores <= k.
Env3 extend_left(const Env3& env, const Core3& x, const Core4& w, const Core3& y);
/// Absorb core k into a right environment (cores > k) giving the one for cores >= k.
Env3 extend_right(const Env3& env, const Core3& x, const Core4& w, const Core3& y);

double mpo_quadratic_form(const Mpo& a, const TensorTrain& x, const TensorTrain& y);

/// Dense (prod m) x (prod n) matrix, row-major multi-indices with i_1 slowest.
Eigen::MatrixXd mpo_to_dense(const Mpo& a, std::size_t cap = kDefaultDenseCap);

/// Core-wise (i, j) transpose.
Mpo mpo_transpose(const Mpo& a);

} // namespace ttc
