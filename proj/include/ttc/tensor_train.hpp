#pragma once

// Matrix product state / tensor train container and the primitive operations
// the solver is built from. Indices are zero-based throughout.

#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ttc {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixMap = Eigen::Map<RowMatrix>;
using ConstRowMatrixMap = Eigen::Map<const RowMatrix>;

/// Three-index core G(a, i, b) of shape (left, mode, right), `b` fastest.
class Core3 {
public:
  Core3() = default;
  Core3(std::size_t left, std::size_t mode, std::size_t right);
  Core3(std::size_t left, std::size_t mode, std::size_t right, std::vector<double> data);

  std::size_t left() const { return left_; }
  std::size_t mode() const { return mode_; }
  std::size_t right() const { return right_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t a, std::size_t i, std::size_t b) const {
    return data_[(a * mode_ + i) * right_ + b];
  }
  double& operator()(std::size_t a, std::size_t i, std::size_t b) {
    return data_[(a * mode_ + i) * right_ + b];
  }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  /// (left*mode) x right view.
  ConstRowMatrixMap left_unfolding() const;
  RowMatrixMap left_unfolding();
  /// left x (mode*right) view.
  ConstRowMatrixMap right_unfolding() const;
  RowMatrixMap right_unfolding();

  /// Slice G(:, i, :) as a left x right matrix (copy).
  RowMatrix slice(std::size_t i) const;

private:
  std::size_t left_ = 0;
  std::size_t mode_ = 0;
  std::size_t right_ = 0;
  std::vector<double> data_;
};

/// Chain of d three-index cores with boundary ranks r_0 = r_d = 1.
class TensorTrain {
public:
  TensorTrain() = default;
  explicit TensorTrain(std::vector<Core3> cores);

  static TensorTrain zeros(std::span<const std::size_t> modes);
  static TensorTrain ones(std::span<const std::size_t> modes);
  /// Rank-1 train whose k-th core holds `factors[k]`.
  static TensorTrain rank_one(const std::vector<Eigen::VectorXd>& factors);
  /// Standard normal entries. `bond_ranks` has d-1 entries (r_1..r_{d-1}).
  static TensorTrain random(std::span<const std::size_t> modes,
                            std::span<const std::size_t> bond_ranks, std::mt19937_64& rng);

  std::size_t dim() const { return cores_.size(); }
  std::vector<std::size_t> modes() const;
  /// (r_0, ..., r_d).
  std::vector<std::size_t> ranks() const;
  std::size_t max_rank() const;

  const Core3& core(std::size_t k) const { return cores_.at(k); }
  const std::vector<Core3>& cores() const { return cores_; }

  /// Replace core k keeping its rank signature.
  void set_core(std::size_t k, Core3 core);
  /// Replace the neighbouring cores k and k+1 together; their shared rank may change.
  void set_core_pair(std::size_t k, Core3 left, Core3 right);

private:
  void validate() const;
  std::vector<Core3> cores_;
};

inline constexpr std::size_t kDefaultDenseCap = 10'000'000;
inline constexpr std::size_t kUnboundedRank = std::numeric_limits<std::size_t>::max();

double tt_eval(const TensorTrain& tt, std::span<const std::size_t> idx);

/// Dense entries in row-major order (i_1 slowest).
std::vector<double> tt_to_dense(const TensorTrain& tt, std::size_t cap = kDefaultDenseCap);

/// TT-SVD of a dense row-major tensor. rel_tol = 0 keeps the full rank.
TensorTrain tt_from_dense(std::span<const double> dense, std::span<const std::size_t> modes,
                          double rel_tol = 0.0, std::size_t max_rank = kUnboundedRank);

double tt_inner(const TensorTrain& a, const TensorTrain& b);
double tt_norm(const TensorTrain& tt);

TensorTrain tt_round(const TensorTrain& tt, double rel_tol, std::size_t max_rank = kUnboundedRank);
TensorTrain tt_scale_add(const TensorTrain& a, const TensorTrain& b, double ca, double cb);

/// QR-based gauge moves. Core k becomes left (resp. right) orthonormal and the
/// remaining factor is absorbed by core k+1 (resp. k-1). The represented tensor is unchanged.
void move_center_right(TensorTrain& tt, std::size_t k);
void move_center_left(TensorTrain& tt, std::size_t k);

/// Right-orthonormalize cores d-1..1 so the orthogonality center sits at core 0.
void right_orthogonalize(TensorTrain& tt);

// Transfer-matrix steps for <a, b>: E is r_a x r_b.
Eigen::MatrixXd extend_left(const Eigen::MatrixXd& env, const Core3& a, const Core3& b);
Eigen::MatrixXd extend_right(const Eigen::MatrixXd& env, const Core3& a, const Core3& b);

} // namespace ttc
