#pragma once

// Pointwise evaluation of functions expanded in a tensor-product basis,
// f(x) = sum_i C(i) phi_{i_1}(x_1) ... phi_{i_d}(x_d), with C a tensor train.

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ttc/basis.hpp"
#include "ttc/tensor_train.hpp"

namespace ttc {

enum class OutOfDomain { error, clamp };

double eval_function_tt(const TensorTrain& coeffs, const std::vector<BasisSet>& bases,
                        std::span<const double> x, OutOfDomain policy = OutOfDomain::error);

/// Gradient of the expansion; optionally also returns the value.
Eigen::VectorXd eval_function_tt_gradient(const TensorTrain& coeffs, const std::vector<BasisSet>& bases,
                                          std::span<const double> x, double* value = nullptr,
                                          OutOfDomain policy = OutOfDomain::error);

/// Contract one core with a vector over its mode index: returns the left x right matrix.
RowMatrix contract_mode(const Core3& core, const Eigen::VectorXd& v);

} // namespace ttc
