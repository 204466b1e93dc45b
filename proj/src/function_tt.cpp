#include "ttc/function_tt.hpp"

#include <algorithm>
#include <string>

#include "ttc/errors.hpp"

namespace ttc {

RowMatrix contract_mode(const Core3& core, const Eigen::VectorXd& v) {
  RowMatrix m = RowMatrix::Zero(core.left(), core.right());
  for (std::size_t a = 0; a < core.left(); ++a)
    for (std::size_t i = 0; i < core.mode(); ++i) {
      const double vi = v(i);
      for (std::size_t b = 0; b < core.right(); ++b) m(a, b) += core(a, i, b) * vi;
    }
  return m;
}

namespace {

double checked_coordinate(const BasisSet& basis, double x, std::size_t k, OutOfDomain policy) {
  if (x >= basis.lo() && x <= basis.hi()) return x;
  if (policy == OutOfDomain::clamp) return std::clamp(x, basis.lo(), basis.hi());
  throw DomainError("coordinate " + std::to_string(k) + " = " + std::to_string(x) + " outside [" +
                    std::to_string(basis.lo()) + ", " + std::to_string(basis.hi()) + "]");
}

void check_shapes(const TensorTrain& coeffs, const std::vector<BasisSet>& bases, std::size_t n) {
  if (coeffs.dim() != bases.size() || n != bases.size())
    throw InputError("function evaluation: dimension mismatch");
  for (std::size_t k = 0; k < bases.size(); ++k)
    if (coeffs.core(k).mode() != bases[k].size())
      throw InputError("function evaluation: basis size mismatch in dimension " + std::to_string(k));
}

} // namespace

double eval_function_tt(const TensorTrain& coeffs, const std::vector<BasisSet>& bases,
                        std::span<const double> x, OutOfDomain policy) {
  check_shapes(coeffs, bases, x.size());
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double xk = checked_coordinate(bases[k], x[k], k, policy);
    v = v * contract_mode(coeffs.core(k), bases[k].eval(xk));
  }
  return v(0);
}

Eigen::VectorXd eval_function_tt_gradient(const TensorTrain& coeffs, const std::vector<BasisSet>& bases,
                                          std::span<const double> x, double* value, OutOfDomain policy) {
  check_shapes(coeffs, bases, x.size());
  const std::size_t d = x.size();
  std::vector<RowMatrix> val(d), der(d);
  for (std::size_t k = 0; k < d; ++k) {
    const double xk = checked_coordinate(bases[k], x[k], k, policy);
    val[k] = contract_mode(coeffs.core(k), bases[k].eval(xk));
    der[k] = contract_mode(coeffs.core(k), bases[k].eval_deriv(xk));
  }
  std::vector<Eigen::RowVectorXd> left(d + 1);
  std::vector<Eigen::VectorXd> right(d + 1);
  left[0] = Eigen::RowVectorXd::Ones(1);
  for (std::size_t k = 0; k < d; ++k) left[k + 1] = left[k] * val[k];
  right[d] = Eigen::VectorXd::Ones(1);
  for (std::size_t k = d; k-- > 0;) right[k] = val[k] * right[k + 1];
  Eigen::VectorXd g(d);
  for (std::size_t k = 0; k < d; ++k) g(k) = (left[k] * der[k] * right[k + 1])(0);
  if (value) *value = left[d](0);
  return g;
}

} // namespace ttc
