#include "ttc/mpo.hpp"

#include <string>

#include "ttc/errors.hpp"

namespace ttc {

Core4::Core4(std::size_t left, std::size_t rows, std::size_t cols, std::size_t right)
    : left_(left), rows_(rows), cols_(cols), right_(right), data_(left * rows * cols * right, 0.0) {}

Core4::Core4(std::size_t left, std::size_t rows, std::size_t cols, std::size_t right,
             std::vector<double> data)
    : left_(left), rows_(rows), cols_(cols), right_(right), data_(std::move(data)) {
  if (data_.size() != left * rows * cols * right)
    throw InputError("Core4: data size " + std::to_string(data_.size()) + " does not match shape");
}

RowMatrix Core4::sweep_matrix() const {
  RowMatrix p(left_ * cols_, rows_ * right_);
  for (std::size_t a = 0; a < left_; ++a)
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        for (std::size_t b = 0; b < right_; ++b) p(a * cols_ + j, i * right_ + b) = (*this)(a, i, j, b);
  return p;
}

Mpo::Mpo(std::vector<Core4> cores) : cores_(std::move(cores)) { validate(); }

void Mpo::validate() const {
  if (cores_.empty()) throw InputError("Mpo: at least one core is required");
  if (cores_.front().left() != 1 || cores_.back().right() != 1)
    throw InputError("Mpo: boundary ranks must be 1");
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const auto& c = cores_[k];
    if (c.left() == 0 || c.rows() == 0 || c.cols() == 0 || c.right() == 0)
      throw InputError("Mpo: core " + std::to_string(k) + " has a zero extent");
    if (k + 1 < cores_.size() && c.right() != cores_[k + 1].left())
      throw InputError("Mpo: rank mismatch between cores " + std::to_string(k) + " and " +
                       std::to_string(k + 1));
  }
}

Mpo Mpo::identity(std::span<const std::size_t> modes) {
  std::vector<Core4> cores;
  for (auto n : modes) {
    Core4 c(1, n, n, 1);
    for (std::size_t i = 0; i < n; ++i) c(0, i, i, 0) = 1.0;
    cores.push_back(std::move(c));
  }
  return Mpo(std::move(cores));
}

Mpo Mpo::random(std::span<const std::size_t> row_modes, std::span<const std::size_t> col_modes,
                std::span<const std::size_t> bond_ranks, std::mt19937_64& rng) {
  const std::size_t d = row_modes.size();
  if (d == 0 || col_modes.size() != d || bond_ranks.size() + 1 != d)
    throw InputError("Mpo::random: inconsistent mode or rank lists");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Core4> cores;
  for (std::size_t k = 0; k < d; ++k) {
    Core4 c(k == 0 ? 1 : bond_ranks[k - 1], row_modes[k], col_modes[k], k + 1 == d ? 1 : bond_ranks[k]);
    for (auto& v : c.data()) v = normal(rng);
    cores.push_back(std::move(c));
  }
  return Mpo(std::move(cores));
}

std::vector<std::size_t> Mpo::row_modes() const {
  std::vector<std::size_t> m;
  for (const auto& c : cores_) m.push_back(c.rows());
  return m;
}

std::vector<std::size_t> Mpo::col_modes() const {
  std::vector<std::size_t> m;
  for (const auto& c : cores_) m.push_back(c.cols());
  return m;
}

std::vector<std::size_t> Mpo::ranks() const {
  std::vector<std::size_t> r{1};
  for (const auto& c : cores_) r.push_back(c.right());
  return r;
}

namespace {

void check_env_shapes(const Env3& env, std::size_t rx, std::size_t rw, std::size_t ry) {
  if (env.rx != rx || env.rw != rw || env.ry != ry || env.data.size() != rx * rw * ry)
    throw InputError("environment shape does not match cores");
}

void check_modes(const Core3& x, const Core4& w, const Core3& y) {
  if (x.mode() != w.rows() || y.mode() != w.cols())
    throw InputError("MPO core modes do not match the tensor train cores");
}

} // namespace

Env3 extend_left(const Env3& env, const Core3& x, const Core4& w, const Core3& y) {
  check_modes(x, w, y);
  check_env_shapes(env, x.left(), w.left(), y.left());
  const std::size_t n = y.mode(), m = x.mode();
  ConstRowMatrixMap e(env.data.data(), env.rx * env.rw, env.ry);
  RowMatrix t1 = e * y.right_unfolding();  // (a w, j b')
  const RowMatrix p = w.sweep_matrix();    // (w j, i w')
  RowMatrix t2(env.rx * m * w.right(), y.right());
  for (std::size_t a = 0; a < env.rx; ++a) {
    ConstRowMatrixMap t1a(t1.data() + a * env.rw * n * y.right(), env.rw * n, y.right());
    t2.middleRows(a * m * w.right(), m * w.right()).noalias() = p.transpose() * t1a;
  }
  ConstRowMatrixMap t2v(t2.data(), env.rx * m, w.right() * y.right());
  RowMatrix out = x.left_unfolding().transpose() * t2v;
  return {x.right(), w.right(), y.right(), std::vector<double>(out.data(), out.data() + out.size())};
}

Env3 extend_right(const Env3& env, const Core3& x, const Core4& w, const Core3& y) {
  check_modes(x, w, y);
  check_env_shapes(env, x.right(), w.right(), y.right());
  const std::size_t n = y.mode(), m = x.mode();
  ConstRowMatrixMap e(env.data.data(), env.rx, env.rw * env.ry);
  RowMatrix t1 = x.left_unfolding() * e;  // (a i, w' b')
  const RowMatrix p = w.sweep_matrix();   // (w j, i w')
  RowMatrix t2(x.left() * w.left() * n, env.ry);
  for (std::size_t a = 0; a < x.left(); ++a) {
    ConstRowMatrixMap t1a(t1.data() + a * m * env.rw * env.ry, m * env.rw, env.ry);
    t2.middleRows(a * w.left() * n, w.left() * n).noalias() = p * t1a;
  }
  ConstRowMatrixMap t2v(t2.data(), x.left() * w.left(), n * env.ry);
  RowMatrix out = t2v * y.right_unfolding().transpose();
  return {x.left(), w.left(), y.left(), std::vector<double>(out.data(), out.data() + out.size())};
}

double mpo_quadratic_form(const Mpo& a, const TensorTrain& x, const TensorTrain& y) {
  if (a.dim() != x.dim() || a.dim() != y.dim() || a.row_modes() != x.modes() || a.col_modes() != y.modes())
    throw InputError("mpo_quadratic_form: shape mismatch");
  Env3 env;
  for (std::size_t k = 0; k < a.dim(); ++k) env = extend_left(env, x.core(k), a.core(k), y.core(k));
  return env.data[0];
}

Eigen::MatrixXd mpo_to_dense(const Mpo& a, std::size_t cap) {
  std::size_t rows = 1, cols = 1;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    rows *= a.core(k).rows();
    cols *= a.core(k).cols();
    if (rows * cols > cap) throw ResourceError("mpo_to_dense: operator exceeds entry cap");
  }
  // acc(I, J, b) stored as a vector of (rows_so_far x cols_so_far) blocks per rank index.
  std::vector<Eigen::MatrixXd> acc(1, Eigen::MatrixXd::Ones(1, 1));
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const Core4& c = a.core(k);
    const auto pr = acc[0].rows(), pc = acc[0].cols();
    std::vector<Eigen::MatrixXd> next(c.right(), Eigen::MatrixXd::Zero(pr * c.rows(), pc * c.cols()));
    for (std::size_t al = 0; al < c.left(); ++al)
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
          for (std::size_t b = 0; b < c.right(); ++b) {
            const double v = c(al, i, j, b);
            if (v == 0.0) continue;
            for (Eigen::Index p = 0; p < pr; ++p)
              for (Eigen::Index q = 0; q < pc; ++q)
                next[b](p * c.rows() + i, q * c.cols() + j) += acc[al](p, q) * v;
          }
    acc = std::move(next);
  }
  return acc[0];
}

Mpo mpo_transpose(const Mpo& a) {
  std::vector<Core4> cores;
  for (const auto& c : a.cores()) {
    Core4 t(c.left(), c.cols(), c.rows(), c.right());
    for (std::size_t al = 0; al < c.left(); ++al)
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
          for (std::size_t b = 0; b < c.right(); ++b) t(al, j, i, b) = c(al, i, j, b);
    cores.push_back(std::move(t));
  }
  return Mpo(std::move(cores));
}

} // namespace ttc
