#include "ttc/tensor_train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "ttc/errors.hpp"

namespace ttc {

Core3::Core3(std::size_t left, std::size_t mode, std::size_t right)
    : left_(left), mode_(mode), right_(right), data_(left * mode * right, 0.0) {}

Core3::Core3(std::size_t left, std::size_t mode, std::size_t right, std::vector<double> data)
    : left_(left), mode_(mode), right_(right), data_(std::move(data)) {
  if (data_.size() != left * mode * right)
    throw InputError("Core3: data size " + std::to_string(data_.size()) + " does not match shape");
}

ConstRowMatrixMap Core3::left_unfolding() const {
  return {data_.data(), static_cast<Eigen::Index>(left_ * mode_), static_cast<Eigen::Index>(right_)};
}
RowMatrixMap Core3::left_unfolding() {
  return {data_.data(), static_cast<Eigen::Index>(left_ * mode_), static_cast<Eigen::Index>(right_)};
}
ConstRowMatrixMap Core3::right_unfolding() const {
  return {data_.data(), static_cast<Eigen::Index>(left_), static_cast<Eigen::Index>(mode_ * right_)};
}
RowMatrixMap Core3::right_unfolding() {
  return {data_.data(), static_cast<Eigen::Index>(left_), static_cast<Eigen::Index>(mode_ * right_)};
}

RowMatrix Core3::slice(std::size_t i) const {
  RowMatrix s(left_, right_);
  for (std::size_t a = 0; a < left_; ++a)
    for (std::size_t b = 0; b < right_; ++b) s(a, b) = (*this)(a, i, b);
  return s;
}

TensorTrain::TensorTrain(std::vector<Core3> cores) : cores_(std::move(cores)) { validate(); }

void TensorTrain::validate() const {
  if (cores_.empty()) throw InputError("TensorTrain: at least one core is required");
  if (cores_.front().left() != 1 || cores_.back().right() != 1)
    throw InputError("TensorTrain: boundary ranks must be 1");
  for (std::size_t k = 0; k < cores_.size(); ++k) {
    const auto& c = cores_[k];
    if (c.left() == 0 || c.mode() == 0 || c.right() == 0)
      throw InputError("TensorTrain: core " + std::to_string(k) + " has a zero extent");
    if (k + 1 < cores_.size() && c.right() != cores_[k + 1].left())
      throw InputError("TensorTrain: rank mismatch between cores " + std::to_string(k) + " and " +
                       std::to_string(k + 1));
  }
}

TensorTrain TensorTrain::zeros(std::span<const std::size_t> modes) {
  std::vector<Core3> cores;
  for (auto n : modes) cores.emplace_back(1, n, 1);
  return TensorTrain(std::move(cores));
}

TensorTrain TensorTrain::ones(std::span<const std::size_t> modes) {
  std::vector<Core3> cores;
  for (auto n : modes) cores.emplace_back(1, n, 1, std::vector<double>(n, 1.0));
  return TensorTrain(std::move(cores));
}

TensorTrain TensorTrain::rank_one(const std::vector<Eigen::VectorXd>& factors) {
  std::vector<Core3> cores;
  for (const auto& f : factors)
    cores.emplace_back(1, f.size(), 1, std::vector<double>(f.data(), f.data() + f.size()));
  return TensorTrain(std::move(cores));
}

TensorTrain TensorTrain::random(std::span<const std::size_t> modes,
                                std::span<const std::size_t> bond_ranks, std::mt19937_64& rng) {
  const std::size_t d = modes.size();
  if (d == 0) throw InputError("TensorTrain::random: empty mode list");
  if (bond_ranks.size() + 1 != d)
    throw InputError("TensorTrain::random: expected d-1 bond ranks");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Core3> cores;
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t l = k == 0 ? 1 : bond_ranks[k - 1];
    const std::size_t r = k + 1 == d ? 1 : bond_ranks[k];
    Core3 c(l, modes[k], r);
    for (auto& v : c.data()) v = normal(rng);
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

std::vector<std::size_t> TensorTrain::modes() const {
  std::vector<std::size_t> m;
  for (const auto& c : cores_) m.push_back(c.mode());
  return m;
}

std::vector<std::size_t> TensorTrain::ranks() const {
  std::vector<std::size_t> r{1};
  for (const auto& c : cores_) r.push_back(c.right());
  return r;
}

std::size_t TensorTrain::max_rank() const {
  auto r = ranks();
  return *std::max_element(r.begin(), r.end());
}

void TensorTrain::set_core(std::size_t k, Core3 core) {
  const auto& old = cores_.at(k);
  if (core.left() != old.left() || core.right() != old.right() || core.mode() != old.mode())
    throw InputError("TensorTrain::set_core: shape change at core " + std::to_string(k));
  cores_[k] = std::move(core);
}

void TensorTrain::set_core_pair(std::size_t k, Core3 left, Core3 right) {
  if (k + 1 >= cores_.size()) throw InputError("TensorTrain::set_core_pair: index out of range");
  if (left.left() != cores_[k].left() || right.right() != cores_[k + 1].right() ||
      left.right() != right.left() || left.mode() != cores_[k].mode() ||
      right.mode() != cores_[k + 1].mode())
    throw InputError("TensorTrain::set_core_pair: incompatible shapes at " + std::to_string(k));
  cores_[k] = std::move(left);
  cores_[k + 1] = std::move(right);
}

double tt_eval(const TensorTrain& tt, std::span<const std::size_t> idx) {
  if (idx.size() != tt.dim()) throw InputError("tt_eval: index has wrong length");
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (std::size_t k = 0; k < tt.dim(); ++k) {
    const auto& c = tt.core(k);
    if (idx[k] >= c.mode())
      throw InputError("tt_eval: index " + std::to_string(idx[k]) + " out of range in mode " +
                       std::to_string(k));
    Eigen::RowVectorXd next = Eigen::RowVectorXd::Zero(c.right());
    for (std::size_t a = 0; a < c.left(); ++a)
      for (std::size_t b = 0; b < c.right(); ++b) next(b) += v(a) * c(a, idx[k], b);
    v = std::move(next);
  }
  return v(0);
}

std::vector<double> tt_to_dense(const TensorTrain& tt, std::size_t cap) {
  std::size_t total = 1;
  for (auto n : tt.modes()) {
    if (total > cap / n) throw ResourceError("tt_to_dense: tensor exceeds entry cap");
    total *= n;
  }
  if (total > cap) throw ResourceError("tt_to_dense: tensor exceeds entry cap");
  // Grow a (prefix entries) x r_k matrix left to right.
  RowMatrix acc = tt.core(0).left_unfolding();
  for (std::size_t k = 1; k < tt.dim(); ++k) {
    const auto& c = tt.core(k);
    RowMatrix next = acc * c.right_unfolding();
    // next is (prefix, n_k * r_k); row-major memory already matches (prefix * n_k, r_k).
    acc = Eigen::Map<RowMatrix>(next.data(), next.rows() * c.mode(), c.right());
  }
  return {acc.data(), acc.data() + acc.size()};
}

namespace {

std::size_t truncation_rank(const Eigen::VectorXd& sv, double delta, std::size_t max_rank) {
  std::size_t rank = sv.size();
  double tail = 0.0;
  while (rank > 1) {
    const double s = sv(rank - 1);
    if (tail + s * s > delta * delta) break;
    tail += s * s;
    --rank;
  }
  return std::max<std::size_t>(1, std::min(rank, max_rank));
}

} // namespace

TensorTrain tt_from_dense(std::span<const double> dense, std::span<const std::size_t> modes,
                          double rel_tol, std::size_t max_rank) {
  const std::size_t d = modes.size();
  if (d == 0) throw InputError("tt_from_dense: empty mode list");
  std::size_t total = std::accumulate(modes.begin(), modes.end(), std::size_t{1}, std::multiplies<>());
  if (total != dense.size()) throw InputError("tt_from_dense: data size does not match modes");
  Eigen::Map<const Eigen::VectorXd> flat(dense.data(), dense.size());
  const double delta = d > 1 ? rel_tol / std::sqrt(double(d - 1)) * flat.norm() : 0.0;

  std::vector<Core3> cores;
  RowMatrix rest = Eigen::Map<const RowMatrix>(dense.data(), 1, total);
  std::size_t r_prev = 1;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const std::size_t rows = r_prev * modes[k];
    const std::size_t cols = rest.size() / rows;
    RowMatrix unfold = Eigen::Map<RowMatrix>(rest.data(), rows, cols);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(unfold, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const std::size_t r = truncation_rank(svd.singularValues(), delta, max_rank);
    RowMatrix u = svd.matrixU().leftCols(r);
    cores.emplace_back(r_prev, modes[k], r, std::vector<double>(u.data(), u.data() + u.size()));
    rest = svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
    r_prev = r;
  }
  cores.emplace_back(r_prev, modes[d - 1], 1, std::vector<double>(rest.data(), rest.data() + rest.size()));
  return TensorTrain(std::move(cores));
}

Eigen::MatrixXd extend_left(const Eigen::MatrixXd& env, const Core3& a, const Core3& b) {
  RowMatrix t = env * b.right_unfolding();  // (ra, n * rb')
  Eigen::Map<RowMatrix> tv(t.data(), a.left() * a.mode(), b.right());
  return a.left_unfolding().transpose() * tv;
}

Eigen::MatrixXd extend_right(const Eigen::MatrixXd& env, const Core3& a, const Core3& b) {
  RowMatrix t = a.left_unfolding() * env;  // (ra * n, rb')
  Eigen::Map<RowMatrix> tv(t.data(), a.left(), a.mode() * b.right());
  return tv * b.right_unfolding().transpose();
}

double tt_inner(const TensorTrain& a, const TensorTrain& b) {
  if (a.modes() != b.modes()) throw InputError("tt_inner: mode sizes differ");
  Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
  for (std::size_t k = 0; k < a.dim(); ++k) env = extend_left(env, a.core(k), b.core(k));
  return env(0, 0);
}

double tt_norm(const TensorTrain& tt) { return std::sqrt(std::max(0.0, tt_inner(tt, tt))); }

void move_center_right(TensorTrain& tt, std::size_t k) {
  if (k + 1 >= tt.dim()) throw InputError("move_center_right: no core to the right");
  const Core3& c = tt.core(k);
  const std::size_t m = c.left() * c.mode();
  const std::size_t r = std::min(m, c.right());
  Eigen::MatrixXd a = c.left_unfolding();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  RowMatrix q = qr.householderQ() * Eigen::MatrixXd::Identity(m, r);
  Eigen::MatrixXd rfac = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  Core3 left(c.left(), c.mode(), r, std::vector<double>(q.data(), q.data() + q.size()));
  const Core3& nxt = tt.core(k + 1);
  RowMatrix merged = rfac * nxt.right_unfolding();
  Core3 right(r, nxt.mode(), nxt.right(), std::vector<double>(merged.data(), merged.data() + merged.size()));
  tt.set_core_pair(k, std::move(left), std::move(right));
}

void move_center_left(TensorTrain& tt, std::size_t k) {
  if (k == 0 || k >= tt.dim()) throw InputError("move_center_left: no core to the left");
  const Core3& c = tt.core(k);
  const std::size_t m = c.mode() * c.right();
  const std::size_t r = std::min(m, c.left());
  Eigen::MatrixXd at = c.right_unfolding().transpose();  // (n*r_k) x r_{k-1}
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(at);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, r);
  Eigen::MatrixXd rfac = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  RowMatrix qt = q.transpose();
  Core3 right(r, c.mode(), c.right(), std::vector<double>(qt.data(), qt.data() + qt.size()));
  const Core3& prv = tt.core(k - 1);
  RowMatrix merged = prv.left_unfolding() * rfac.transpose();
  Core3 left(prv.left(), prv.mode(), r, std::vector<double>(merged.data(), merged.data() + merged.size()));
  tt.set_core_pair(k - 1, std::move(left), std::move(right));
}

void right_orthogonalize(TensorTrain& tt) {
  for (std::size_t k = tt.dim(); k-- > 1;) move_center_left(tt, k);
}

TensorTrain tt_round(const TensorTrain& tt, double rel_tol, std::size_t max_rank) {
  if (rel_tol < 0.0) throw InputError("tt_round: rel_tol must be non-negative");
  if (max_rank < 1) throw InputError("tt_round: max_rank must be at least 1");
  TensorTrain out = tt;
  const std::size_t d = out.dim();
  if (d == 1) return out;
  right_orthogonalize(out);
  const double norm = Eigen::Map<const Eigen::VectorXd>(out.core(0).data().data(), out.core(0).size()).norm();
  const double delta = rel_tol / std::sqrt(double(d - 1)) * norm;
  for (std::size_t k = 0; k + 1 < d; ++k) {
    const Core3& c = out.core(k);
    Eigen::MatrixXd a = c.left_unfolding();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const std::size_t r = truncation_rank(svd.singularValues(), delta, max_rank);
    RowMatrix u = svd.matrixU().leftCols(r);
    Eigen::MatrixXd sv = svd.singularValues().head(r).asDiagonal() * svd.matrixV().leftCols(r).transpose();
    const Core3& nxt = out.core(k + 1);
    RowMatrix merged = sv * nxt.right_unfolding();
    Core3 left(c.left(), c.mode(), r, std::vector<double>(u.data(), u.data() + u.size()));
    Core3 right(r, nxt.mode(), nxt.right(), std::vector<double>(merged.data(), merged.data() + merged.size()));
    out.set_core_pair(k, std::move(left), std::move(right));
  }
  return out;
}

TensorTrain tt_scale_add(const TensorTrain& a, const TensorTrain& b, double ca, double cb) {
  if (a.modes() != b.modes()) throw InputError("tt_scale_add: mode sizes differ");
  const std::size_t d = a.dim();
  if (d == 1) {
    Core3 c(1, a.core(0).mode(), 1);
    for (std::size_t i = 0; i < c.mode(); ++i) c(0, i, 0) = ca * a.core(0)(0, i, 0) + cb * b.core(0)(0, i, 0);
    return TensorTrain({std::move(c)});
  }
  std::vector<Core3> cores;
  for (std::size_t k = 0; k < d; ++k) {
    const Core3& x = a.core(k);
    const Core3& y = b.core(k);
    const bool first = k == 0;
    const bool last = k + 1 == d;
    const std::size_t l = first ? 1 : x.left() + y.left();
    const std::size_t r = last ? 1 : x.right() + y.right();
    Core3 c(l, x.mode(), r);
    const double sx = first ? ca : 1.0;
    const double sy = first ? cb : 1.0;
    for (std::size_t i = 0; i < x.mode(); ++i) {
      for (std::size_t p = 0; p < x.left(); ++p)
        for (std::size_t q = 0; q < x.right(); ++q) c(p, i, q) = sx * x(p, i, q);
      const std::size_t lo = first ? 0 : x.left();
      const std::size_t ro = last ? 0 : x.right();
      for (std::size_t p = 0; p < y.left(); ++p)
        for (std::size_t q = 0; q < y.right(); ++q) c(lo + p, i, ro + q) = sy * y(p, i, q);
    }
    cores.push_back(std::move(c));
  }
  return TensorTrain(std::move(cores));
}

} // namespace ttc
