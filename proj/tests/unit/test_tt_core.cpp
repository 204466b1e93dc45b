#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "ttc/errors.hpp"
#include "ttc/mpo.hpp"
#include "ttc/random.hpp"
#include "ttc/tensor_train.hpp"
#include "ttc/tt_io.hpp"

using namespace ttc;

namespace {

TensorTrain random_tt(std::vector<std::size_t> modes, std::size_t r, std::uint64_t seed) {
  auto rng = stream_rng(seed, 0);
  std::vector<std::size_t> bonds(modes.size() - 1, r);
  return TensorTrain::random(modes, bonds, rng);
}

void expect_shape_invariants(const TensorTrain& tt) {
  const auto r = tt.ranks();
  ASSERT_EQ(r.size(), tt.dim() + 1);
  EXPECT_EQ(r.front(), 1u);
  EXPECT_EQ(r.back(), 1u);
  for (std::size_t k = 0; k < tt.dim(); ++k) {
    EXPECT_GE(tt.core(k).mode(), 1u);
    EXPECT_EQ(tt.core(k).left(), r[k]);
    EXPECT_EQ(tt.core(k).right(), r[k + 1]);
  }
}

} // namespace

TEST(TensorTrain, AllOnesRankOneEvaluatesToOne) {
  const std::vector<std::size_t> modes{2, 3, 4};
  const auto tt = TensorTrain::ones(modes);
  const std::vector<std::size_t> idx{1, 2, 3};
  EXPECT_DOUBLE_EQ(tt_eval(tt, idx), 1.0);
}

TEST(TensorTrain, SingleCoreLookup) {
  Core3 c(1, 4, 1, {0.5, -1.0, 2.0, 3.5});
  TensorTrain tt({c});
  for (std::size_t i = 0; i < 4; ++i) {
    const std::vector<std::size_t> idx{i};
    EXPECT_EQ(tt_eval(tt, idx), c(0, i, 0));
  }
}

TEST(TensorTrain, EvalMatchesDenseOracle) {
  const auto tt = random_tt({3, 3, 3, 3}, 2, 7);
  const auto dense = oracle::dense_tt(tt);
  const auto lib = tt_to_dense(tt);
  oracle::for_each_index(tt.modes(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    EXPECT_NEAR(tt_eval(tt, idx), dense[flat], 1e-12 * (1.0 + std::abs(dense[flat])));
    EXPECT_NEAR(lib[flat], dense[flat], 1e-12 * (1.0 + std::abs(dense[flat])));
  });
}

TEST(TensorTrain, IndexOutOfRangeIsInputError) {
  const auto tt = TensorTrain::ones(std::vector<std::size_t>{2, 2});
  const std::vector<std::size_t> bad{0, 2};
  EXPECT_THROW(tt_eval(tt, bad), InputError);
  const std::vector<std::size_t> short_idx{0};
  EXPECT_THROW(tt_eval(tt, short_idx), InputError);
}

TEST(TensorTrain, MismatchedCoresRejected) {
  std::vector<Core3> cores{Core3(1, 2, 2), Core3(3, 2, 1)};
  EXPECT_THROW(TensorTrain{cores}, InputError);
}

TEST(TensorTrain, ZeroTrainIsZero) {
  const auto tt = TensorTrain::zeros(std::vector<std::size_t>{2, 3, 2});
  for (double v : tt_to_dense(tt)) EXPECT_EQ(v, 0.0);
}

TEST(TensorTrain, TwoCoresIsMatrixProduct) {
  const auto tt = random_tt({3, 4}, 2, 11);
  Eigen::MatrixXd A(3, 2), B(2, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a < 2; ++a) A(i, a) = tt.core(0)(0, i, a);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t j = 0; j < 4; ++j) B(a, j) = tt.core(1)(a, j, 0);
  const Eigen::MatrixXd C = A * B;
  const auto dense = tt_to_dense(tt);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(dense[i * 4 + j], C(i, j), 1e-14);
}

TEST(TensorTrain, DenseCapIsResourceError) {
  const auto tt = TensorTrain::ones(std::vector<std::size_t>{10, 10, 10, 10});
  EXPECT_THROW(tt_to_dense(tt, 1000), ResourceError);
  EXPECT_NO_THROW(tt_to_dense(tt, 10000));
}

TEST(TensorTrain, FromDenseRoundTrip) {
  auto rng = stream_rng(3, 0);
  std::normal_distribution<double> n01;
  const std::vector<std::size_t> modes{3, 4, 2, 3};
  std::vector<double> dense(oracle::product(modes));
  for (auto& v : dense) v = n01(rng);
  const auto tt = tt_from_dense(dense, modes);
  expect_shape_invariants(tt);
  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(tt), dense), 1e-12);
}

TEST(TensorTrain, InnerProducts) {
  const std::vector<std::size_t> modes{2, 2, 2};
  const auto ones = TensorTrain::ones(modes);
  EXPECT_DOUBLE_EQ(tt_inner(ones, ones), 8.0);
  EXPECT_EQ(tt_inner(ones, TensorTrain::zeros(modes)), 0.0);

  const auto a = random_tt({3, 2, 4, 3}, 3, 21), b = random_tt({3, 2, 4, 3}, 2, 22);
  const auto da = oracle::dense_tt(a), db = oracle::dense_tt(b);
  double dot = 0.0;
  for (std::size_t i = 0; i < da.size(); ++i) dot += da[i] * db[i];
  EXPECT_NEAR(tt_inner(a, b), dot, 1e-12 * std::abs(dot));
  EXPECT_NEAR(tt_norm(a), oracle::frob(da), 1e-12 * oracle::frob(da));
}

TEST(TensorTrain, InnerShapeMismatch) {
  const auto a = TensorTrain::ones(std::vector<std::size_t>{2, 3});
  const auto b = TensorTrain::ones(std::vector<std::size_t>{2, 2});
  EXPECT_THROW(tt_inner(a, b), InputError);
}

TEST(TensorTrain, InnerSymmetricOverRandomPairs) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 2 + s % 3;
    std::vector<std::size_t> modes(d);
    for (std::size_t k = 0; k < d; ++k) modes[k] = 2 + (s + k) % 3;
    const auto a = random_tt(modes, 1 + s % 3, 1000 + s), b = random_tt(modes, 1 + (s + 1) % 4, 2000 + s);
    const double ab = tt_inner(a, b), ba = tt_inner(b, a);
    EXPECT_NEAR(ab, ba, 1e-13 * std::max(1.0, std::abs(ab)));
  }
}

TEST(Mpo, IdentityQuadraticFormIsInner) {
  const std::vector<std::size_t> modes{3, 2, 4};
  const auto x = random_tt(modes, 2, 5), y = random_tt(modes, 3, 6);
  EXPECT_NEAR(mpo_quadratic_form(Mpo::identity(modes), x, y), tt_inner(x, y), 1e-12);
  EXPECT_EQ(mpo_quadratic_form(Mpo::identity(modes), TensorTrain::zeros(modes), y), 0.0);
}

TEST(Mpo, QuadraticFormMatchesDense) {
  const std::vector<std::size_t> modes{3, 3, 3};
  auto rng = stream_rng(9, 0);
  const std::vector<std::size_t> bonds{2, 2};
  const auto A = Mpo::random(modes, modes, bonds, rng);
  const auto x = random_tt({3, 3, 3}, 2, 31), y = random_tt({3, 3, 3}, 2, 32);
  const Eigen::MatrixXd D = oracle::dense_mpo(A);
  const auto dx = oracle::dense_tt(x), dy = oracle::dense_tt(y);
  const double ref = Eigen::Map<const Eigen::VectorXd>(dx.data(), 27).dot(D * Eigen::Map<const Eigen::VectorXd>(dy.data(), 27));
  EXPECT_NEAR(mpo_quadratic_form(A, x, y), ref, 1e-12 * std::abs(ref));
  EXPECT_LT((mpo_to_dense(A) - D).norm(), 1e-12 * D.norm());
  EXPECT_LT((mpo_to_dense(mpo_transpose(A)) - D.transpose()).norm(), 1e-12 * D.norm());
}

TEST(Mpo, SymmetricOperatorGivesSymmetricForm) {
  const std::vector<std::size_t> modes{2, 3, 2};
  auto rng = stream_rng(12, 0);
  const std::vector<std::size_t> bonds{2, 2};
  const auto A = Mpo::random(modes, modes, bonds, rng);
  const auto At = mpo_transpose(A);
  std::vector<Core4> cores;
  // Block sum A + A^T is symmetric.
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& a = A.core(k);
    const auto& b = At.core(k);
    const std::size_t l = k == 0 ? 1 : a.left() + b.left(), r = k == 2 ? 1 : a.right() + b.right();
    Core4 c(l, a.rows(), a.cols(), r);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t p = 0; p < a.left(); ++p)
          for (std::size_t q = 0; q < a.right(); ++q) c(p, i, j, q) = a(p, i, j, q);
        for (std::size_t p = 0; p < b.left(); ++p)
          for (std::size_t q = 0; q < b.right(); ++q)
            c(k == 0 ? 0 : a.left() + p, i, j, k == 2 ? 0 : a.right() + q) = b(p, i, j, q);
      }
    cores.push_back(c);
  }
  const Mpo S(cores);
  const auto x = random_tt({2, 3, 2}, 2, 41), y = random_tt({2, 3, 2}, 2, 42);
  const double xy = mpo_quadratic_form(S, x, y), yx = mpo_quadratic_form(S, y, x);
  EXPECT_NEAR(xy, yx, 1e-12 * std::abs(xy));
}

TEST(Mpo, ShapeMismatch) {
  const std::vector<std::size_t> modes{2, 2};
  const auto x = TensorTrain::ones(std::vector<std::size_t>{2, 3});
  EXPECT_THROW(mpo_quadratic_form(Mpo::identity(modes), x, x), InputError);
}

TEST(TtRound, LosslessAtZeroTolerance) {
  const auto tt = random_tt({3, 4, 3, 2}, 3, 51);
  const auto r = tt_round(tt, 0.0);
  expect_shape_invariants(r);
  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(r), oracle::dense_tt(tt)), 1e-13);
}

TEST(TtRound, SumOfEqualRankOneCollapses) {
  const auto a = random_tt({3, 3, 3, 3}, 1, 61);
  const auto s = tt_scale_add(a, a, 1.0, 1.0);
  EXPECT_EQ(s.max_rank(), 2u);
  const auto r = tt_round(s, 1e-10);
  for (auto v : r.ranks()) EXPECT_EQ(v, 1u);
  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(r), oracle::axpby(2.0, oracle::dense_tt(a), 0.0, oracle::dense_tt(a))),
            1e-10);
}

TEST(TtRound, RankCapErrorMatchesSingularValueTail) {
  // d = 2: the truncation error is exactly the discarded singular-value energy.
  {
    const auto tt = random_tt({6, 5}, 4, 71);
    const auto dense = oracle::dense_tt(tt);
    Eigen::MatrixXd M(6, 5);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 5; ++j) M(i, j) = dense[i * 5 + j];
    const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
    const double tail = std::sqrt(s.tail(s.size() - 2).squaredNorm());
    const auto r = tt_round(tt, 0.0, 2);
    const auto dr = oracle::dense_tt(r);
    EXPECT_NEAR(oracle::frob(oracle::axpby(1.0, dr, -1.0, dense)), tail, 1e-10 * oracle::frob(dense));
  }
  // d = 4: bounded by the largest single-bond tail and the root-sum of all tails.
  {
    const std::vector<std::size_t> modes{3, 4, 4, 3};
    const auto tt = random_tt(modes, 4, 72);
    const auto dense = oracle::dense_tt(tt);
    double sum2 = 0.0, max_tail = 0.0;
    for (std::size_t k = 1; k < 4; ++k) {
      std::size_t rows = 1;
      for (std::size_t i = 0; i < k; ++i) rows *= modes[i];
      const std::size_t cols = dense.size() / rows;
      const Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>> M(dense.data(), rows, cols);
      const Eigen::VectorXd s = Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues();
      const double t2 = s.size() > 2 ? s.tail(s.size() - 2).squaredNorm() : 0.0;
      sum2 += t2;
      max_tail = std::max(max_tail, std::sqrt(t2));
    }
    const auto r = tt_round(tt, 0.0, 2);
    EXPECT_LE(r.max_rank(), 2u);
    const double err = oracle::frob(oracle::axpby(1.0, oracle::dense_tt(r), -1.0, dense));
    EXPECT_GE(err, max_tail * (1.0 - 1e-10));
    EXPECT_LE(err, std::sqrt(sum2) * (1.0 + 1e-10));
  }
}

TEST(TtRound, ToleranceRespectedWhenRankNotBinding) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const std::size_t d = 2 + s % 3;
    std::vector<std::size_t> modes(d, 3);
    const auto tt = random_tt(modes, 3, 300 + s);
    const double eps = 0.05 * double(1 + s % 5);
    const auto r = tt_round(tt, eps);
    const auto dense = oracle::dense_tt(tt);
    const auto ranks_in = tt.ranks(), ranks_out = r.ranks();
    for (std::size_t k = 0; k <= d; ++k) EXPECT_LE(ranks_out[k], ranks_in[k]);
    EXPECT_LE(oracle::rel_diff(oracle::dense_tt(r), dense), eps * (1.0 + 1e-12));
  }
}

TEST(TtScaleAdd, DenseIdentities) {
  const auto a = random_tt({3, 2, 3}, 2, 81), b = random_tt({3, 2, 3}, 3, 82);
  const auto da = oracle::dense_tt(a), db = oracle::dense_tt(b);

  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(tt_scale_add(a, b, 1.5, 0.0)), oracle::axpby(1.5, da, 0.0, db)), 1e-14);
  for (double v : oracle::dense_tt(tt_scale_add(a, a, 1.0, -1.0))) EXPECT_NEAR(v, 0.0, 1e-13);
  const auto c = tt_scale_add(a, b, 2.0, -3.0);
  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(c), oracle::axpby(2.0, da, -3.0, db)), 1e-12);
  const auto ra = a.ranks(), rb = b.ranks(), rc = c.ranks();
  for (std::size_t k = 1; k < 3; ++k) EXPECT_EQ(rc[k], ra[k] + rb[k]);
  EXPECT_THROW(tt_scale_add(a, random_tt({3, 3, 3}, 2, 1), 1.0, 1.0), InputError);
}

TEST(TensorTrain, DenseOracleEquivalenceRandomCases) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::size_t d = 1 + s % 4;
    std::vector<std::size_t> modes(d);
    for (std::size_t k = 0; k < d; ++k) modes[k] = 1 + (s * 7 + k) % 4;
    auto rng = stream_rng(5000 + s, 0);
    std::vector<std::size_t> bonds(d - 1);
    for (auto& r : bonds) r = 1 + rng() % 3;
    const auto a = TensorTrain::random(modes, bonds, rng);
    const auto b = TensorTrain::random(modes, bonds, rng);
    expect_shape_invariants(a);
    const auto da = oracle::dense_tt(a), db = oracle::dense_tt(b);
    ASSERT_LT(oracle::rel_diff(tt_to_dense(a), da), 1e-13);
    double dot = 0.0;
    for (std::size_t i = 0; i < da.size(); ++i) dot += da[i] * db[i];
    ASSERT_NEAR(tt_inner(a, b), dot, 1e-12 * std::max(1.0, oracle::frob(da) * oracle::frob(db)));
    const auto c = tt_scale_add(a, b, 0.5, -2.0);
    expect_shape_invariants(c);
    ASSERT_LT(oracle::rel_diff(oracle::dense_tt(c), oracle::axpby(0.5, da, -2.0, db)), 1e-12);
    const auto r = tt_round(c, 1e-12);
    expect_shape_invariants(r);
    ASSERT_LT(oracle::rel_diff(oracle::dense_tt(r), oracle::dense_tt(c)), 1e-11);
    const auto f = tt_from_dense(da, modes);
    ASSERT_LT(oracle::rel_diff(oracle::dense_tt(f), da), 1e-12);
    const auto A = Mpo::random(modes, modes, bonds, rng);
    const Eigen::MatrixXd D = oracle::dense_mpo(A);
    const Eigen::Map<const Eigen::VectorXd> va(da.data(), Eigen::Index(da.size())), vb(db.data(), Eigen::Index(db.size()));
    const double ref = va.dot(D * vb);
    ASSERT_NEAR(mpo_quadratic_form(A, a, b), ref, 1e-12 * std::max(1.0, D.norm() * va.norm() * vb.norm()));
  }
}

TEST(Canonical, GaugeMovesPreserveTensorAndOrthonormality) {
  auto tt = random_tt({3, 4, 3, 2}, 3, 91);
  const auto before = oracle::dense_tt(tt);
  right_orthogonalize(tt);
  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(tt), before), 1e-13);
  for (std::size_t k = 1; k < tt.dim(); ++k) {
    const auto R = tt.core(k).right_unfolding();
    EXPECT_LT((R * R.transpose() - Eigen::MatrixXd::Identity(R.rows(), R.rows())).norm(), 1e-12);
  }
  move_center_right(tt, 0);
  const auto L = tt.core(0).left_unfolding();
  EXPECT_LT((L.transpose() * L - Eigen::MatrixXd::Identity(L.cols(), L.cols())).norm(), 1e-12);
  move_center_left(tt, 1);
  EXPECT_LT(oracle::rel_diff(oracle::dense_tt(tt), before), 1e-13);
}

TEST(TtIo, RoundTripIsBitExact) {
  const auto tt = random_tt({3, 2, 4}, 2, 101);
  std::stringstream ss;
  write_tt(ss, tt);
  EXPECT_EQ(ss.str().substr(0, 5), "TTv1\n");
  const auto back = read_tt(ss);
  ASSERT_EQ(back.modes(), tt.modes());
  for (std::size_t k = 0; k < 3; ++k) {
    const auto a = tt.core(k).data(), b = back.core(k).data();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
  }
  auto rng = stream_rng(1, 1);
  const std::vector<std::size_t> modes{2, 3}, bonds{2};
  const auto A = Mpo::random(modes, modes, bonds, rng);
  std::stringstream sm;
  write_mpo(sm, A);
  const auto B = read_mpo(sm);
  EXPECT_EQ((mpo_to_dense(A) - mpo_to_dense(B)).norm(), 0.0);
}

TEST(TtIo, MalformedInputRejected) {
  std::stringstream bad("TTv2\n1\n1 2 1\n0 0\n");
  EXPECT_THROW(read_tt(bad), InputError);
  std::stringstream trunc("TTv1\n1\n1 3 1\n0.5 1\n");
  EXPECT_THROW(read_tt(trunc), InputError);
}

TEST(Complexity, InnerProductLinearInDimension) {
  const std::vector<double> ds{8, 16, 32, 64};
  std::vector<double> times;
  for (double d : ds) {
    const std::vector<std::size_t> modes(std::size_t(d), 6);
    const auto a = random_tt(modes, 8, 1), b = random_tt(modes, 8, 2);
    double sink = 0.0;
    times.push_back(oracle::time_median([&] {
      for (int i = 0; i < 200; ++i) sink += tt_inner(a, b);
    }, 7));
    EXPECT_TRUE(std::isfinite(sink));
  }
  EXPECT_TRUE(oracle::linear_scaling(ds, times)) << times[0] << " " << times[1] << " " << times[2] << " " << times[3];
}
