#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "ttc/errors.hpp"
#include "ttc/hitting.hpp"
#include "ttc/kmeans.hpp"
#include "ttc/langevin.hpp"
#include "ttc/monte_carlo.hpp"
#include "ttc/reactive_flow.hpp"
#include "ttc/reference_1d.hpp"
#include "ttc/random.hpp"

using namespace ttc;

namespace {

double V1(double x) { return (x * x - 1.0) * (x * x - 1.0); }
double dV1(double x) { return 4.0 * x * (x * x - 1.0); }

GradientFn dw_grad_1d() {
  return [](std::span<const double> x, std::span<double> g) { g[0] = dV1(x[0]); };
}

// Hard committor of the 1D double well from an independent Simpson quadrature.
double hard_committor(double beta, double x) {
  const auto f = [beta](double s) { return std::exp(beta * V1(s)); };
  return oracle::simpson(f, -1.0, x, 4000) / oracle::simpson(f, -1.0, 1.0, 4000);
}

struct CemeteryCase {
  double beta, rate, width, dt;
};

// Killing rates: Gaussian bumps of height `rate` at -1 (to A) and +1 (to B).
ScalarFn bump(double c, double rate, double width) {
  return [=](std::span<const double> x) { return rate * std::exp(-0.5 * (x[0] - c) * (x[0] - c) / (width * width)); };
}

} // namespace

TEST(Reference1D, SymmetricMonotoneAndMatchesQuadrature) {
  const double beta = 5.0;
  const auto fd = solve_dw_reference(beta, 20001);
  EXPECT_NEAR(fd(0.0), 0.5, 1e-10);
  EXPECT_NEAR(fd(-1.0), 0.0, 1e-15);
  EXPECT_NEAR(fd(1.0), 1.0, 1e-15);
  for (std::size_t i = 1; i < fd.values.size(); ++i) EXPECT_GE(fd.values[i], fd.values[i - 1]);
  for (double x : {-0.9, -0.5, -0.1, 0.3, 0.7}) EXPECT_NEAR(fd(x), hard_committor(beta, x), 1e-6);
}

TEST(Reference1D, FiniteDifferencesAgreeWithClosedForm) {
  const auto fd = solve_dw_reference(5.0, 100001);
  const auto cf = dw_reference_closed_form(5.0, 100001);
  double err = 0.0;
  for (std::size_t i = 0; i < fd.values.size(); ++i) err = std::max(err, std::abs(fd.values[i] - cf.values[i]));
  EXPECT_LT(err, 1e-8);
}

TEST(Reference1D, TridiagonalSolver) {
  const std::vector<double> sub{0.0, -1.0, -1.0}, diag{2.0, 2.0, 2.0}, sup{-1.0, -1.0, 0.0}, rhs{1.0, 0.0, 1.0};
  const auto x = solve_tridiagonal(sub, diag, sup, rhs);
  for (double v : x) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(SoftCommittor1D, LargePenaltyApproachesHardCommittor) {
  const double beta = 3.0, s = 0.01, rho = 1e5;
  const auto q = soft_committor_1d_fd(V1, beta, [s](double x) { return gaussian_pdf(x, -1.0, s); },
                                      [s](double x) { return gaussian_pdf(x, 1.0, s); }, rho, -2.0, 2.0, 40001);
  for (double v : q.values) {
    EXPECT_GE(v, -1e-9);
    EXPECT_LE(v, 1.0 + 1e-9);
  }
  EXPECT_NEAR(q(0.0), 0.5, 1e-10);
  for (double x = -0.9; x <= 0.9; x += 0.1) EXPECT_NEAR(q(x), hard_committor(beta, x), 1e-2) << x;
}

TEST(MonteCarlo, ExactReferenceGivesZeroAndScaledGivesScale) {
  std::vector<std::function<double(double)>> dens{[](double x) { return std::exp(-2.0 * V1(x)); },
                                                  [](double x) { return std::exp(-0.6 * x * x); }};
  const ProductSampler sampler(dens, {{-1.0, 1.0}, {-4.0, 4.0}});
  const auto ref = [](double x) { return 0.5 * (1.0 + std::tanh(2.0 * x)); };
  const auto exact = relative_error_mc([&](std::span<const double> x) { return ref(x[0]); }, ref, sampler, 20000, 1);
  EXPECT_EQ(exact.value, 0.0);
  const auto scaled =
      relative_error_mc([&](std::span<const double> x) { return 1.03 * ref(x[0]); }, ref, sampler, 20000, 1);
  EXPECT_NEAR(scaled.value, 0.03, 1e-12);
}

TEST(MonteCarlo, GaussianSamplerVariance) {
  const double s = 0.7;
  std::vector<std::function<double(double)>> dens{[s](double x) { return std::exp(-0.5 * x * x / (s * s)); }};
  const ProductSampler sampler(dens, {{-8.0 * s, 8.0 * s}});
  auto rng = stream_rng(4, 0);
  const std::size_t n = 200000;
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x;
    sampler.sample(rng, std::span<double>(&x, 1));
    m += x / double(n);
    m2 += x * x / double(n);
  }
  // Var(x^2) = 2 s^4 for a Gaussian.
  EXPECT_NEAR(m, 0.0, 4.0 * s / std::sqrt(double(n)));
  EXPECT_NEAR(m2, s * s, 4.0 * std::sqrt(2.0) * s * s / std::sqrt(double(n)));
}

TEST(MonteCarlo, DoubleWellSamplesAreSymmetric) {
  std::vector<std::function<double(double)>> dens{[](double x) { return std::exp(-5.0 * V1(x)); }};
  const ProductSampler sampler(dens, {{-2.5, 2.5}});
  auto rng = stream_rng(5, 0);
  const std::size_t n = 100000;
  std::size_t right = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x;
    sampler.sample(rng, std::span<double>(&x, 1));
    if (x > 0.0) ++right;
  }
  EXPECT_NEAR(double(right) / double(n), 0.5, 4.0 * 0.5 / std::sqrt(double(n)));
}

TEST(Cemetery, NoKillingTowardBGivesZero) {
  const std::vector<double> x0{0.0};
  const auto zero = [](std::span<const double>) { return 0.0; };
  const auto est = cemetery_estimate(x0, bump(-1.0, 20.0, 0.2), zero, dw_grad_1d(), 1.0, 1e-3, 2000, 1'000'000, 3);
  EXPECT_EQ(est.hits_B, 0u);
  EXPECT_EQ(est.probability, 0.0);
}

TEST(Cemetery, SymmetricRatesGiveOneHalf) {
  const std::vector<double> x0{0.0};
  const auto est =
      cemetery_estimate(x0, bump(-1.0, 20.0, 0.2), bump(1.0, 20.0, 0.2), dw_grad_1d(), 1.0, 1e-3, 10000, 1'000'000, 4);
  EXPECT_NEAR(est.probability, 0.5, 3.0 * est.std_error);
  EXPECT_EQ(est.censored, 0u);
}

class CemeteryVsFd : public ::testing::TestWithParam<CemeteryCase> {};

TEST_P(CemeteryVsFd, WithinThreeStandardErrors) {
  const auto c = GetParam();
  const auto f = bump(-1.0, c.rate, c.width), g = bump(1.0, c.rate, c.width);
  const double beta = c.beta;
  // -(p q')' + beta p (f + g) q = beta p g with p = exp(-beta V).
  const auto fd = soft_committor_1d_fd(
      V1, beta,
      [&](double x) { return beta * std::exp(-beta * V1(x)) * f(std::span<const double>(&x, 1)); },
      [&](double x) { return beta * std::exp(-beta * V1(x)) * g(std::span<const double>(&x, 1)); }, 1.0, -3.0, 3.0,
      20001);
  std::uint64_t seed = 10;
  for (double x : {-0.5, 0.0, 0.5}) {
    const std::vector<double> x0{x};
    const auto est = cemetery_estimate(x0, f, g, dw_grad_1d(), beta, c.dt, 10000, 10'000'000, seed++);
    EXPECT_NEAR(est.probability, fd(x), 3.0 * est.std_error) << "x0=" << x;
  }
}

INSTANTIATE_TEST_SUITE_P(TwoSettings, CemeteryVsFd,
                         ::testing::Values(CemeteryCase{1.0, 20.0, 0.2, 1e-3}, CemeteryCase{2.0, 5.0, 0.3, 1e-3}));

TEST(Isosurface, ExactCommittorPassesHittingTest) {
  const double beta = 1.0;
  const auto ref = dw_reference_closed_form(beta, 20001);
  IsosurfaceConfig cfg;
  cfg.eps = 0.01;
  cfg.N_s = 100;
  cfg.N_t = 100;
  cfg.dt = 1e-3;
  cfg.burn_in = 1000;
  cfg.stride = 50;
  cfg.seed = 7;
  const std::vector<double> x0{-1.0};
  const auto q = [&](std::span<const double> x) { return std::abs(x[0]) < 1.0 ? ref(x[0]) : std::nan(""); };
  const auto st = isosurface_hitting_test(q, dw_grad_1d(), beta, x0, [](std::span<const double> x) { return x[0] <= -1.0; },
                                          [](std::span<const double> x) { return x[0] >= 1.0; }, cfg);
  EXPECT_EQ(st.points.size(), 100u);
  EXPECT_NEAR(st.mean_tolerance, 0.015, 1e-15);
  EXPECT_NEAR(st.grand_mean, 0.5, 0.015);
  EXPECT_TRUE(st.mean_pass);
  EXPECT_EQ(st.censored, 0u);
  EXPECT_NEAR(st.theoretical_std, 0.05, 1e-15);
}

TEST(Isosurface, WideWindowAdmitsEveryCandidate) {
  IsosurfaceConfig cfg;
  cfg.eps = 0.5;
  cfg.N_s = 20;
  cfg.N_t = 2;
  cfg.dt = 1e-3;
  cfg.burn_in = 10;
  cfg.stride = 5;
  const std::vector<double> x0{0.0};
  const auto q = [](std::span<const double> x) { return 0.5 * (1.0 + std::tanh(x[0])); };
  const auto st = isosurface_hitting_test(q, dw_grad_1d(), 1.0, x0, [](std::span<const double> x) { return x[0] <= -1.0; },
                                          [](std::span<const double> x) { return x[0] >= 1.0; }, cfg);
  EXPECT_EQ(st.candidates, 20u);
  EXPECT_EQ(st.points.size(), 20u);
}

TEST(NormalQuantile, KnownValuesAndSymmetry) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-12);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-9);
  EXPECT_NEAR(normal_quantile(0.8413447460685429), 1.0, 1e-9);
  for (double p : {1e-6, 0.01, 0.2, 0.4}) {
    EXPECT_NEAR(normal_quantile(p), -normal_quantile(1.0 - p), 1e-9);
    EXPECT_NEAR(0.5 * std::erfc(-normal_quantile(p) / std::sqrt(2.0)), p, 1e-9 * std::max(1.0, 1.0 / p) * p);
  }
}

TEST(KMeans, SeparatesTwoBlobs) {
  auto rng = stream_rng(12, 0);
  std::normal_distribution<double> N(0.0, 0.1);
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 200; ++i) xs.push_back({2.0 + N(rng), 1.0 + N(rng)});
  for (int i = 0; i < 100; ++i) xs.push_back({-2.0 + N(rng), -1.0 + N(rng)});
  const auto r = kmeans2(xs);
  for (int i = 1; i < 200; ++i) EXPECT_EQ(r.assignment[i], r.assignment[0]);
  for (int i = 200; i < 300; ++i) EXPECT_NE(r.assignment[i], r.assignment[0]);
  const auto& big = r.assignment[0] == 0 ? r.centroid1 : r.centroid2;
  EXPECT_NEAR(big[0], 2.0, 0.05);
  EXPECT_NEAR(big[1], 1.0, 0.05);
  EXPECT_NEAR(line_coordinate(r.centroid1, r.centroid1, r.centroid2), 1.0, 1e-14);
  EXPECT_NEAR(line_coordinate(r.centroid2, r.centroid1, r.centroid2), 0.0, 1e-14);
}

TEST(KMeans, MirrorSymmetricDataGivesMirroredCentroids) {
  auto rng = stream_rng(13, 0);
  std::normal_distribution<double> N(0.0, 0.2);
  std::vector<std::vector<double>> xs;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x{1.0 + N(rng), N(rng), N(rng)};
    xs.push_back(x);
    xs.push_back({-x[0], -x[1], -x[2]});
  }
  const auto r = kmeans2(xs);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(r.centroid1[k], -r.centroid2[k], 1e-12);
  double mid = 0.0;
  for (double t : r.theta) mid += t / double(r.theta.size());
  EXPECT_NEAR(mid, 0.5, 1e-12);
}

TEST(ReactiveFlow, MonotonePathEndsAtTarget) {
  const auto q = [](std::span<const double> x, Eigen::VectorXd& g) {
    const double t = std::tanh(x[0] + 0.3 * x[1]);
    g.resize(2);
    g(0) = 0.5 * (1.0 - t * t);
    g(1) = 0.3 * g(0);
    return 0.5 * (1.0 + t);
  };
  const auto p = [](std::span<const double> x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); };
  const std::vector<double> x0{-1.0, 0.2};
  Eigen::VectorXd g;
  const double q0 = q(x0, g);
  ASSERT_LT(q0, 0.2);
  const auto path = reactive_flow(q, p, 2.0, x0, 0.9, 1e-3);
  for (std::size_t i = 1; i < path.size(); ++i) {
    EXPECT_GT(path[i].q, path[i - 1].q);
    EXPECT_GT(path[i].t, path[i - 1].t);
    EXPECT_LE(path[i].q - path[i - 1].q, 1e-3 + 1e-9);
  }
  EXPECT_NEAR(path.back().q, 0.9, 1e-3);
  // The flow follows grad q, so the path stays on the line x + s (1, 0.3).
  for (const auto& pt : path) EXPECT_NEAR(pt.x[1] - 0.2, 0.3 * (pt.x[0] + 1.0), 1e-6);
}

TEST(ReactiveFlow, RejectsBadParameters) {
  const auto q = [](std::span<const double> x, Eigen::VectorXd& g) {
    g = Eigen::VectorXd::Ones(1);
    return x[0];
  };
  const auto p = [](std::span<const double>) { return 1.0; };
  const std::vector<double> x0{0.0};
  EXPECT_THROW(reactive_flow(q, p, 1.0, x0, 0.9, 0.0), InputError);
}
