#include "ttc/oracle.hpp"

#include <cmath>
#include <random>

#include "ttc/assembly.hpp"
#include "ttc/errors.hpp"
#include "ttc/quadrature.hpp"
#include "ttc/random.hpp"

namespace ttc {

namespace {

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double n = b.norm();
  return n > 0.0 ? (a - b).norm() / n : (a - b).norm();
}

} // namespace

DenseOracleReport dense_oracle_check(std::size_t d, std::size_t L, std::size_t K, std::size_t rank,
                                     std::uint64_t seed, std::size_t cap) {
  if (d == 0 || d > 3) throw InputError("oracle.d: dense oracle supports 1 <= d <= 3");
  if (L == 0 || K == 0) throw InputError("oracle: L and K must be positive");
  const double gamma = 2.0;
  const std::size_t nq = 2 * (L + K) + 4;
  double entries = 1.0, grid = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    entries *= double(L) * double(L);
    grid *= double(nq);
  }
  if (entries > double(cap) || grid * entries > 1e3 * double(cap))
    throw ResourceError("oracle: dense problem exceeds the configured cap");

  const Quadrature quad = gauss_legendre(nq, -gamma, gamma);
  std::vector<Quadrature> quads(d, quad);
  auto rng = stream_rng(seed, 0);

  DensityModel density;
  density.beta = 1.0;
  std::vector<std::size_t> kmodes(d, K);
  std::vector<std::size_t> bonds(d > 0 ? d - 1 : 0, rank);
  density.tt = TensorTrain::random(kmodes, bonds, rng);
  for (std::size_t k = 0; k < d; ++k) density.bases.push_back(chebyshev_basis(K - 1, gamma, quad));

  std::vector<double> ca(d, -0.5), cb(d, 0.5);
  const double radius = 0.8;
  const BoundaryMeasure pA = sphere_boundary_measure(ca, radius, quads);
  const BoundaryMeasure pB = sphere_boundary_measure(cb, radius, quads);

  std::vector<BasisSet> phi;
  for (std::size_t k = 0; k < d; ++k) phi.push_back(fourier_basis(L, gamma, quad));
  const double rho = 3.0;
  const GalerkinProblem problem = assemble_problem(density, pA, pB, phi, rho, 1);

  const std::size_t N = static_cast<std::size_t>(std::llround(std::pow(double(L), double(d))));
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(N, N), HA = E, HB = E;
  Eigen::VectorXd hB = Eigen::VectorXd::Zero(N);
  double mass_B = 0.0;

  std::vector<std::size_t> g(d, 0);
  std::vector<double> x(d);
  std::vector<Eigen::VectorXd> val(d), der(d);
  Eigen::VectorXd f(N);
  std::vector<Eigen::VectorXd> grad(d, Eigen::VectorXd(N));
  for (std::size_t flat = 0; flat < static_cast<std::size_t>(grid); ++flat) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = quad.nodes[g[k]];
      w *= quad.weights[g[k]];
      val[k] = phi[k].eval(x[k]);
      der[k] = phi[k].eval_deriv(x[k]);
    }
    const double p = density.tt_value(x);
    const double a = pA.value(x);
    const double b = pB.value(x);
    for (std::size_t I = 0; I < N; ++I) {
      std::size_t rem = I;
      std::vector<std::size_t> idx(d);
      for (std::size_t k = d; k-- > 0;) {
        idx[k] = rem % L;
        rem /= L;
      }
      double prod = 1.0;
      for (std::size_t k = 0; k < d; ++k) prod *= val[k](idx[k]);
      f(I) = prod;
      for (std::size_t k = 0; k < d; ++k) {
        double gk = der[k](idx[k]);
        for (std::size_t m = 0; m < d; ++m)
          if (m != k) gk *= val[m](idx[m]);
        grad[k](I) = gk;
      }
    }
    for (std::size_t k = 0; k < d; ++k) E.noalias() += (w * p) * grad[k] * grad[k].transpose();
    HA.noalias() += (w * a) * f * f.transpose();
    HB.noalias() += (w * b) * f * f.transpose();
    hB += (w * b) * f;
    mass_B += w * b;
    for (std::size_t k = d; k-- > 0;) {
      if (++g[k] < nq) break;
      g[k] = 0;
    }
  }

  DenseOracleReport r;
  r.grid_points = static_cast<std::size_t>(grid);
  r.energy = rel_diff(mpo_to_dense(problem.energy, cap), E);
  r.HA = rel_diff(mpo_to_dense(problem.HA, cap), HA);
  r.HB = rel_diff(mpo_to_dense(problem.HB, cap), HB);
  const std::vector<double> hb = tt_to_dense(problem.hB, cap);
  r.hB = rel_diff(Eigen::Map<const Eigen::VectorXd>(hb.data(), Eigen::Index(N)), hB);

  std::vector<std::size_t> lmodes(d, L);
  const TensorTrain Q = TensorTrain::random(lmodes, std::vector<std::size_t>(d - 1, 2), rng);
  const std::vector<double> qd = tt_to_dense(Q, cap);
  const Eigen::Map<const Eigen::VectorXd> q(qd.data(), Eigen::Index(N));
  const double dense_obj = q.dot((E + rho * (HA + HB)) * q) - 2.0 * rho * hB.dot(q) + rho * mass_B;
  r.objective = std::abs(evaluate_objective(problem, Q) - dense_obj) / std::max(1.0, std::abs(dense_obj));
  return r;
}

SoftCommittor1DResult soft_committor_1d_compare(const SoftCommittor1DCase& c) {
  auto V = std::make_shared<DoubleWellPotential>(1);
  const Quadrature quad = gauss_legendre(c.quadrature_order, c.lo, c.hi);
  const std::vector<Quadrature> quads{quad};
  const DensityModel density = product_density(V, c.beta, quads);
  const BoundaryMeasure pA = hyperplane_boundary_measure(0, -1.0, c.sigma, quads);
  const BoundaryMeasure pB = hyperplane_boundary_measure(0, 1.0, c.sigma, quads);

  std::vector<double> w(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) w[q] = std::exp(-c.beta * V->term(0, quad.nodes[q]));
  const std::vector<BasisSet> phi{density_orthogonal_basis(w, c.basis_size, quad)};
  const GalerkinProblem problem = assemble_problem(density, pA, pB, phi, c.rho, 1);

  SolverConfig sc;
  sc.ranks = {1};
  sc.rho_schedule = {{c.rho, 1}};
  SoftCommittor1DResult r;
  r.als = solve(problem, phi, sc);
  const double beta = c.beta, sigma = c.sigma;
  r.fd = soft_committor_1d_fd([V](double s) { return V->term(0, s); }, beta,
                              [sigma](double s) { return gaussian_pdf(s, -1.0, sigma); },
                              [sigma](double s) { return gaussian_pdf(s, 1.0, sigma); }, c.rho, c.lo, c.hi,
                              c.fd_points);
  double num = 0.0, den = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const double x = quad.nodes[q];
    const double diff = eval_q(r.als, std::span<const double>(&x, 1)) - r.fd(x);
    num += quad.weights[q] * w[q] * diff * diff;
    den += quad.weights[q] * w[q];
  }
  r.l2_error = std::sqrt(num / den);
  return r;
}

} // namespace ttc
