#include "ttc/density.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ttc/errors.hpp"
#include "ttc/function_tt.hpp"

namespace ttc {

double gaussian_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * std::numbers::pi) * sigma);
}

double DensityModel::log_density(std::span<const double> x) const {
  return log_prefactor - beta * potential->value(x);
}

double DensityModel::tt_value(std::span<const double> x) const { return eval_function_tt(tt, bases, x); }

std::string DensityModel::descriptor() const {
  std::ostringstream os;
  os.precision(17);
  os << potential->descriptor() << "beta=" << beta << "\nlog_prefactor=" << log_prefactor << '\n'
     << extra_descriptor;
  return os.str();
}

DensityModel product_density(std::shared_ptr<const Potential> potential, double beta,
                             const std::vector<Quadrature>& quads) {
  if (!potential) throw InputError("product_density: potential is null");
  if (!potential->separable()) throw UnsupportedError("product_density: potential is not separable");
  if (quads.size() != potential->dim()) throw InputError("product_density: need one quadrature per dimension");
  if (!(beta > 0.0)) throw InputError("product_density: beta must be positive");
  DensityModel m;
  m.potential = potential;
  m.beta = beta;
  std::vector<Eigen::VectorXd> ones;
  for (std::size_t k = 0; k < quads.size(); ++k) {
    const Potential* pot = potential.get();
    m.bases.push_back(table_basis([pot, k, beta](double s) { return std::exp(-beta * pot->term(k, s)); },
                                  [pot, k, beta](double s) {
                                    return -beta * pot->term_deriv(k, s) * std::exp(-beta * pot->term(k, s));
                                  },
                                  quads[k]));
    ones.push_back(Eigen::VectorXd::Ones(1));
  }
  m.tt = TensorTrain::rank_one(ones);
  return m;
}

double KernelEigensystem::kernel(double x, double y) const {
  const double wx = 1.0 - x * x, wy = 1.0 - y * y;
  const double e = wx * wx / (8.0 * lambda) + lambda * (x - y) * (x - y) / (2.0 * h * h) + wy * wy / (8.0 * lambda);
  return std::exp(-beta * e);
}

Eigen::VectorXd KernelEigensystem::v(double x) const {
  Eigen::VectorXd kx(quad.size());
  for (std::size_t q = 0; q < quad.size(); ++q) kx(q) = quad.weights[q] * kernel(x, quad.nodes[q]);
  Eigen::VectorXd out = u.transpose() * kx;
  for (std::size_t j = 0; j < J; ++j) out(j) /= std::sqrt(eigenvalues(j));
  return out;
}

Eigen::MatrixXd KernelEigensystem::v_nodes() const {
  Eigen::MatrixXd out = u;
  for (std::size_t j = 0; j < J; ++j) out.col(j) *= std::sqrt(eigenvalues(j));
  return out;
}

KernelEigensystem gl_kernel_eigensystem(double lambda, double beta, double h, double R,
                                        const Quadrature& quad, std::size_t J) {
  if (!(lambda > 0.0) || !(beta > 0.0) || !(h > 0.0) || !(R > 0.0))
    throw InputError("gl_kernel_eigensystem: parameters must be positive");
  const std::size_t nq = quad.size();
  if (J < 1 || J > nq) throw InputError("gl_kernel_eigensystem: J must lie in [1, quadrature order]");
  if (std::abs(quad.lo + R) > 1e-12 * R || std::abs(quad.hi - R) > 1e-12 * R)
    throw InputError("gl_kernel_eigensystem: quadrature must live on [-R, R]");
  KernelEigensystem eig;
  eig.lambda = lambda;
  eig.beta = beta;
  eig.h = h;
  eig.R = R;
  eig.quad = quad;
  eig.J = J;
  eig.log_c = -beta / (4.0 * lambda);

  Eigen::VectorXd sw(nq);
  for (std::size_t q = 0; q < nq; ++q) sw(q) = std::sqrt(quad.weights[q]);
  Eigen::MatrixXd a(nq, nq);
  for (std::size_t p = 0; p < nq; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      const double v = sw(p) * eig.kernel(quad.nodes[p], quad.nodes[q]) * sw(q);
      a(p, q) = v;
      a(q, p) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("gl_kernel_eigensystem: eigensolver failed");
  Eigen::VectorXd lam = es.eigenvalues().reverse();
  Eigen::MatrixXd vec = es.eigenvectors().rowwise().reverse();
  const double top = lam(0);
  if (!(top > 0.0)) throw DegeneracyError("gl_kernel_eigensystem: kernel matrix has no positive eigenvalue");
  for (Eigen::Index j = 0; j < lam.size(); ++j)
    if (lam(j) < 1e-14 * top) lam(j) = 0.0;
  if (!(lam(J - 1) > 0.0))
    throw DegeneracyError("gl_kernel_eigensystem: J = " + std::to_string(J) +
                          " exceeds the numerically positive spectrum");
  eig.eigenvalues = lam;
  eig.u.resize(nq, J);
  for (std::size_t j = 0; j < J; ++j) {
    Eigen::Index imax = 0;
    vec.col(j).cwiseAbs().maxCoeff(&imax);
    const double sign = vec(imax, j) < 0.0 ? -1.0 : 1.0;
    eig.u.col(j) = sign * vec.col(j).cwiseQuotient(sw);
  }
  eig.v0 = eig.v(0.0);
  return eig;
}

Eigen::VectorXd chebyshev_coefficients(const std::function<double(double)>& f, double R, std::size_t N,
                                       std::size_t M) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(N + 1);
  for (std::size_t m = 0; m < M; ++m) {
    const double theta = std::numbers::pi * (double(m) + 0.5) / double(M);
    const double fv = f(R * std::cos(theta));
    for (std::size_t n = 0; n <= N; ++n) c(n) += fv * std::cos(double(n) * theta);
  }
  c *= 2.0 / double(M);
  c(0) *= 0.5;
  return c;
}

DensityModel gl_density(const KernelEigensystem& eig, std::size_t d, std::size_t n_cheb, const Quadrature& quad) {
  if (d < 1) throw InputError("gl_density: d must be at least 1");
  if (n_cheb + 1 > quad.size()) throw InputError("gl_density: N_cheb + 1 exceeds the quadrature order");
  const std::size_t J = eig.J, K = n_cheb + 1;
  const std::size_t M = std::max<std::size_t>(4 * K, 128);

  // v_j at the Chebyshev-Gauss points, then coefficients of every product v_j v_l.
  Eigen::MatrixXd vt(M, J);
  std::vector<double> theta(M);
  for (std::size_t m = 0; m < M; ++m) {
    theta[m] = std::numbers::pi * (double(m) + 0.5) / double(M);
    vt.row(m) = eig.v(eig.R * std::cos(theta[m])).transpose();
  }
  Eigen::MatrixXd tn(K, M);
  for (std::size_t n = 0; n < K; ++n)
    for (std::size_t m = 0; m < M; ++m) tn(n, m) = (n == 0 ? 1.0 : 2.0) / double(M) * std::cos(double(n) * theta[m]);
  // A(j, n, l) = coefficient n of v_j v_l.
  Core3 a(J, K, J);
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t l = j; l < J; ++l) {
      Eigen::VectorXd prod = vt.col(j).cwiseProduct(vt.col(l));
      Eigen::VectorXd c = tn * prod;
      for (std::size_t n = 0; n < K; ++n) {
        a(j, n, l) = c(n);
        a(l, n, j) = c(n);
      }
    }
  const double cfac = std::exp(eig.log_c);
  std::vector<Core3> cores;
  if (d == 1) {
    Core3 c(1, K, 1);
    for (std::size_t n = 0; n < K; ++n) {
      double s = 0.0;
      for (std::size_t j = 0; j < J; ++j)
        for (std::size_t l = 0; l < J; ++l) s += eig.v0(j) * a(j, n, l) * eig.v0(l);
      c(0, n, 0) = cfac * s;
    }
    cores.push_back(std::move(c));
  } else {
    Core3 first(1, K, J), last(J, K, 1);
    for (std::size_t n = 0; n < K; ++n)
      for (std::size_t l = 0; l < J; ++l) {
        double s = 0.0, t = 0.0;
        for (std::size_t j = 0; j < J; ++j) {
          s += eig.v0(j) * a(j, n, l);
          t += a(l, n, j) * eig.v0(j);
        }
        first(0, n, l) = cfac * s;
        last(l, n, 0) = t;
      }
    cores.push_back(std::move(first));
    for (std::size_t k = 1; k + 1 < d; ++k) cores.push_back(a);
    cores.push_back(std::move(last));
  }
  DensityModel m;
  m.tt = TensorTrain(std::move(cores));
  auto basis = chebyshev_basis(n_cheb, eig.R, quad);
  m.bases.assign(d, basis);
  m.potential = std::make_shared<GinzburgLandauPotential>(d, eig.lambda, eig.h);
  m.beta = eig.beta;
  m.log_prefactor = eig.log_c;
  std::ostringstream os;
  os.precision(17);
  os << "R=" << eig.R << "\nJ=" << J << "\nN_cheb=" << n_cheb << '\n';
  m.extra_descriptor = os.str();
  return m;
}

double BoundaryMeasure::value(std::span<const double> x) const {
  if (x.size() != dim()) throw InputError("BoundaryMeasure::value: dimension mismatch");
  double v = 1.0;
  if (geometry == MeasureGeometry::sphere) {
    for (std::size_t k = 0; k < x.size(); ++k) v *= gaussian_pdf(x[k], center[k], sigma);
    return v;
  }
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k == axis) v *= gaussian_pdf(x[k], offset, sigma);
    else if (k < off_axis.size() && off_axis[k]) v *= off_axis[k](x[k]);
  }
  return v;
}

double BoundaryMeasure::tt_value(std::span<const double> x) const { return eval_function_tt(tt, bases, x); }

namespace {

TensorTrain unit_rank_one(std::size_t d) {
  return TensorTrain::rank_one(std::vector<Eigen::VectorXd>(d, Eigen::VectorXd::Ones(1)));
}

} // namespace

BoundaryMeasure sphere_boundary_measure(std::span<const double> center, double radius,
                                        const std::vector<Quadrature>& quads) {
  const std::size_t d = center.size();
  if (d < 1 || quads.size() != d) throw InputError("sphere_boundary_measure: need one quadrature per dimension");
  if (!(radius > 0.0)) throw InputError("sphere_boundary_measure: radius must be positive");
  BoundaryMeasure m;
  m.geometry = MeasureGeometry::sphere;
  m.center.assign(center.begin(), center.end());
  m.radius = radius;
  m.sigma = radius / std::sqrt(double(d));
  for (std::size_t k = 0; k < d; ++k) {
    if (center[k] < quads[k].lo || center[k] > quads[k].hi)
      throw DomainError("sphere_boundary_measure: center outside the domain in dimension " + std::to_string(k));
    const double c = center[k], s = m.sigma;
    m.bases.push_back(table_basis([c, s](double x) { return gaussian_pdf(x, c, s); },
                                  [c, s](double x) { return -(x - c) / (s * s) * gaussian_pdf(x, c, s); },
                                  quads[k]));
  }
  m.tt = unit_rank_one(d);
  return m;
}

BoundaryMeasure hyperplane_boundary_measure(std::size_t axis, double offset, double sigma,
                                            const std::vector<Quadrature>& quads,
                                            std::vector<std::function<double(double)>> off_axis) {
  const std::size_t d = quads.size();
  if (axis >= d) throw InputError("hyperplane_boundary_measure: axis out of range");
  if (!(sigma > 0.0)) throw InputError("hyperplane_boundary_measure: sigma must be positive");
  if (!off_axis.empty() && off_axis.size() != d)
    throw InputError("hyperplane_boundary_measure: off-axis factor list must have d entries");
  BoundaryMeasure m;
  m.geometry = MeasureGeometry::hyperplane;
  m.axis = axis;
  m.offset = offset;
  m.sigma = sigma;
  m.off_axis = std::move(off_axis);
  for (std::size_t k = 0; k < d; ++k) {
    if (k == axis) {
      m.bases.push_back(table_basis([offset, sigma](double x) { return gaussian_pdf(x, offset, sigma); },
                                    [offset, sigma](double x) {
                                      return -(x - offset) / (sigma * sigma) * gaussian_pdf(x, offset, sigma);
                                    },
                                    quads[k]));
    } else if (k < m.off_axis.size() && m.off_axis[k]) {
      m.bases.push_back(table_basis(m.off_axis[k], {}, quads[k]));
    } else {
      m.bases.push_back(table_basis([](double) { return 1.0; }, [](double) { return 0.0; }, quads[k]));
    }
  }
  m.tt = unit_rank_one(d);
  return m;
}

} // namespace ttc
