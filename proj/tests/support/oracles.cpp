#include "oracles.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace oracle {

std::size_t product(std::span<const std::size_t> modes) {
  std::size_t n = 1;
  for (auto m : modes) n *= m;
  return n;
}

void for_each_index(std::span<const std::size_t> modes,
                    const std::function<void(std::size_t, const std::vector<std::size_t>&)>& fn) {
  const std::size_t d = modes.size(), n = product(modes);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    fn(flat, idx);
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < modes[k]) break;
      idx[k] = 0;
    }
  }
}

double tt_entry(const ttc::TensorTrain& tt, const std::vector<std::size_t>& idx) {
  std::vector<double> row{1.0};
  for (std::size_t k = 0; k < tt.dim(); ++k) {
    const auto& c = tt.core(k);
    std::vector<double> next(c.right(), 0.0);
    for (std::size_t a = 0; a < c.left(); ++a)
      for (std::size_t b = 0; b < c.right(); ++b) next[b] += row[a] * c(a, idx[k], b);
    row.swap(next);
  }
  return row[0];
}

std::vector<double> dense_tt(const ttc::TensorTrain& tt) {
  const auto modes = tt.modes();
  std::vector<double> out(product(modes));
  for_each_index(modes, [&](std::size_t flat, const std::vector<std::size_t>& idx) { out[flat] = tt_entry(tt, idx); });
  return out;
}

Eigen::MatrixXd dense_mpo(const ttc::Mpo& mpo) {
  const auto rm = mpo.row_modes(), cm = mpo.col_modes();
  Eigen::MatrixXd out(product(rm), product(cm));
  for_each_index(rm, [&](std::size_t I, const std::vector<std::size_t>& i) {
    for_each_index(cm, [&](std::size_t J, const std::vector<std::size_t>& j) {
      std::vector<double> row{1.0};
      for (std::size_t k = 0; k < mpo.dim(); ++k) {
        const auto& c = mpo.core(k);
        std::vector<double> next(c.right(), 0.0);
        for (std::size_t a = 0; a < c.left(); ++a)
          for (std::size_t b = 0; b < c.right(); ++b) next[b] += row[a] * c(a, i[k], j[k], b);
        row.swap(next);
      }
      out(Eigen::Index(I), Eigen::Index(J)) = row[0];
    });
  });
  return out;
}

double frob(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double rel_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  const double n = frob(b);
  return n > 0.0 ? std::sqrt(s) / n : std::sqrt(s);
}

std::vector<double> axpby(double a, std::span<const double> x, double b, std::span<const double> y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
  return out;
}

double time_median(const std::function<void()>& fn, int reps) {
  std::vector<double> t;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

SlopeFit fit_quadratic(const std::vector<double>& x, const std::vector<double>& t) {
  Eigen::MatrixXd A(x.size(), 3);
  Eigen::VectorXd y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    A(Eigen::Index(i), 0) = 1.0;
    A(Eigen::Index(i), 1) = x[i];
    A(Eigen::Index(i), 2) = x[i] * x[i];
    y(Eigen::Index(i)) = t[i];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  return {c(0), c(1), c(2)};
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& t) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]) / double(n);
    my += std::log(t[i]) / double(n);
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(t[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

bool linear_scaling(const std::vector<double>& x, const std::vector<double>& t, double max_slope) {
  return loglog_slope(x, t) < max_slope;
}

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  if (n % 2) ++n;
  const double h = (b - a) / double(n);
  double s = f(a) + f(b);
  for (std::size_t i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + h * double(i));
  return s * h / 3.0;
}

GalerkinDense galerkin_by_grid(const ttc::DensityModel& density,
                               const std::function<double(const std::vector<double>&)>& pA,
                               const std::function<double(const std::vector<double>&)>& pB,
                               const std::vector<ttc::BasisSet>& phi, const ttc::Quadrature& quad) {
  const std::size_t d = phi.size(), nq = quad.size();
  const std::vector<double> P = dense_tt(density.tt);
  const std::vector<std::size_t> kmodes = density.tt.modes();
  std::vector<std::size_t> lmodes(d), grid(d, nq);
  for (std::size_t k = 0; k < d; ++k) lmodes[k] = phi[k].size();
  const std::size_t N = product(lmodes);
  GalerkinDense t;
  t.E = Eigen::MatrixXd::Zero(Eigen::Index(N), Eigen::Index(N));
  t.HA = t.E;
  t.HB = t.E;
  t.hB = Eigen::VectorXd::Zero(Eigen::Index(N));
  std::vector<double> x(d);
  std::vector<Eigen::VectorXd> val(d), der(d), psi(d);
  Eigen::VectorXd f(N);
  std::vector<Eigen::VectorXd> grad(d, Eigen::VectorXd(N));
  for_each_index(grid, [&](std::size_t, const std::vector<std::size_t>& g) {
    double w = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      x[k] = quad.nodes[g[k]];
      w *= quad.weights[g[k]];
      val[k] = phi[k].eval(x[k]);
      der[k] = phi[k].eval_deriv(x[k]);
      psi[k] = density.bases[k].eval(x[k]);
    }
    double p = 0.0;
    for_each_index(kmodes, [&](std::size_t flat, const std::vector<std::size_t>& m) {
      double prod = P[flat];
      for (std::size_t k = 0; k < d; ++k) prod *= psi[k](m[k]);
      p += prod;
    });
    for_each_index(lmodes, [&](std::size_t I, const std::vector<std::size_t>& idx) {
      double v = 1.0;
      for (std::size_t k = 0; k < d; ++k) v *= val[k](idx[k]);
      f(I) = v;
      for (std::size_t k = 0; k < d; ++k) {
        double gk = der[k](idx[k]);
        for (std::size_t m = 0; m < d; ++m)
          if (m != k) gk *= val[m](idx[m]);
        grad[k](I) = gk;
      }
    });
    const double a = pA(x), b = pB(x);
    for (std::size_t k = 0; k < d; ++k) t.E += (w * p) * grad[k] * grad[k].transpose();
    t.HA += (w * a) * f * f.transpose();
    t.HB += (w * b) * f * f.transpose();
    t.hB += (w * b) * f;
    t.mass_A += w * a;
    t.mass_B += w * b;
  });
  return t;
}

double gaussian_product(const std::vector<double>& x, const std::vector<double>& center, double sigma) {
  double v = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double z = (x[k] - center[k]) / sigma;
    v *= std::exp(-0.5 * z * z) / (std::sqrt(2.0 * 3.14159265358979323846) * sigma);
  }
  return v;
}

} // namespace oracle
