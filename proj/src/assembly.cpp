#include "ttc/assembly.hpp"

#include <cmath>
#include <string>

#include "ttc/errors.hpp"
#include "ttc/parallel.hpp"

namespace ttc {

TripleTable triple_table(const Eigen::MatrixXd& psi, const Eigen::MatrixXd& f, const Eigen::MatrixXd& g,
                         const std::vector<double>& weights) {
  const Eigen::Map<const Eigen::VectorXd> w(weights.data(), weights.size());
  TripleTable out(psi.rows());
  for (Eigen::Index m = 0; m < psi.rows(); ++m) {
    const Eigen::VectorXd wm = psi.row(m).transpose().cwiseProduct(w);
    out[m] = f * wm.asDiagonal() * g.transpose();
  }
  return out;
}

namespace {

void check_same_quadrature(const BasisSet& x, const BasisSet& y, std::size_t k) {
  const auto& qx = x.quadrature();
  const auto& qy = y.quadrature();
  if (qx.nodes != qy.nodes || qx.weights != qy.weights)
    throw InputError("compute_integral_tables: quadrature mismatch in dimension " + std::to_string(k));
}

} // namespace

UnivariateIntegralTables compute_integral_tables(const std::vector<BasisSet>& phi,
                                                 const std::vector<BasisSet>& psi,
                                                 const std::vector<BasisSet>& a,
                                                 const std::vector<BasisSet>& b, std::size_t threads) {
  const std::size_t d = phi.size();
  if (psi.size() != d || a.size() != d || b.size() != d)
    throw InputError("compute_integral_tables: all basis lists need d entries");
  for (std::size_t k = 0; k < d; ++k) {
    check_same_quadrature(phi[k], psi[k], k);
    check_same_quadrature(phi[k], a[k], k);
    check_same_quadrature(phi[k], b[k], k);
  }
  UnivariateIntegralTables t;
  t.I.resize(d);
  t.I_deriv.resize(d);
  t.overlap_A.resize(d);
  t.overlap_B.resize(d);
  t.J_B.resize(d);
  t.mass_A.resize(d);
  t.mass_B.resize(d);
  parallel_for(
      d,
      [&](std::size_t k) {
        const auto& w = phi[k].quadrature().weights;
        const Eigen::Map<const Eigen::VectorXd> wv(w.data(), w.size());
        const auto& f = phi[k].values();
        const auto& df = phi[k].derivs();
        t.I[k] = triple_table(psi[k].values(), f, f, w);
        t.I_deriv[k] = triple_table(psi[k].values(), df, df, w);
        t.overlap_A[k] = triple_table(a[k].values(), f, f, w);
        t.overlap_B[k] = triple_table(b[k].values(), f, f, w);
        t.J_B[k] = b[k].values() * wv.asDiagonal() * f.transpose();
        t.mass_A[k] = a[k].values() * wv;
        t.mass_B[k] = b[k].values() * wv;
      },
      threads);
  return t;
}

Mpo contract_tables(const TensorTrain& coeffs, const std::vector<TripleTable>& tables) {
  if (tables.size() != coeffs.dim()) throw InputError("contract_tables: dimension mismatch");
  std::vector<Core4> cores;
  for (std::size_t k = 0; k < coeffs.dim(); ++k) {
    const Core3& c = coeffs.core(k);
    const auto& tab = tables[k];
    if (tab.size() != c.mode()) throw InputError("contract_tables: table size mismatch in dimension " + std::to_string(k));
    const std::size_t L = tab[0].rows(), Lc = tab[0].cols();
    Core4 w(c.left(), L, Lc, c.right());
    for (std::size_t al = 0; al < c.left(); ++al)
      for (std::size_t m = 0; m < c.mode(); ++m)
        for (std::size_t b = 0; b < c.right(); ++b) {
          const double v = c(al, m, b);
          if (v == 0.0) continue;
          for (std::size_t i = 0; i < L; ++i)
            for (std::size_t j = 0; j < Lc; ++j) w(al, i, j, b) += v * tab[m](i, j);
        }
    cores.push_back(std::move(w));
  }
  return Mpo(std::move(cores));
}

Mpo symmetrize(const Mpo& mpo) {
  std::vector<Core4> cores;
  for (const auto& c : mpo.cores()) {
    if (c.rows() != c.cols()) throw InputError("symmetrize: core is not square");
    Core4 s(c.left(), c.rows(), c.cols(), c.right());
    for (std::size_t a = 0; a < c.left(); ++a)
      for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
          for (std::size_t b = 0; b < c.right(); ++b) s(a, i, j, b) = 0.5 * (c(a, i, j, b) + c(a, j, i, b));
    cores.push_back(std::move(s));
  }
  return Mpo(std::move(cores));
}

Mpo build_energy_mpo(const DensityModel& density, const UnivariateIntegralTables& tables) {
  const Mpo H = contract_tables(density.tt, tables.I);
  const Mpo Ht = contract_tables(density.tt, tables.I_deriv);
  const std::size_t d = H.dim();
  if (d == 1) return symmetrize(Ht);
  std::vector<Core4> cores;
  for (std::size_t k = 0; k < d; ++k) {
    const Core4& h = H.core(k);
    const Core4& ht = Ht.core(k);
    const std::size_t rl = h.left(), rr = h.right(), L = h.rows();
    const bool first = k == 0, last = k + 1 == d;
    Core4 w(first ? 1 : 2 * rl, L, L, last ? 1 : 2 * rr);
    for (std::size_t a = 0; a < rl; ++a)
      for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j)
          for (std::size_t b = 0; b < rr; ++b) {
            if (first) {
              w(0, i, j, b) = h(a, i, j, b);
              w(0, i, j, rr + b) = ht(a, i, j, b);
            } else if (last) {
              w(a, i, j, 0) = ht(a, i, j, b);
              w(rl + a, i, j, 0) = h(a, i, j, b);
            } else {
              w(a, i, j, b) = h(a, i, j, b);
              w(a, i, j, rr + b) = ht(a, i, j, b);
              w(rl + a, i, j, rr + b) = h(a, i, j, b);
            }
          }
    cores.push_back(std::move(w));
  }
  return symmetrize(Mpo(std::move(cores)));
}

Mpo build_penalty_mpo(const BoundaryMeasure& measure, const std::vector<TripleTable>& overlap) {
  return symmetrize(contract_tables(measure.tt, overlap));
}

TensorTrain build_linear_term(const BoundaryMeasure& measure_B, const UnivariateIntegralTables& tables) {
  const TensorTrain& tt = measure_B.tt;
  if (tables.J_B.size() != tt.dim()) throw InputError("build_linear_term: dimension mismatch");
  std::vector<Core3> cores;
  for (std::size_t k = 0; k < tt.dim(); ++k) {
    const Core3& c = tt.core(k);
    const Eigen::MatrixXd& jb = tables.J_B[k];
    if (static_cast<std::size_t>(jb.rows()) != c.mode())
      throw InputError("build_linear_term: table size mismatch in dimension " + std::to_string(k));
    const std::size_t L = jb.cols();
    Core3 h(c.left(), L, c.right());
    for (std::size_t a = 0; a < c.left(); ++a)
      for (std::size_t m = 0; m < c.mode(); ++m)
        for (std::size_t b = 0; b < c.right(); ++b)
          for (std::size_t i = 0; i < L; ++i) h(a, i, b) += c(a, m, b) * jb(m, i);
    cores.push_back(std::move(h));
  }
  return TensorTrain(std::move(cores));
}

double measure_mass(const TensorTrain& coeffs, const std::vector<Eigen::VectorXd>& masses) {
  if (masses.size() != coeffs.dim()) throw InputError("measure_mass: dimension mismatch");
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (std::size_t k = 0; k < coeffs.dim(); ++k) {
    const Core3& c = coeffs.core(k);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(c.left(), c.right());
    for (std::size_t a = 0; a < c.left(); ++a)
      for (std::size_t i = 0; i < c.mode(); ++i)
        for (std::size_t b = 0; b < c.right(); ++b) m(a, b) += c(a, i, b) * masses[k](i);
    v = v * m;
  }
  return v(0);
}

GalerkinProblem assemble_problem(const DensityModel& density, const BoundaryMeasure& pA,
                                 const BoundaryMeasure& pB, const UnivariateIntegralTables& tables, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw InputError("assemble_problem: rho must be finite and nonnegative");
  if (density.dim() != pA.dim() || density.dim() != pB.dim())
    throw InputError("assemble_problem: density and measures differ in dimension");
  GalerkinProblem p;
  p.energy = build_energy_mpo(density, tables);
  p.HA = build_penalty_mpo(pA, tables.overlap_A);
  p.HB = build_penalty_mpo(pB, tables.overlap_B);
  p.hB = build_linear_term(pB, tables);
  p.rho = rho;
  p.mass_A = measure_mass(pA.tt, tables.mass_A);
  p.mass_B = measure_mass(pB.tt, tables.mass_B);
  return p;
}

GalerkinProblem assemble_problem(const DensityModel& density, const BoundaryMeasure& pA,
                                 const BoundaryMeasure& pB, const std::vector<BasisSet>& phi, double rho,
                                 std::size_t threads) {
  const auto tables = compute_integral_tables(phi, density.bases, pA.bases, pB.bases, threads);
  return assemble_problem(density, pA, pB, tables, rho);
}

} // namespace ttc
