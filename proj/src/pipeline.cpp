#include "ttc/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "ttc/assembly.hpp"
#include "ttc/errors.hpp"
#include "ttc/kmeans.hpp"
#include "ttc/langevin.hpp"
#include "ttc/monte_carlo.hpp"
#include "ttc/oracle.hpp"
#include "ttc/quadrature.hpp"
#include "ttc/random.hpp"
#include "ttc/reactive_flow.hpp"
#include "ttc/reference_1d.hpp"
#include "ttc/tt_io.hpp"

#ifndef TTC_VERSION
#define TTC_VERSION "unknown"
#endif

namespace ttc {

namespace fs = std::filesystem;

std::string format_double(double v) {
  // Shortest representation that round-trips.
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw InputError("cannot write " + path.string());
  return os;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Re-raise a library error with the pipeline stage prepended, keeping its type.
template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InputError& e) {
    throw InputError(stage + ": " + e.what());
  } catch (const ResourceError& e) {
    throw ResourceError(stage + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(stage + ": " + e.what());
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(stage + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(stage + ": " + e.what());
  } catch (const UnsupportedError& e) {
    throw UnsupportedError(stage + ": " + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(stage + ": " + e.what());
  }
}

BasisFamily parse_family(const std::string& s) {
  if (s == "fourier") return BasisFamily::fourier;
  if (s == "chebyshev") return BasisFamily::chebyshev;
  if (s == "density_orthogonal") return BasisFamily::density_orthogonal;
  throw InputError("config field 'basis.family': expected fourier, chebyshev or density_orthogonal, got '" + s + "'");
}

ExperimentKind parse_experiment(const std::string& s) {
  if (s == "double_well") return ExperimentKind::double_well;
  if (s == "ginzburg_landau") return ExperimentKind::ginzburg_landau;
  if (s == "custom") return ExperimentKind::custom;
  throw InputError("config field 'experiment': expected double_well, ginzburg_landau or custom, got '" + s + "'");
}

PotentialKind parse_potential(const std::string& s) {
  if (s == "double_well") return PotentialKind::double_well;
  if (s == "ginzburg_landau") return PotentialKind::ginzburg_landau;
  throw InputError("config field 'potential': expected double_well or ginzburg_landau, got '" + s + "'");
}

std::string to_string(PotentialKind p) { return p == PotentialKind::double_well ? "double_well" : "ginzburg_landau"; }

void write_metrics(const fs::path& path, const std::vector<Metric>& metrics) {
  auto os = open_out(path);
  os << "metric,value,tolerance,pass\n";
  for (const auto& m : metrics) os << m.name << ',' << format_double(m.value) << ',' << m.tolerance << ',' << m.pass << '\n';
}

Metric check(const std::string& name, double value, double tol, bool pass) {
  return {name, value, format_double(tol), pass ? "true" : "false"};
}

Metric info(const std::string& name, double value) { return {name, value, "", "info"}; }

} // namespace

std::string to_string(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::double_well: return "double_well";
    case ExperimentKind::ginzburg_landau: return "ginzburg_landau";
    case ExperimentKind::custom: return "custom";
  }
  return "custom";
}

RunConfig preset(ExperimentKind kind) {
  RunConfig c;
  c.experiment = kind;
  if (kind == ExperimentKind::ginzburg_landau) {
    c.potential = PotentialKind::ginzburg_landau;
    c.d = 16;
    c.temperature = 8.0;
    c.basis_family = BasisFamily::fourier;
    c.basis_size = 5;
    c.gamma = 3.0;
    c.validate_density = true;
    c.validate_hitting = true;
    c.validate_kmeans = true;
    c.validate_flow = true;
    c.hitting.N_s = 200;
    c.hitting.N_t = 100;
  } else {
    c.solver.rho_schedule = {{1.0, 4}, {10.0, 4}, {100.0, 4}};
    c.validate_mc = true;
    c.validate_boundary = false;
    c.validate_flow = true;
    c.mc_reported_target = 1.60e-4;
  }
  c.hitting.dt = 0.0;
  return c;
}

RunConfig run_config_from(const Config& cfg) {
  const ExperimentKind kind = parse_experiment(cfg.get_string("experiment", "double_well"));
  RunConfig c = preset(kind);
  c.potential = parse_potential(cfg.get_string("potential", to_string(c.potential)));
  if (kind != ExperimentKind::custom && c.potential != preset(kind).potential)
    throw InputError("config field 'potential': only experiment = custom may change the potential");
  c.d = cfg.get_size("d", c.d);
  c.temperature = cfg.get_double("temperature", c.temperature);
  if (kind == ExperimentKind::double_well && !cfg.has("validate.mc_reported_target") && c.temperature != 0.2)
    c.mc_reported_target = c.temperature == 0.05 ? 6.77e-4 : 0.0;
  if (cfg.has("basis.family")) c.basis_family = parse_family(cfg.get_string("basis.family", ""));
  c.basis_size = cfg.get_size("basis.size", c.basis_size);
  c.gamma = cfg.get_double("domain.gamma", c.gamma);
  c.domain_tail = cfg.get_double("domain.tail", c.domain_tail);
  c.quadrature_order = cfg.get_size("quadrature.order", c.quadrature_order);

  c.dw_transverse = cfg.get_double("double_well.transverse", c.dw_transverse);
  c.plane_offset = cfg.get_double("boundary.offset", c.plane_offset);
  c.plane_sigma = cfg.get_double("boundary.sigma", c.plane_sigma);
  c.plane_weighted = cfg.get_bool("boundary.weighted", c.plane_weighted);

  c.gl_lambda = cfg.get_double("gl.lambda", c.gl_lambda);
  c.gl_h = cfg.get_double("gl.h", c.gl_h);
  c.gl_J = cfg.get_size("gl.J", c.gl_J);
  c.gl_chebyshev = cfg.get_size("gl.chebyshev", c.gl_chebyshev);
  c.ball_radius = cfg.get_double("boundary.radius", c.ball_radius);
  c.center_A = cfg.get_doubles("boundary.center_A", c.center_A);
  c.center_B = cfg.get_doubles("boundary.center_B", c.center_B);

  c.solver.ranks = cfg.get_sizes("solver.ranks", c.solver.ranks);
  if (cfg.has("solver.rho") || cfg.has("solver.sweeps")) {
    std::vector<double> rho;
    for (const auto& s : c.solver.rho_schedule) rho.push_back(s.rho);
    rho = cfg.get_doubles("solver.rho", rho);
    std::vector<std::size_t> sweeps = cfg.get_sizes("solver.sweeps", {4});
    if (sweeps.size() != 1 && sweeps.size() != rho.size())
      throw InputError("config field 'solver.sweeps': expected 1 value or one per solver.rho entry");
    c.solver.rho_schedule.clear();
    for (std::size_t i = 0; i < rho.size(); ++i)
      c.solver.rho_schedule.push_back({rho[i], sweeps.size() == 1 ? sweeps[0] : sweeps[i]});
  }
  c.solver.convergence_tol = cfg.get_double("solver.tol", c.solver.convergence_tol);
  c.solver.regularization = cfg.get_double("solver.regularization", c.solver.regularization);

  c.validate_mc = cfg.get_bool("validate.mc", c.validate_mc);
  c.mc_samples = cfg.get_size("validate.mc_samples", c.mc_samples);
  c.reference_points = cfg.get_size("validate.reference_points", c.reference_points);
  c.mc_tolerance = cfg.get_double("validate.mc_tolerance", c.mc_tolerance);
  c.mc_reported_target = cfg.get_double("validate.mc_reported_target", c.mc_reported_target);
  c.validate_boundary = cfg.get_bool("validate.boundary", c.validate_boundary);
  c.boundary_tolerance = cfg.get_double("validate.boundary_tolerance", c.boundary_tolerance);
  c.validate_density = cfg.get_bool("validate.density", c.validate_density);
  c.density_points = cfg.get_size("validate.density_points", c.density_points);
  c.density_tolerance = cfg.get_double("validate.density_tolerance", c.density_tolerance);
  c.validate_hitting = cfg.get_bool("validate.hitting", c.validate_hitting);
  c.hitting.eps = cfg.get_double("hitting.eps", c.hitting.eps);
  c.hitting.N_s = cfg.get_size("hitting.N_s", c.hitting.N_s);
  c.hitting.N_t = cfg.get_size("hitting.N_t", c.hitting.N_t);
  c.hitting.dt = cfg.get_double("hitting.dt", c.hitting.dt);
  c.hitting.burn_in = cfg.get_size("hitting.burn_in", c.hitting.burn_in);
  c.hitting.stride = cfg.get_size("hitting.stride", c.hitting.stride);
  c.hitting.max_chain_steps = cfg.get_size("hitting.max_chain_steps", c.hitting.max_chain_steps);
  c.hitting.max_steps = cfg.get_size("hitting.max_steps", c.hitting.max_steps);
  c.hitting.histogram_bins = cfg.get_size("hitting.bins", c.hitting.histogram_bins);
  c.std_lo = cfg.get_double("hitting.std_lo", c.std_lo);
  c.std_hi = cfg.get_double("hitting.std_hi", c.std_hi);
  c.validate_kmeans = cfg.get_bool("validate.kmeans", c.validate_kmeans);
  c.validate_flow = cfg.get_bool("validate.flow", c.validate_flow);
  c.flow_q_lo = cfg.get_double("flow.q_lo", c.flow_q_lo);
  c.flow_q_hi = cfg.get_double("flow.q_hi", c.flow_q_hi);
  c.flow_max_dq = cfg.get_double("flow.max_dq", c.flow_max_dq);
  c.slice_points = cfg.get_size("output.slice_points", c.slice_points);
  c.seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  c.threads = cfg.get_size("threads", c.threads);

  const auto unused = cfg.unused_keys();
  if (!unused.empty()) throw InputError("config field '" + unused.front() + "': unknown key");
  c.resolve();
  c.validate();
  return c;
}

void RunConfig::resolve() {
  if (gl_h == 0.0) gl_h = 1.0 / double(d + 1);
  if (gamma == 0.0) {
    if (potential == PotentialKind::ginzburg_landau) {
      gamma = 3.0;
    } else if (temperature > 0.0 && domain_tail > 0.0) {
      const double b = beta();
      DoubleWellPotential V(std::max<std::size_t>(d, 2), dw_transverse);
      gamma = truncation_halfwidth([&](double s) { return std::exp(-b * V.term(0, s)); }, domain_tail, 10.0);
      if (d > 1)
        gamma = std::max(gamma, truncation_halfwidth([&](double s) { return std::exp(-b * V.term(1, s)); },
                                                     domain_tail, 10.0));
    }
  }
  if (quadrature_order == 0) {
    if (potential == PotentialKind::ginzburg_landau) {
      quadrature_order = default_quadrature_order(basis_size, gl_chebyshev + 1);
    } else {
      quadrature_order = default_quadrature_order(basis_size, 1);
      if (plane_sigma > 0.0)
        quadrature_order = std::max<std::size_t>(quadrature_order, std::size_t(std::ceil(4.0 * gamma / plane_sigma)));
    }
  }
  if (hitting.dt == 0.0) hitting.dt = potential == PotentialKind::ginzburg_landau ? 1e-4 : 1e-4 * beta();
  hitting.seed = seed;
  hitting.threads = threads;
  solver.seed = seed;
}

void RunConfig::validate() const {
  auto need = [](bool ok, const char* field, const char* what) {
    if (!ok) throw InputError(std::string("config field '") + field + "': " + what);
  };
  need(d >= 1, "d", "must be at least 1");
  need(temperature > 0.0 && std::isfinite(temperature), "temperature", "must be positive");
  need(basis_size >= 1, "basis.size", "must be at least 1");
  need(gamma > 0.0, "domain.gamma", "must be positive");
  need(quadrature_order >= 2, "quadrature.order", "must be at least 2");
  need(basis_family != BasisFamily::table, "basis.family", "table bases cannot be configured");
  if (basis_family == BasisFamily::fourier) need(basis_size <= quadrature_order, "basis.size", "exceeds quadrature.order");
  if (potential == PotentialKind::double_well) {
    need(plane_sigma > 0.0, "boundary.sigma", "must be positive");
    need(plane_offset > 0.0 && plane_offset < gamma, "boundary.offset", "must lie in (0, domain.gamma)");
  } else {
    need(basis_family != BasisFamily::density_orthogonal, "basis.family",
         "density_orthogonal needs a product density (double_well only)");
    need(gl_lambda > 0.0, "gl.lambda", "must be positive");
    need(gl_h > 0.0, "gl.h", "must be positive");
    need(gl_J >= 1, "gl.J", "must be at least 1");
    need(gl_J <= quadrature_order, "gl.J", "exceeds quadrature.order");
    need(gl_chebyshev >= 1, "gl.chebyshev", "must be at least 1");
    need(ball_radius > 0.0, "boundary.radius", "must be positive");
    need(center_A.empty() || center_A.size() == d, "boundary.center_A", "needs d values");
    need(center_B.empty() || center_B.size() == d, "boundary.center_B", "needs d values");
  }
  try {
    solver.validate();
  } catch (const InputError& e) {
    throw InputError(std::string("config section 'solver': ") + e.what());
  }
  need(solver.ranks.size() == 1 || solver.ranks.size() + 1 == d, "solver.ranks", "expected 1 or d-1 values");
  need(mc_samples >= 2, "validate.mc_samples", "must be at least 2");
  need(reference_points >= 1000, "validate.reference_points", "must be at least 1000");
  need(hitting.dt > 0.0, "hitting.dt", "must be positive");
  need(hitting.N_s >= 1, "hitting.N_s", "must be at least 1");
  need(hitting.N_t >= 1, "hitting.N_t", "must be at least 1");
  need(hitting.eps >= 0.0, "hitting.eps", "must be nonnegative");
  need(hitting.stride >= 1, "hitting.stride", "must be at least 1");
  need(!validate_kmeans || validate_hitting, "validate.kmeans", "requires validate.hitting");
  need(flow_q_lo > 0.0 && flow_q_lo < flow_q_hi && flow_q_hi < 1.0, "flow.q_lo", "need 0 < q_lo < q_hi < 1");
  need(flow_max_dq > 0.0, "flow.max_dq", "must be positive");
  need(slice_points >= 2, "output.slice_points", "must be at least 2");
}

std::string RunConfig::plan() const {
  std::ostringstream os;
  os << "experiment=" << to_string(experiment) << "\n"
     << "potential=" << to_string(potential) << "\n"
     << "d=" << d << "\n"
     << "temperature=" << format_double(temperature) << "\n"
     << "beta=" << format_double(beta()) << "\n"
     << "basis.family=" << to_string(basis_family) << "\n"
     << "basis.size=" << basis_size << "\n"
     << "domain.gamma=" << format_double(gamma) << "\n"
     << "quadrature.order=" << quadrature_order << "\n";
  if (potential == PotentialKind::double_well) {
    os << "double_well.transverse=" << format_double(dw_transverse) << "\n"
       << "boundary.geometry=hyperplane\n"
       << "boundary.offset=" << format_double(plane_offset) << "\n"
       << "boundary.sigma=" << format_double(plane_sigma) << "\n"
       << "boundary.weighted=" << (plane_weighted ? "true" : "false") << "\n";
  } else {
    os << "gl.lambda=" << format_double(gl_lambda) << "\n"
       << "gl.h=" << format_double(gl_h) << "\n"
       << "gl.J=" << gl_J << "\n"
       << "gl.chebyshev=" << gl_chebyshev << "\n"
       << "boundary.geometry=sphere\n"
       << "boundary.radius=" << format_double(ball_radius) << "\n"
       << "boundary.center_A=" << (center_A.empty() ? "minimum" : join(center_A)) << "\n"
       << "boundary.center_B=" << (center_B.empty() ? "minimum" : join(center_B)) << "\n";
  }
  std::vector<double> rho;
  std::vector<std::size_t> sweeps;
  for (const auto& s : solver.rho_schedule) {
    rho.push_back(s.rho);
    sweeps.push_back(s.sweeps);
  }
  os << "solver.ranks=" << join(solver.ranks) << "\n"
     << "solver.rho=" << join(rho) << "\n"
     << "solver.sweeps=" << join(sweeps) << "\n"
     << "solver.tol=" << format_double(solver.convergence_tol) << "\n"
     << "solver.regularization=" << format_double(solver.regularization) << "\n"
     << "validate.mc=" << validate_mc << "\n"
     << "validate.mc_samples=" << mc_samples << "\n"
     << "validate.reference_points=" << reference_points << "\n"
     << "validate.mc_tolerance=" << format_double(mc_tolerance) << "\n"
     << "validate.boundary=" << validate_boundary << "\n"
     << "validate.density=" << validate_density << "\n"
     << "validate.hitting=" << validate_hitting << "\n"
     << "validate.kmeans=" << validate_kmeans << "\n"
     << "validate.flow=" << validate_flow << "\n"
     << "hitting.eps=" << format_double(hitting.eps) << "\n"
     << "hitting.N_s=" << hitting.N_s << "\n"
     << "hitting.N_t=" << hitting.N_t << "\n"
     << "hitting.dt=" << format_double(hitting.dt) << "\n"
     << "hitting.burn_in=" << hitting.burn_in << "\n"
     << "hitting.stride=" << hitting.stride << "\n"
     << "hitting.max_steps=" << hitting.max_steps << "\n"
     << "flow.q_lo=" << format_double(flow_q_lo) << "\n"
     << "flow.q_hi=" << format_double(flow_q_hi) << "\n"
     << "flow.max_dq=" << format_double(flow_max_dq) << "\n"
     << "output.slice_points=" << slice_points << "\n"
     << "seed=" << seed << "\n";
  return os.str();
}

void write_manifest(const RunConfig& config, const fs::path& out, const std::string& command) {
  const std::string plan = config.plan();
  fs::create_directories(out);
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016" PRIx64, fnv1a(plan));
  auto os = open_out(out / "manifest");
  os << "command=" << command << "\n"
     << "version=" << TTC_VERSION << "\n"
     << "config_hash=" << hash << "\n"
     << plan;
}

std::vector<double> local_minimum(const Potential& V, std::vector<double> x, double gtol, std::size_t max_iterations) {
  // Damped Newton with a central-difference Hessian; falls back to steepest descent.
  const std::size_t d = x.size();
  Eigen::VectorXd g(d), gp(d), gm(d);
  Eigen::MatrixXd H(d, d);
  std::vector<double> y(d);
  double f = V.value(x);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    V.gradient(x, std::span<double>(g.data(), d));
    if (g.norm() < gtol) return x;
    for (std::size_t k = 0; k < d; ++k) {
      const double e = 1e-5 * std::max(1.0, std::abs(x[k]));
      y = x;
      y[k] += e;
      V.gradient(y, std::span<double>(gp.data(), d));
      y[k] -= 2.0 * e;
      V.gradient(y, std::span<double>(gm.data(), d));
      H.col(Eigen::Index(k)) = (gp - gm) / (2.0 * e);
    }
    H = 0.5 * (H + H.transpose()).eval();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
    Eigen::VectorXd dir = -g;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Eigen::VectorXd nd = -ldlt.solve(g);
      if (nd.allFinite() && nd.dot(g) < 0.0) dir = nd;
    }
    double step = 1.0;
    for (;;) {
      for (std::size_t k = 0; k < d; ++k) y[k] = x[k] + step * dir[Eigen::Index(k)];
      const double fy = V.value(y);
      if (fy <= f + 1e-4 * step * g.dot(dir)) {
        x.swap(y);
        f = fy;
        break;
      }
      step *= 0.5;
      if (step < 1e-20) return x;
    }
  }
  throw ConvergenceError("local_minimum: no convergence in " + std::to_string(max_iterations) + " iterations");
}

bool Experiment::in_A(std::span<const double> x) const {
  if (config.potential == PotentialKind::double_well) return x[0] <= -config.plane_offset;
  return Ball{center_A, config.ball_radius}.contains(x);
}

bool Experiment::in_B(std::span<const double> x) const {
  if (config.potential == PotentialKind::double_well) return x[0] >= config.plane_offset;
  return Ball{center_B, config.ball_radius}.contains(x);
}

bool Experiment::in_domain(std::span<const double> x) const {
  for (double v : x)
    if (!(std::abs(v) <= config.gamma)) return false;
  return true;
}

Experiment build_experiment(const RunConfig& config) {
  Experiment ex;
  ex.config = config;
  const std::size_t d = config.d;
  const double beta = config.beta();
  const Quadrature quad = gauss_legendre(config.quadrature_order, -config.gamma, config.gamma);
  ex.quads.assign(d, quad);

  if (config.potential == PotentialKind::double_well) {
    auto V = std::make_shared<DoubleWellPotential>(d, config.dw_transverse);
    ex.potential = V;
    ex.density = staged("density", [&] { return product_density(V, beta, ex.quads); });
    std::vector<std::function<double(double)>> off;
    if (config.plane_weighted && d > 1) {
      off.resize(d);
      for (std::size_t k = 1; k < d; ++k) off[k] = [V, k, beta](double s) { return std::exp(-beta * V->term(k, s)); };
    }
    ex.pA = hyperplane_boundary_measure(0, -config.plane_offset, config.plane_sigma, ex.quads, off);
    ex.pB = hyperplane_boundary_measure(0, config.plane_offset, config.plane_sigma, ex.quads, off);
    ex.center_A.assign(d, 0.0);
    ex.center_B.assign(d, 0.0);
    ex.center_A[0] = -config.plane_offset;
    ex.center_B[0] = config.plane_offset;
  } else {
    auto V = std::make_shared<GinzburgLandauPotential>(d, config.gl_lambda, config.gl_h);
    ex.potential = V;
    ex.kernel = staged("kernel", [&] {
      return gl_kernel_eigensystem(config.gl_lambda, beta, config.gl_h, config.gamma, quad, config.gl_J);
    });
    ex.density = staged("density", [&] { return gl_density(*ex.kernel, d, config.gl_chebyshev, quad); });
    ex.center_A = config.center_A.empty() ? local_minimum(*V, std::vector<double>(d, -1.0)) : config.center_A;
    ex.center_B = config.center_B.empty() ? local_minimum(*V, std::vector<double>(d, 1.0)) : config.center_B;
    ex.pA = sphere_boundary_measure(ex.center_A, config.ball_radius, ex.quads);
    ex.pB = sphere_boundary_measure(ex.center_B, config.ball_radius, ex.quads);
  }

  ex.phi = staged("basis", [&] {
    std::vector<BasisSet> phi;
    for (std::size_t k = 0; k < d; ++k) {
      switch (config.basis_family) {
        case BasisFamily::fourier: phi.push_back(fourier_basis(config.basis_size, config.gamma, quad)); break;
        case BasisFamily::chebyshev:
          phi.push_back(chebyshev_basis(config.basis_size - 1, config.gamma, quad));
          break;
        case BasisFamily::density_orthogonal: {
          std::vector<double> w(quad.size());
          for (std::size_t q = 0; q < quad.size(); ++q)
            w[q] = std::exp(-beta * ex.potential->term(k, quad.nodes[q]));
          phi.push_back(density_orthogonal_basis(w, config.basis_size, quad));
          break;
        }
        case BasisFamily::table: throw InputError("basis.family: table bases cannot be configured");
      }
    }
    return phi;
  });
  return ex;
}

double density_check(const Experiment& ex, std::size_t n_points, std::uint64_t seed) {
  const auto& V = *ex.potential;
  GradientFn grad = [&V](std::span<const double> x, std::span<double> g) { V.gradient(x, g); };
  auto rng = stream_rng(seed, 0);
  std::vector<double> x = ex.center_A;
  const double beta = ex.config.beta(), dt = ex.config.hitting.dt;
  x = langevin_sample(grad, beta, dt, ex.config.hitting.burn_in, x, rng);
  double worst = 0.0;
  std::size_t found = 0, tries = 0;
  while (found < n_points) {
    if (++tries > 1000 * n_points) throw ResourceError("density_check: too few sample points inside the domain");
    x = langevin_sample(grad, beta, dt, ex.config.hitting.stride, x, rng);
    if (!ex.in_domain(x)) continue;
    const double exact = std::exp(ex.density.log_density(x));
    const double approx = ex.density.tt_value(x);
    worst = std::max(worst, std::abs(approx - exact) / exact);
    ++found;
  }
  return worst;
}

double q_or_nan(const CommittorSolution& sol, const Experiment& ex, std::span<const double> x) {
  if (!ex.in_domain(x)) return std::numeric_limits<double>::quiet_NaN();
  return eval_q(sol, x);
}

std::vector<double> point_with_q(const CommittorSolution& sol, const Experiment& ex, double target) {
  const std::size_t d = ex.center_A.size();
  auto at = [&](double t) {
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) x[k] = (1.0 - t) * ex.center_A[k] + t * ex.center_B[k];
    return x;
  };
  double lo = 0.0, hi = 1.0;
  if (!(eval_q(sol, at(lo)) < target && eval_q(sol, at(hi)) > target))
    throw NumericalError("point_with_q: q does not cross " + format_double(target) + " between the centers");
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eval_q(sol, at(mid)) < target ? lo : hi) = mid;
  }
  return at(0.5 * (lo + hi));
}

namespace {

std::string descriptor_text(const Experiment& ex, const CommittorSolution& sol) {
  std::ostringstream os;
  os << "format=TTv1\n"
     << "d=" << sol.dim() << "\n"
     << "basis.family=" << to_string(ex.config.basis_family) << "\n"
     << "basis.size=" << ex.config.basis_size << "\n"
     << "domain.gamma=" << format_double(ex.config.gamma) << "\n"
     << "quadrature.order=" << ex.config.quadrature_order << "\n"
     << "final_rho=" << format_double(sol.final_rho) << "\n"
     << "ranks=" << join(sol.Q.ranks()) << "\n";
  return os.str();
}

void check_descriptor(const fs::path& path, const Experiment& ex) {
  if (!fs::exists(path)) return;
  const Config desc = Config::load(path);
  auto expect = [&](const std::string& key, const std::string& want) {
    const std::string got = desc.get_string(key, want);
    if (got != want)
      throw InputError("solution descriptor " + path.string() + ": " + key + " = " + got + " but config gives " + want);
  };
  expect("d", std::to_string(ex.config.d));
  expect("basis.family", to_string(ex.config.basis_family));
  expect("basis.size", std::to_string(ex.config.basis_size));
  expect("domain.gamma", format_double(ex.config.gamma));
}

void write_trace(const fs::path& path, const std::vector<TraceEntry>& trace) {
  auto os = open_out(path);
  os << "rho,sweep,core,objective\n";
  for (const auto& t : trace) os << format_double(t.rho) << ',' << t.sweep << ',' << t.core << ',' << format_double(t.objective) << '\n';
}

} // namespace

CommittorSolution cmd_solve(const RunConfig& config, const fs::path& out) {
  fs::create_directories(out);
  write_manifest(config, out, "solve");
  const Experiment ex = build_experiment(config);
  const GalerkinProblem problem = staged("assembly", [&] {
    return assemble_problem(ex.density, ex.pA, ex.pB, ex.phi, config.solver.rho_schedule.front().rho, config.threads);
  });
  CommittorSolution sol = staged("solve", [&] { return solve(problem, ex.phi, config.solver); });

  save_tt(out / "solution.tt", sol.Q);
  open_out(out / "solution.desc") << descriptor_text(ex, sol);
  write_trace(out / "objective_trace.csv", sol.objective_trace);

  const std::size_t n = config.slice_points;
  if (config.potential == PotentialKind::double_well) {
    auto os = open_out(out / "slice_x1.csv");
    os << "x1,q\n";
    const double a = std::min(1.5, config.gamma);
    std::vector<double> x(config.d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      x[0] = -a + 2.0 * a * double(i) / double(n - 1);
      os << format_double(x[0]) << ',' << format_double(eval_q(sol, x)) << '\n';
    }
  } else {
    auto os = open_out(out / "slice_line.csv");
    os << "t,q\n";
    std::vector<double> x(config.d);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = double(i) / double(n - 1);
      for (std::size_t k = 0; k < config.d; ++k) x[k] = (1.0 - t) * ex.center_A[k] + t * ex.center_B[k];
      os << format_double(t) << ',' << format_double(q_or_nan(sol, ex, x)) << '\n';
    }
  }
  return sol;
}

std::vector<Metric> cmd_validate(const RunConfig& config, const fs::path& solution, const fs::path& out) {
  fs::path tt_path = solution;
  if (fs::is_directory(tt_path)) tt_path /= "solution.tt";
  if (!fs::exists(tt_path)) throw InputError("missing solution artifact " + tt_path.string());
  fs::create_directories(out);
  write_manifest(config, out, "validate");

  std::vector<Metric> metrics;
  const bool any = config.validate_mc || config.validate_boundary || config.validate_density ||
                   config.validate_hitting || config.validate_flow;
  if (!any) {
    write_metrics(out / "metrics.csv", metrics);
    return metrics;
  }

  const Experiment ex = build_experiment(config);
  fs::path desc = tt_path;
  desc.replace_extension(".desc");
  check_descriptor(desc, ex);
  CommittorSolution sol;
  sol.Q = load_tt(tt_path);
  sol.phi_bases = ex.phi;
  if (sol.Q.modes() != std::vector<std::size_t>(config.d, ex.phi.front().size()))
    throw InputError("solution " + tt_path.string() + " does not match the configured basis sizes");

  const double beta = config.beta();
  const auto& V = *ex.potential;
  GradientFn grad = [&V](std::span<const double> x, std::span<double> g) { V.gradient(x, g); };

  if (config.validate_mc) {
    if (config.potential != PotentialKind::double_well)
      throw InputError("config field 'validate.mc': the reference error needs the double-well potential");
    const ReferenceSolution1D ref = solve_dw_reference(beta, config.reference_points);
    const McEstimate e = staged("validate.mc", [&] {
      return relative_error_mc(sol, ref, ex.density, config.mc_samples, config.seed, config.threads);
    });
    metrics.push_back(check("relative_error_E", e.value, config.mc_tolerance, e.value <= config.mc_tolerance));
    metrics.push_back(info("relative_error_E_std_error", e.std_error));
    if (config.mc_reported_target > 0.0) metrics.push_back(info("relative_error_E_reported", config.mc_reported_target));
  }

  if (config.validate_boundary) {
    const GalerkinProblem problem = staged("assembly", [&] {
      return assemble_problem(ex.density, ex.pA, ex.pB, ex.phi, 1.0, config.threads);
    });
    const auto [ra, rb] = boundary_residuals(problem, sol.Q);
    const double tol = config.boundary_tolerance;
    metrics.push_back(check("boundary_rms_A", std::sqrt(std::max(0.0, ra)), tol, std::sqrt(std::max(0.0, ra)) <= tol));
    metrics.push_back(check("boundary_rms_B", std::sqrt(std::max(0.0, rb)), tol, std::sqrt(std::max(0.0, rb)) <= tol));
    const double qa = eval_q(sol, ex.center_A), qb = eval_q(sol, ex.center_B);
    metrics.push_back(check("q_center_A", qa, tol, qa >= -tol && qa <= tol));
    metrics.push_back(check("q_center_B", qb, tol, qb >= 1.0 - tol && qb <= 1.0 + tol));
  }

  if (config.validate_density) {
    const double err = density_check(ex, config.density_points, config.seed);
    metrics.push_back(check("density_max_rel_error", err, config.density_tolerance, err <= config.density_tolerance));
  }

  if (config.validate_hitting) {
    const std::vector<double> x0 = point_with_q(sol, ex, 0.5);
    ScalarFn q = [&](std::span<const double> x) { return q_or_nan(sol, ex, x); };
    RegionFn inA = [&](std::span<const double> x) { return ex.in_A(x); };
    RegionFn inB = [&](std::span<const double> x) { return ex.in_B(x); };
    const TrajectoryStats st =
        staged("validate.hitting", [&] { return isosurface_hitting_test(q, grad, beta, x0, inA, inB, config.hitting); });
    metrics.push_back(check("hitting_grand_mean_offset", st.grand_mean - 0.5, st.mean_tolerance, st.mean_pass));
    const bool std_ok = st.std_dev >= config.std_lo && st.std_dev <= config.std_hi;
    metrics.push_back({"hitting_std", st.std_dev, "[" + format_double(config.std_lo) + ";" + format_double(config.std_hi) + "]",
                       std_ok ? "true" : "false"});
    metrics.push_back(info("hitting_theoretical_std", st.theoretical_std));
    metrics.push_back(info("hitting_censored", double(st.censored)));
    metrics.push_back(info("hitting_dt", config.hitting.dt));
    {
      auto os = open_out(out / "hitting_stats.csv");
      os << "j,n_j,N_t\n";
      for (std::size_t j = 0; j < st.n.size(); ++j) os << j << ',' << st.n[j] << ',' << st.finished[j] << '\n';
    }
    {
      auto os = open_out(out / "qq.csv");
      os << "empirical,theoretical\n";
      for (const auto& [e, t] : st.qq) os << format_double(e) << ',' << format_double(t) << '\n';
    }
    if (config.validate_kmeans) {
      const KMeans2Result km = staged("validate.kmeans", [&] { return kmeans2(st.points); });
      auto os = open_out(out / "theta_hist.csv");
      os << "theta\n";
      for (double t : km.theta) os << format_double(t) << '\n';
      double sep = 0.0;
      for (std::size_t k = 0; k < config.d; ++k) sep += std::pow(km.centroid1[k] - km.centroid2[k], 2);
      metrics.push_back(info("kmeans_centroid_distance", std::sqrt(sep)));
    }
  }

  if (config.validate_flow) {
    bool ok = true;
    double end_q = std::numeric_limits<double>::quiet_NaN();
    try {
      const std::vector<double> x0 = point_with_q(sol, ex, config.flow_q_lo);
      ValueGradientFn qg = [&](std::span<const double> x, Eigen::VectorXd& g) {
        double v = 0.0;
        g = eval_function_tt_gradient(sol.Q, sol.phi_bases, x, &v);
        return v;
      };
      auto p = [&](std::span<const double> x) { return std::exp(ex.density.log_density(x)); };
      const auto path = reactive_flow(qg, p, beta, x0, config.flow_q_hi, config.flow_max_dq);
      auto os = open_out(out / "path.csv");
      os << "t";
      for (std::size_t k = 0; k < config.d; ++k) os << ",U_" << k + 1;
      os << ",q\n";
      for (std::size_t i = 0; i < path.size(); ++i) {
        os << format_double(path[i].t);
        for (double v : path[i].x) os << ',' << format_double(v);
        os << ',' << format_double(path[i].q) << '\n';
        if (i > 0 && !(path[i].q > path[i - 1].q)) ok = false;
      }
      end_q = path.back().q;
    } catch (const Error& e) {
      ok = false;
      std::fprintf(stderr, "validate.flow: %s\n", e.what());
    }
    const bool pass = ok && std::abs(end_q - config.flow_q_hi) <= config.flow_max_dq;
    metrics.push_back(check("flow_end_q_offset", end_q - config.flow_q_hi, config.flow_max_dq, pass));
  }

  write_metrics(out / "metrics.csv", metrics);
  return metrics;
}

std::vector<Metric> cmd_oracle(const RunConfig& config, const fs::path& out) {
  fs::create_directories(out);
  write_manifest(config, out, "oracle");
  std::vector<Metric> metrics;

  const DenseOracleReport r = staged("oracle.dense", [&] { return dense_oracle_check(3, 4, 4, 2, config.seed); });
  {
    auto os = open_out(out / "oracle_dense.csv");
    os << "term,relative_discrepancy\n"
       << "energy," << format_double(r.energy) << "\n"
       << "H_A," << format_double(r.HA) << "\n"
       << "H_B," << format_double(r.HB) << "\n"
       << "h_B," << format_double(r.hB) << "\n"
       << "objective," << format_double(r.objective) << "\n";
  }
  const double worst = std::max({r.energy, r.HA, r.HB, r.hB, r.objective});
  metrics.push_back(check("dense_max_rel_discrepancy", worst, 1e-10, worst <= 1e-10));

  {
    const double beta = 5.0;
    const auto fd = solve_dw_reference(beta, 100'000);
    const auto cf = dw_reference_closed_form(beta, 100'000);
    double diff = 0.0;
    for (std::size_t i = 0; i < fd.values.size(); ++i) diff = std::max(diff, std::abs(fd.values[i] - cf.values[i]));
    metrics.push_back(check("dw_reference_fd_vs_closed_form", diff, 1e-8, diff < 1e-8));
  }

  const SoftCommittor1DResult soft = staged("oracle.soft_1d", [] { return soft_committor_1d_compare({}); });
  {
    auto os = open_out(out / "oracle_1d.csv");
    os << "x,q_als,q_fd\n";
    const std::size_t n = 401;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = soft.fd.lo + (soft.fd.hi - soft.fd.lo) * double(i) / double(n - 1);
      os << format_double(x) << ',' << format_double(eval_q(soft.als, std::span<const double>(&x, 1))) << ','
         << format_double(soft.fd(x)) << '\n';
    }
  }
  metrics.push_back(check("soft_1d_als_vs_fd_l2", soft.l2_error, 1e-3, soft.l2_error < 1e-3));
  write_metrics(out / "metrics.csv", metrics);
  return metrics;
}

} // namespace ttc
