#pragma once

// Experiment drivers behind the command line tool: configuration, problem setup,
// solve/validate/oracle commands and their CSV artifacts.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ttc/als.hpp"
#include "ttc/basis.hpp"
#include "ttc/config.hpp"
#include "ttc/density.hpp"
#include "ttc/hitting.hpp"
#include "ttc/potentials.hpp"

namespace ttc {

enum class ExperimentKind { double_well, ginzburg_landau, custom };
enum class PotentialKind { double_well, ginzburg_landau };

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::double_well;
  PotentialKind potential = PotentialKind::double_well;
  std::size_t d = 10;
  double temperature = 0.2;
  BasisFamily basis_family = BasisFamily::density_orthogonal;
  std::size_t basis_size = 30;
  /// Domain half-width; 0 = derived from the density tail (double well) or 3.0 (Ginzburg-Landau).
  double gamma = 0.0;
  double domain_tail = 1e-14;
  /// Nodes per dimension; 0 = derived.
  std::size_t quadrature_order = 0;

  double dw_transverse = 0.3;
  /// Hyperplanes x_1 = -offset (A) and x_1 = +offset (B).
  double plane_offset = 1.0;
  double plane_sigma = 0.01;
  /// Off-axis factors exp(-beta V_k) on the hyperplane measures.
  bool plane_weighted = true;

  double gl_lambda = 0.1;
  /// 0 = 1 / (d + 1).
  double gl_h = 0.0;
  std::size_t gl_J = 20;
  std::size_t gl_chebyshev = 60;
  double ball_radius = 2.5;
  /// Empty = the minima of V reached from -1 / +1.
  std::vector<double> center_A, center_B;

  SolverConfig solver;

  bool validate_mc = false;
  std::size_t mc_samples = 1'000'000;
  std::size_t reference_points = 200'001;
  double mc_tolerance = 1e-3;
  /// Reported next to E when > 0.
  double mc_reported_target = 0.0;
  bool validate_boundary = true;
  double boundary_tolerance = 1e-2;
  bool validate_density = false;
  std::size_t density_points = 50;
  double density_tolerance = 1e-4;
  bool validate_hitting = false;
  IsosurfaceConfig hitting;
  double std_lo = 0.03, std_hi = 0.08;
  bool validate_kmeans = false;
  bool validate_flow = false;
  double flow_q_lo = 0.1, flow_q_hi = 0.9, flow_max_dq = 1e-3;

  std::size_t slice_points = 401;
  std::uint64_t seed = 0;
  std::size_t threads = 0;

  double beta() const { return 1.0 / temperature; }
  /// Fills derived defaults (gamma, quadrature order, lattice spacing, validation dt).
  void resolve();
  /// `key = value` lines of every resolved setting.
  std::string plan() const;
  void validate() const;
};

std::string to_string(ExperimentKind e);

/// Preset defaults, then the keys of `config`. Unknown keys are rejected with their name.
RunConfig run_config_from(const Config& config);
RunConfig preset(ExperimentKind kind);

struct Experiment {
  RunConfig config;
  std::shared_ptr<const Potential> potential;
  std::vector<Quadrature> quads;
  DensityModel density;
  BoundaryMeasure pA, pB;
  std::vector<BasisSet> phi;
  std::optional<KernelEigensystem> kernel;
  std::vector<double> center_A, center_B;

  bool in_A(std::span<const double> x) const;
  bool in_B(std::span<const double> x) const;
  bool in_domain(std::span<const double> x) const;
};

Experiment build_experiment(const RunConfig& config);

/// Local minimum of V reached from x0 (damped Newton).
std::vector<double> local_minimum(const Potential& V, std::vector<double> x0, double gtol = 1e-9,
                                  std::size_t max_iterations = 1000);

/// Relative error of the density train against exp(log_density) at Langevin samples of p.
double density_check(const Experiment& ex, std::size_t n_points, std::uint64_t seed);

/// q evaluated inside the domain, NaN outside.
double q_or_nan(const CommittorSolution& sol, const Experiment& ex, std::span<const double> x);

/// Point on the segment from center_A (or x_1 axis for planes) where q = target, by bisection.
std::vector<double> point_with_q(const CommittorSolution& sol, const Experiment& ex, double target);

struct Metric {
  std::string name;
  double value = 0.0;
  std::string tolerance;
  /// "true", "false" or "info".
  std::string pass;
};

CommittorSolution cmd_solve(const RunConfig& config, const std::filesystem::path& out);
/// Returns the metrics; the caller exits nonzero iff any has pass == "false".
std::vector<Metric> cmd_validate(const RunConfig& config, const std::filesystem::path& solution,
                                 const std::filesystem::path& out);
std::vector<Metric> cmd_oracle(const RunConfig& config, const std::filesystem::path& out);

void write_manifest(const RunConfig& config, const std::filesystem::path& out, const std::string& command);
std::string format_double(double v);

} // namespace ttc
