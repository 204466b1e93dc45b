#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ttc/errors.hpp"
#include "ttc/oracle.hpp"
#include "ttc/pipeline.hpp"
#include "ttc/quadrature.hpp"
#include "ttc/random.hpp"
#include "ttc/tensor_train.hpp"

namespace py = pybind11;

namespace {

ttc::TensorTrain from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a, double rel_tol,
                            std::size_t max_rank) {
  std::vector<std::size_t> modes(a.shape(), a.shape() + a.ndim());
  return ttc::tt_from_dense(std::span<const double>(a.data(), std::size_t(a.size())), modes, rel_tol, max_rank);
}

py::array_t<double> to_numpy(const ttc::TensorTrain& tt) {
  const auto dense = ttc::tt_to_dense(tt);
  const auto modes = tt.modes();
  std::vector<py::ssize_t> shape(modes.begin(), modes.end());
  py::array_t<double> out(shape);
  std::copy(dense.begin(), dense.end(), out.mutable_data());
  return out;
}

std::vector<std::tuple<std::string, double, std::string, std::string>> rows(const std::vector<ttc::Metric>& m) {
  std::vector<std::tuple<std::string, double, std::string, std::string>> out;
  for (const auto& x : m) out.emplace_back(x.name, x.value, x.tolerance, x.pass);
  return out;
}

ttc::RunConfig parse(const std::string& text) { return ttc::run_config_from(ttc::Config::parse(text)); }

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Committor functions in tensor-train format";
  m.attr("__version__") = TTC_VERSION;

  py::register_exception<ttc::Error>(m, "Error", PyExc_RuntimeError);

  py::class_<ttc::TensorTrain>(m, "TensorTrain")
      .def_static("from_dense", &from_numpy, py::arg("array"), py::arg("rel_tol") = 0.0,
                  py::arg("max_rank") = ttc::kUnboundedRank)
      .def_static("random",
                  [](std::vector<std::size_t> modes, std::vector<std::size_t> ranks, std::uint64_t seed) {
                    auto rng = ttc::stream_rng(seed, 0);
                    return ttc::TensorTrain::random(modes, ranks, rng);
                  },
                  py::arg("modes"), py::arg("ranks"), py::arg("seed") = 0)
      .def_property_readonly("modes", &ttc::TensorTrain::modes)
      .def_property_readonly("ranks", &ttc::TensorTrain::ranks)
      .def("dim", &ttc::TensorTrain::dim)
      .def("to_dense", &to_numpy)
      .def("norm", [](const ttc::TensorTrain& t) { return ttc::tt_norm(t); })
      .def("__call__", [](const ttc::TensorTrain& t, std::vector<std::size_t> idx) { return ttc::tt_eval(t, idx); });

  m.def("tt_inner", &ttc::tt_inner);
  m.def("tt_round", &ttc::tt_round, py::arg("tt"), py::arg("eps"), py::arg("max_rank") = ttc::kUnboundedRank);

  m.def("gauss_legendre", [](std::size_t n, double a, double b) {
    const auto q = ttc::gauss_legendre(n, a, b);
    return std::make_pair(q.nodes, q.weights);
  }, py::arg("order"), py::arg("a") = -1.0, py::arg("b") = 1.0);

  m.def("gl_kernel_eigenvalues",
        [](double lambda, double beta, double h, double R, std::size_t order) {
          const auto q = ttc::gauss_legendre(order, -R, R);
          return ttc::gl_kernel_eigensystem(lambda, beta, h, R, q, 1).eigenvalues;
        },
        py::arg("lam"), py::arg("beta"), py::arg("h"), py::arg("R"), py::arg("order") = 200);

  m.def("dense_oracle_check", [](std::size_t d, std::size_t L, std::size_t K, std::size_t rank, std::uint64_t seed) {
    const auto r = ttc::dense_oracle_check(d, L, K, rank, seed);
    return py::dict(py::arg("energy") = r.energy, py::arg("H_A") = r.HA, py::arg("H_B") = r.HB,
                    py::arg("h_B") = r.hB, py::arg("objective") = r.objective);
  }, py::arg("d") = 2, py::arg("L") = 3, py::arg("K") = 3, py::arg("rank") = 2, py::arg("seed") = 0);

  m.def("soft_committor_1d",
        [](double beta, double sigma, double rho, std::size_t basis_size) {
          ttc::SoftCommittor1DCase c;
          c.beta = beta;
          c.sigma = sigma;
          c.rho = rho;
          c.basis_size = basis_size;
          const auto r = ttc::soft_committor_1d_compare(c);
          return py::dict(py::arg("l2_error") = r.l2_error, py::arg("grid") = r.fd.grid,
                          py::arg("q_fd") = r.fd.values);
        },
        py::arg("beta") = 2.0, py::arg("sigma") = 0.05, py::arg("rho") = 1e3, py::arg("basis_size") = 60);

  m.def("solve", [](const std::string& config, const std::filesystem::path& out) {
    const auto sol = ttc::cmd_solve(parse(config), out);
    return sol.Q;
  }, py::arg("config"), py::arg("out"), "Run the solve command for a config given as text.");
  m.def("validate", [](const std::string& config, const std::filesystem::path& solution,
                       const std::filesystem::path& out) { return rows(ttc::cmd_validate(parse(config), solution, out)); },
        py::arg("config"), py::arg("solution"), py::arg("out"));
  m.def("oracle", [](const std::string& config, const std::filesystem::path& out) {
    return rows(ttc::cmd_oracle(parse(config), out));
  }, py::arg("config"), py::arg("out"));
}
