#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hs6v/airy_tw.hpp"
#include "hs6v/asymptotics.hpp"
#include "hs6v/cli.hpp"
#include "hs6v/dpp.hpp"
#include "hs6v/errors.hpp"
#include "hs6v/vertex.hpp"

namespace py = pybind11;
using namespace hs6v;

namespace {

contour::KernelModel kernel_model(const std::string& model, int M, int N, double zeta) {
  if (model != "meixner" && model != "krawtchouk") throw DomainError("model must be meixner or krawtchouk");
  return {model == "meixner" ? contour::SchurModel::meixner : contour::SchurModel::krawtchouk, M, N, zeta};
}

vertex::VertexSpec homogeneous(const std::string& variant, const std::string& zeta, const std::string& sqrt_q, int M,
                               int N) {
  return asymptotics::homogeneous_spec(asymptotics::variant_from_string(variant), parse_rational(zeta),
                                       parse_rational(sqrt_q), M, N);
}

}  // namespace

PYBIND11_MODULE(_hs6v, m) {
  m.doc() = "Higher-spin six-vertex models, Macdonald and Schur measures, Tracy-Widom numerics";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigurationError>(m, "ConfigurationError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<AccuracyError>(m, "AccuracyError", PyExc_ArithmeticError);

  m.def("version", &cli::version);
  m.def("run_cli", &cli::run, py::arg("args"), py::call_guard<py::gil_scoped_release>(),
        "Run the command-line front-end in-process; returns the exit status.");

  m.def(
      "airy_ai", [](double x) {
        auto a = airy::airy_ai(x);
        return py::make_tuple(a.value, a.derivative);
      },
      py::arg("x"), "(Ai(x), Ai'(x)) for |x| <= 40.");
  m.def("tracy_widom_fgue", &airy::tracy_widom_fgue, py::arg("s"), py::arg("order") = 80, py::arg("tol") = 1e-8);
  m.def(
      "tw_table",
      [](int points, double lo, double hi, int order, unsigned workers) {
        py::gil_scoped_release release;
        auto t = airy::tw_table(points, lo, hi, order, workers);
        return std::make_pair(t.grid, t.values);
      },
      py::arg("points") = 601, py::arg("lo") = -8.0, py::arg("hi") = 4.0, py::arg("order") = 80,
      py::arg("workers") = 1, "(grid, F_GUE values).");

  m.def(
      "critical_data",
      [](double mu, double nu, double zeta, const std::string& variant) {
        auto d = asymptotics::critical_data(mu, nu, zeta, asymptotics::variant_from_string(variant));
        py::dict out;
        out["x_c"] = d.x_c;
        out["z_c"] = d.z_c;
        out["sigma"] = d.sigma;
        out["H"] = d.H;
        out["z_closed_form"] = d.certificate.z_closed_form;
        out["z_deviation"] = d.certificate.z_deviation;
        out["g1"] = d.certificate.g1;
        out["g2"] = d.certificate.g2;
        out["sigma_residual"] = d.certificate.sigma_residual;
        return out;
      },
      py::arg("mu"), py::arg("nu"), py::arg("zeta"), py::arg("variant") = "spin_half");
  m.def(
      "limit_shape",
      [](double mu, double nu, double zeta, const std::string& variant) {
        return asymptotics::limit_shape_H(mu, nu, zeta, asymptotics::variant_from_string(variant));
      },
      py::arg("mu"), py::arg("nu"), py::arg("zeta"), py::arg("variant") = "spin_half");

  m.def(
      "sample_heights",
      [](const std::string& variant, const std::string& zeta, const std::string& sqrt_q, int M, int N,
         std::uint64_t seed, std::size_t count, unsigned workers) {
        auto spec = homogeneous(variant, zeta, sqrt_q, M, N);
        py::gil_scoped_release release;
        return vertex::sample_heights(spec, seed, count, workers);
      },
      py::arg("variant"), py::arg("zeta"), py::arg("sqrt_q"), py::arg("M"), py::arg("N"), py::arg("seed"),
      py::arg("count"), py::arg("workers") = 1,
      "h(M, N) samples of the homogeneous model; zeta and sqrt_q are exact strings such as '1/4'.");
  m.def(
      "exact_height_distribution",
      [](const std::string& variant, const std::string& zeta, const std::string& sqrt_q, int M, int N) {
        auto dist = vertex::exact_height_distribution(homogeneous(variant, zeta, sqrt_q, M, N));
        std::vector<std::string> out;
        for (const auto& v : dist.values) out.push_back(to_string(v));
        return out;
      },
      py::arg("variant"), py::arg("zeta"), py::arg("sqrt_q"), py::arg("M"), py::arg("N"),
      "Exact law of h(M, N) as rational strings.");

  m.def(
      "sample_schur",
      [](const std::string& model, int M, int N, double zeta, std::uint64_t seed, std::size_t count,
         unsigned workers) {
        auto km = kernel_model(model, M, N, zeta);
        py::gil_scoped_release release;
        auto batch = dpp::sample_schur_batch(km, seed, count, workers);
        std::vector<std::vector<int>> out;
        for (const auto& l : batch.partitions) out.push_back(l.parts());
        return out;
      },
      py::arg("model"), py::arg("M"), py::arg("N"), py::arg("zeta"), py::arg("seed"), py::arg("count"),
      py::arg("workers") = 1);
  m.def(
      "length_cdf",
      [](const std::string& model, int M, int N, double zeta, int k, double tol) {
        return dpp::length_cdf(kernel_model(model, M, N, zeta), k, tol).value;
      },
      py::arg("model"), py::arg("M"), py::arg("N"), py::arg("zeta"), py::arg("k"), py::arg("tol") = 1e-10,
      "P{length(lambda) <= k} from the Fredholm determinant of the complemented kernel.");
  m.def(
      "exact_length_cdf",
      [](const std::string& model, int M, int N, double zeta, int k) {
        return dpp::exact_length_cdf(dpp::exact_weight_table_to(kernel_model(model, M, N, zeta), 1e-13), k);
      },
      py::arg("model"), py::arg("M"), py::arg("N"), py::arg("zeta"), py::arg("k"));
}
