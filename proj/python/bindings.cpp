#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fuzzyspec/deficiency.hpp"
#include "fuzzyspec/extensions.hpp"
#include "fuzzyspec/flows.hpp"
#include "fuzzyspec/operators.hpp"
#include "fuzzyspec/uncertainty.hpp"

namespace py = pybind11;
using namespace fuzzyspec;

namespace {

Backend backend_from(const std::string& name) {
  if (name == "spectral") return Backend::Spectral;
  if (name == "finite-difference") return Backend::FiniteDifference;
  throw config_error("backend must be 'spectral' or 'finite-difference'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symmetric-operator analysis: deficiency indices, self-adjoint "
            "extensions, flows, and uncertainty bounds.";

  py::register_exception<config_error>(m, "ConfigError");
  py::register_exception<parameter_error>(m, "ParameterError");
  py::register_exception<infeasible_error>(m, "InfeasibleError");

  py::class_<OperatorOnDomain>(m, "OperatorOnDomain")
      .def_property_readonly("ambient_dim", &OperatorOnDomain::ambient_dim)
      .def_property_readonly("domain_dim",
                             [](const OperatorOnDomain& op) { return op.domain.dim(); })
      .def_readonly("copies", &OperatorOnDomain::copies)
      .def_readonly("model_tag", &OperatorOnDomain::model_tag)
      .def_property_readonly("matrix",
                             [](const OperatorOnDomain& op) { return op.matrix; });

  py::class_<BetaAlgebraModel>(m, "BetaAlgebraModel")
      .def_readonly("beta", &BetaAlgebraModel::beta)
      .def_readonly("cutoff", &BetaAlgebraModel::cutoff)
      .def_readonly("x_op", &BetaAlgebraModel::x_op)
      .def_readonly("p_op", &BetaAlgebraModel::p_op);

  m.def("build_interval_derivative",
        [](int copies, int n, const std::string& backend, double hbar) {
          return build_interval_derivative(copies, n, backend_from(backend), hbar);
        },
        py::arg("copies"), py::arg("n"), py::arg("backend") = "spectral",
        py::arg("hbar") = 1.0);

  m.def("build_halfline_derivative", &build_halfline_derivative, py::arg("n"),
        py::arg("length"), py::arg("hbar") = 1.0);

  m.def("build_beta_algebra", &build_beta_algebra, py::arg("beta"),
        py::arg("cutoff"), py::arg("n"), py::arg("hbar") = 1.0);

  m.def("build_matrix_model", &build_matrix_model, py::arg("matrix"),
        py::arg("domain_codim"), py::arg("seed") = 0x66757a7aULL);

  m.def("check_symmetry", &check_symmetry);
  m.def("check_commutator", &check_commutator);

  m.def("deficiency_indices", [](const OperatorOnDomain& op) {
    const DeficiencyReport rep = deficiency_spaces(op);
    py::dict d;
    d["r_plus"] = rep.r_plus;
    d["r_minus"] = rep.r_minus;
    d["discrete_r_plus"] = rep.discrete_r_plus;
    d["discrete_r_minus"] = rep.discrete_r_minus;
    d["method"] = to_string(rep.method);
    d["classification"] = to_string(rep.classification);
    return d;
  });

  m.def("boundary_extension_spectrum",
        [](const OperatorOnDomain& op, double theta) {
          CMat u = std::exp(std::complex<double>(0, theta)) *
                   CMat::Identity(op.copies, op.copies);
          const SelfAdjointExtension ext =
              extend_by_boundary(op, make_extension_parameter(u));
          return spectrum(ext).eigenvalues;
        },
        py::arg("op"), py::arg("theta"));

  m.def("min_uncertainty",
        [](const OperatorOnDomain& op, double xi) {
          const MinUncertaintyResult r = min_uncertainty(op, xi);
          return py::make_tuple(r.dx_min, r.residual);
        },
        py::arg("op"), py::arg("xi"));

  m.def("sample_gup",
        [](const BetaAlgebraModel& model, int n_states, std::uint64_t seed) {
          const GupReport rep = sample_gup(model, n_states, seed);
          py::dict d;
          d["min_margin"] = rep.min_margin;
          d["violations"] = rep.violations;
          d["n_states"] = rep.n_states;
          d["seed"] = rep.seed;
          return d;
        },
        py::arg("model"), py::arg("n_states"), py::arg("seed") = 1);

  m.def("local_phase_errors",
        [](const OperatorOnDomain& op, double theta, double theta_prime, double a) {
          CMat u = std::exp(std::complex<double>(0, theta)) *
                   CMat::Identity(op.copies, op.copies);
          CMat up = std::exp(std::complex<double>(0, theta_prime)) *
                    CMat::Identity(op.copies, op.copies);
          const LocalPhaseReport rep = verify_local_phase(
              op, make_extension_parameter(u), make_extension_parameter(up), a);
          return py::make_tuple(rep.identity_error, rep.phase_error);
        },
        py::arg("op"), py::arg("theta"), py::arg("theta_prime"), py::arg("a"));

  m.def("generated_algebra_dimension", &generated_algebra_dimension,
        py::arg("model"), py::arg("max_word_length"), py::arg("extension_set_size"),
        py::arg("seed") = 0x616c67ULL);
}
