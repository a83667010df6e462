#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semibound/constants.hpp"
#include "semibound/error.hpp"
#include "semibound/jensen.hpp"
#include "semibound/schrodinger.hpp"
#include "semibound/specfun.hpp"

namespace py = pybind11;
using namespace semibound;

namespace {

SemigroupPair pair_from(const RealMatrix& A, const RealMatrix& B, double t) {
  return make_pair(SymmetricOperator(A), SymmetricOperator(B), t);
}

py::dict bound_dict(const PotentialBound& b) {
  py::dict d;
  d["theorem"] = b.theorem;
  d["value"] = b.value;
  d["c"] = b.c;
  d["beta"] = b.beta;
  d["t"] = b.t;
  d["delta"] = b.delta;
  d["kappa"] = b.kappa;
  d["alpha"] = b.alpha;
  d["p"] = b.p;
  d["norm_L1"] = b.norm_L1;
  d["norm_L2"] = b.norm_L2;
  d["norm_Lp"] = b.norm_Lp;
  d["norm_Kalpha"] = b.norm_Kalpha;
  d["c_choice"] = b.c_choice;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Eigenvalue-moment bounds from semigroup differences";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<HypothesisError>(m, "HypothesisError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  m.def("gamma_fn", &gamma_fn);
  m.def("riemann_zeta", &riemann_zeta);
  m.def("lambert_w0", &lambert_w0);
  m.def("bessel_k", &bessel_k, py::arg("nu"), py::arg("x"));

  m.def("c_integral", &c_integral, py::arg("index"), py::arg("gamma"), py::arg("tol") = default_constants_tol);
  m.def("constant_tr", &constant_tr, py::arg("gamma"), py::arg("tol") = default_constants_tol);
  m.def("constant_hs", &constant_hs, py::arg("gamma"), py::arg("tol") = default_constants_tol);
  m.def("prim_constant", &prim_constant, py::arg("gamma"));
  m.def("lower_bound_tr", &lower_bound_tr, py::arg("gamma"));

  m.def("eigvalsh", [](const RealMatrix& M) { return RealVector(eigvalsh(SymmetricOperator(M))); });
  m.def(
      "expm_neg", [](const RealMatrix& M, double t) { return RealMatrix(expm_neg(SymmetricOperator(M), t).matrix()); },
      py::arg("m"), py::arg("t"));
  m.def(
      "negative_moment", [](const RealMatrix& B, double gamma) {
        return negative_moment_oracle(SymmetricOperator(B), gamma);
      },
      py::arg("b"), py::arg("gamma"));

  m.def(
      "moment_via_jensen_tr",
      [](const RealMatrix& A, const RealMatrix& B, double t, double gamma, double tol) {
        return moment_via_jensen_tr(pair_from(A, B, t), {gamma, tol}).value;
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("gamma"), py::arg("tol") = 1e-8,
      "Jensen integral, equal to the moment of tB.");
  m.def(
      "bound_exp",
      [](const RealMatrix& A, const RealMatrix& B, double t, double gamma) {
        return bound_exp(pair_from(A, B, t), gamma).bound;
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("gamma"));
  m.def(
      "bound_prim",
      [](const RealMatrix& A, const RealMatrix& B, double t, double gamma) {
        return bound_prim(pair_from(A, B, t), gamma).bound;
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("gamma"));
  m.def(
      "bound_exphs",
      [](const RealMatrix& A, const RealMatrix& B, double t, double gamma) {
        return bound_exphs(pair_from(A, B, t), gamma).bound;
      },
      py::arg("a"), py::arg("b"), py::arg("t"), py::arg("gamma"));

  py::enum_<PotentialKind>(m, "PotentialKind")
      .value("square_well", PotentialKind::square_well)
      .value("gaussian_well", PotentialKind::gaussian_well)
      .value("power_law_cutoff", PotentialKind::power_law_cutoff);

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init([](int d, double L, int n) { return GridSpec{d, L, n}; }), py::arg("d"), py::arg("L"),
           py::arg("n"))
      .def_readwrite("d", &GridSpec::d)
      .def_readwrite("L", &GridSpec::L)
      .def_readwrite("n", &GridSpec::n)
      .def_property_readonly("h", &GridSpec::h);

  py::class_<PotentialSpec>(m, "PotentialSpec")
      .def(py::init([](PotentialKind kind, int d, double amplitude, double radius, double eta) {
             PotentialSpec v;
             v.kind = kind;
             v.d = d;
             v.amplitude = amplitude;
             v.radius = radius;
             v.eta = eta;
             v.validate();
             return v;
           }),
           py::arg("kind"), py::arg("d"), py::arg("amplitude") = 1.0, py::arg("radius") = 1.0, py::arg("eta") = 1.0)
      .def_readonly("kind", &PotentialSpec::kind)
      .def_readonly("d", &PotentialSpec::d)
      .def_readonly("amplitude", &PotentialSpec::amplitude)
      .def_readonly("radius", &PotentialSpec::radius)
      .def("scaled", &PotentialSpec::scaled, py::arg("mu"), py::arg("gamma"));

  m.def("green_kernel", &green_kernel, py::arg("d"), py::arg("x_norm"));
  m.def("beta_of_c", &beta_of_c, py::arg("v"), py::arg("c"));
  m.def(
      "kalpha_norm", [](const PotentialSpec& V, double alpha) { return kalpha_norm(V, alpha).value; }, py::arg("v"),
      py::arg("alpha"));
  m.def("cdp_constant", &cdp_constant, py::arg("d"), py::arg("p"));
  m.def("radial_lp_norm", &radial_lp_norm, py::arg("v"), py::arg("p"));
  m.def(
      "oracle_moment",
      [](const PotentialSpec& V, const GridSpec& g, double gamma) {
        return negative_spectrum_moment(schrodinger_operator(V, g), gamma);
      },
      py::arg("v"), py::arg("grid"), py::arg("gamma"));
  m.def(
      "bound_semigroup",
      [](const PotentialSpec& V, const GridSpec& g, double gamma, std::optional<double> c, bool l2) {
        return bound_dict(bound_semigroup(V, g, gamma, c, l2 ? BoundNorm::L2 : BoundNorm::L1));
      },
      py::arg("v"), py::arg("grid"), py::arg("gamma"), py::arg("c") = py::none(), py::arg("l2") = false);
  m.def(
      "bound_lp",
      [](const PotentialSpec& V, const GridSpec& g, double gamma, double p, bool l2) {
        return bound_dict(bound_lp(V, g, gamma, p, l2 ? BoundNorm::L2 : BoundNorm::L1));
      },
      py::arg("v"), py::arg("grid"), py::arg("gamma"), py::arg("p"), py::arg("l2") = false);
}
