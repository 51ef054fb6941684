#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kform/error.hpp"
#include "kform/levi.hpp"
#include "kform/pp_forms.hpp"
#include "kform/rigidity.hpp"
#include "kform/sampling.hpp"
#include "kform/umehara.hpp"
#include "kform/verify.hpp"

namespace py = pybind11;
using namespace kform;

namespace {

using Rows = std::vector<std::vector<Complex>>;

CMatrix to_matrix(const Rows& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows[0].size() : 0;
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionError("ragged matrix");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Rows to_rows(const CMatrix& m) {
  Rows out(m.rows(), std::vector<Complex>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

SpaceForm make_form(const std::string& kind, int dim, std::optional<int> sig) {
  return SpaceForm(parse_kind(kind), dim, sig.value_or(dim));
}

MapExpr make_map(const std::vector<std::string>& comps, int arity) { return MapExpr::parse(comps, arity); }

py::dict pullback_dict(const PullbackResult& r) {
  py::dict d;
  d["lambda_hat"] = r.lambdaHat;
  d["max_residual"] = r.maxResidual;
  d["ratio_spread"] = r.ratioSpread;
  d["samples"] = r.samples;
  d["passed"] = r.pass;
  return d;
}

}  // namespace

PYBIND11_MODULE(_kform, m) {
  m.doc() = "Kaehler space-form verification engine";

  static py::exception<Error> base(m, "KformError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ScenarioError>(m, "ScenarioError", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());

  py::class_<SpaceForm>(m, "SpaceForm")
      .def(py::init(&make_form), py::arg("kind"), py::arg("dim"), py::arg("sig") = py::none())
      .def_property_readonly("kind", [](const SpaceForm& s) { return kind_name(s.kind()); })
      .def_property_readonly("dim", &SpaceForm::dim)
      .def_property_readonly("sig", &SpaceForm::sig)
      .def("__repr__", &SpaceForm::to_string);

  m.def("det", [](const Rows& a) { return det(to_matrix(a)); });
  m.def("hermitian_eigen", [](const Rows& a) {
    const EigenDecomposition e = hermitian_eigen(HermitianMatrix(to_matrix(a)));
    return py::make_tuple(e.eigenvalues, to_rows(e.basis));
  });
  m.def(
      "signature",
      [](const Rows& a, double tol) {
        const Signature s = signature(HermitianMatrix(to_matrix(a)), tol);
        return py::make_tuple(s.negative, s.zero, s.positive);
      },
      py::arg("h"), py::arg("tol") = kDefaultZeroTol);
  m.def("generalized_eigenvalues", [](const Rows& h, const Rows& g) {
    return generalized_eigenvalues(HermitianMatrix(to_matrix(h)), HermitianMatrix(to_matrix(g)));
  });

  m.def("jacobian", [](const std::vector<std::string>& comps, const Point& w) {
    return to_rows(jacobian(make_map(comps, static_cast<int>(w.size())), w));
  });
  m.def("metric", [](const SpaceForm& sf, const Point& z) { return to_rows(metric(sf, z).matrix()); });
  m.def("ricci", [](const SpaceForm& sf, const Point& z) { return to_rows(ricci(sf, z).matrix()); });
  m.def("wedge_power_coeffs", [](const Rows& g, int p) {
    return to_rows(wedge_power_coeffs(HermitianMatrix(to_matrix(g)), p).entries.matrix());
  });
  m.def("pullback", [](const std::vector<std::string>& comps, const SpaceForm& src, const SpaceForm& tgt, int p,
                       const Point& w) {
    return to_rows(pullback_pp(make_map(comps, src.dim()), src, tgt, p, w).entries.matrix());
  });
  m.def(
      "proportionality_test",
      [](const std::vector<std::string>& comps, const SpaceForm& src, const SpaceForm& tgt, int p, std::size_t count,
         std::uint64_t seed, double tol) {
        return pullback_dict(proportionality_test(make_map(comps, src.dim()), src, tgt, p,
                                                  sample_chart_points(src, count, seed), tol));
      },
      py::arg("map"), py::arg("source"), py::arg("target"), py::arg("p"), py::arg("count") = 50,
      py::arg("seed") = 42, py::arg("tol") = kDefaultPassTol);
  m.def(
      "levi_form",
      [](const SpaceForm& sf, int p, const Point& z, const std::vector<Complex>& xi, double r) {
        const LeviReport rep = levi_form(sf, p, r, z, xi);
        return py::make_tuple(rep.eigenvalues,
                              py::make_tuple(rep.signature.negative, rep.signature.zero, rep.signature.positive));
      },
      py::arg("space"), py::arg("p"), py::arg("z"), py::arg("xi"), py::arg("r") = 1.0);
  m.def("obstruction_probe", [](const SpaceForm& src, const SpaceForm& tgt, const std::vector<std::string>& comps,
                                int p, const Point& w, const std::vector<Complex>& xi) {
    const ProbeResult r = obstruction_probe(src, tgt, make_map(comps, src.dim()), p, w, xi);
    py::dict d;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["conflict"] = r.conflict;
    d["inconclusive"] = r.inconclusive;
    return d;
  });
  m.def(
      "series_rank",
      [](const std::string& name, int p, int order, std::optional<std::vector<std::string>> comps) {
        std::optional<MapExpr> F;
        if (comps) F = make_map(*comps, 1);
        return coeff_rank(builtin_series(name, p, order, F ? &*F : nullptr));
      },
      py::arg("name"), py::arg("p"), py::arg("order"), py::arg("map") = py::none());
  m.def(
      "run_scenario",
      [](const std::string& text) {
        const verify::Scenario s = verify::parse_scenario(verify::Json::parse(text));
        return verify::report_to_json(verify::run_scenario(s)).dump();
      },
      "Run a scenario given as JSON text; returns the report as JSON text.");
  m.def(
      "run_suite", [](std::uint64_t seed) { return verify::report_to_json(verify::run_reference_suite(seed)).dump(); },
      py::arg("seed") = 42);
}
