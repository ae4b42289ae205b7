#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bsz2d/errors.hpp"
#include "bsz2d/examples_suite.hpp"
#include "bsz2d/io.hpp"
#include "bsz2d/lex_order.hpp"
#include "bsz2d/moment_oracle.hpp"
#include "bsz2d/recurrence.hpp"
#include "bsz2d/total_order.hpp"
#include "bsz2d/weights.hpp"

namespace py = pybind11;
using namespace bsz2d;

namespace {

Eigen::MatrixXd grid_matrix(const BivariatePoly& p) {
  const auto& g = p.coeffs();
  Eigen::MatrixXd m(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) m(i, j) = g(i, j);
  return m;
}

py::list entries(const OrthoSystem& sys) {
  py::list out;
  for (const auto& e : sys.entries) {
    py::dict d;
    d["index"] = py::make_tuple(e.index.i, e.index.j);
    d["coeffs"] = grid_matrix(e.poly);
    d["norm"] = e.norm;
    d["source"] = e.source;
    out.append(d);
  }
  return out;
}

Ordering ordering_from(const std::string& s) {
  if (s == "total") return Ordering::TotalDegree;
  if (s == "lex") return Ordering::Lex;
  if (s == "revlex") return Ordering::RevLex;
  throw InvalidArgument("unknown ordering " + s);
}

ExampleId example_from(const std::string& kind, const py::dict& p) {
  auto get = [&](const char* k) { return p.contains(k) ? p[k].cast<double>() : 0.0; };
  switch (example_kind_from_string(kind)) {
    case ExampleKind::SingleFactor: return ExampleId::single_factor(get("a"));
    case ExampleKind::LinearQuadratic: return ExampleId::linear_quadratic(get("a"), get("b"));
    case ExampleKind::TwoFactor: return ExampleId::two_factor(get("a1"), get("a2"));
    case ExampleKind::TwoLinearQuadratic: return ExampleId::two_linear_quadratic(get("b1"), get("b2"), get("a"));
  }
  throw InvalidArgument("unknown example");
}

}  // namespace

PYBIND11_MODULE(_bsz2d, m) {
  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidWeight>(m, "InvalidWeight", error.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", error.ptr());
  py::register_exception<BelowThreshold>(m, "BelowThreshold", error.ptr());
  py::register_exception<AccuracyFailure>(m, "AccuracyFailure", error.ptr());
  py::register_exception<UnreliableOracle>(m, "UnreliableOracle", error.ptr());

  py::class_<WeightSpec>(m, "Weight")
      .def_static("product", &WeightSpec::product, py::arg("a"), py::arg("reflected") = false)
      .def_static("generic", py::overload_cast<const std::vector<std::vector<double>>&>(&WeightSpec::generic),
                  py::arg("h"))
      .def_static("from_json", [](const std::string& s) { return weight_from_json(nlohmann::json::parse(s)); })
      .def_static("load", &load_weight_file)
      .def_property_readonly("is_product", &WeightSpec::is_product)
      .def_property_readonly("n_h", &WeightSpec::n_h)
      .def_property_readonly("n_f", &WeightSpec::n_f)
      .def_property_readonly("kappa", &WeightSpec::kappa)
      .def_property_readonly("fingerprint", &WeightSpec::fingerprint)
      .def("abs_h_sq", &WeightSpec::abs_h_sq, py::arg("theta"), py::arg("t"))
      .def("to_json", [](const WeightSpec& w) { return to_json(w).dump(); });

  m.def(
      "is_stable",
      [](const WeightSpec& w, int samples, double tol) {
        const auto r = is_stable(w, samples, tol);
        py::dict d;
        d["stable"] = r.stable;
        d["analytic"] = r.analytic;
        d["min_modulus"] = r.min_modulus;
        d["witness_y"] = r.witness_y;
        return d;
      },
      py::arg("weight"), py::arg("y_samples") = 129, py::arg("tol") = 1e-9);

  py::class_<MomentOracle>(m, "Oracle")
      .def(py::init([](const WeightSpec& w, double tol, int threads) {
             QuadratureOptions o;
             o.tol = tol;
             o.threads = threads;
             return new MomentOracle(w, o);
           }),
           py::arg("weight"), py::arg("tol") = 1e-11, py::arg("threads") = 1)
      .def("moment", &MomentOracle::moment, py::arg("i"), py::arg("j"))
      .def("moment_error", &MomentOracle::moment_error, py::arg("i"), py::arg("j"))
      .def("modified_moment", &MomentOracle::modified_moment, py::arg("c"), py::arg("d"))
      .def("modified_table", [](const MomentOracle& o, int degree) { return o.table(degree)->modified; },
           py::arg("degree"));

  m.def("total_system", [](const MomentOracle& o, int n) { return entries(build_total_system(o, n)); },
        py::arg("oracle"), py::arg("n"));
  m.def(
      "lex_system",
      [](const MomentOracle& o, int n, int mm, bool revlex) {
        return entries(revlex ? build_revlex_system(o, n, mm) : build_lex_system(o, n, mm));
      },
      py::arg("oracle"), py::arg("n"), py::arg("m"), py::arg("revlex") = false);
  m.def(
      "gram_schmidt",
      [](const MomentOracle& o, const std::string& ord, int n, int mm) {
        return entries(gram_schmidt(o, ordering_from(ord), n, mm));
      },
      py::arg("oracle"), py::arg("ordering"), py::arg("n"), py::arg("m") = 0);

  m.def(
      "total_blocks",
      [](const MomentOracle& o, int n) {
        const auto b = total_blocks(o, build_total_system(o, n + 1), n);
        py::dict d;
        d["ax"] = b.ax;
        d["bx"] = b.bx;
        d["ay"] = b.ay;
        d["by"] = b.by;
        d["residual"] = b.residual;
        d["pattern_ok"] = verify_total_structure(b, o.spec()).pass;
        return d;
      },
      py::arg("oracle"), py::arg("n"));
  m.def(
      "lex_blocks",
      [](const MomentOracle& o, int n, int mm, bool revlex) {
        const auto sys = revlex ? build_revlex_system(o, n + 1, mm) : build_lex_system(o, n + 1, mm);
        const auto b = lex_blocks(o, sys, n);
        py::dict d;
        d["a"] = b.a;
        d["b"] = b.b;
        d["residual"] = b.residual;
        return d;
      },
      py::arg("oracle"), py::arg("n"), py::arg("m"), py::arg("revlex") = false);

  m.def(
      "run_example",
      [](const std::string& kind, const py::dict& params, int depth) {
        return run_regression(example_from(kind, params), depth).to_json().dump();
      },
      py::arg("kind"), py::arg("params"), py::arg("depth") = 4);
  m.def(
      "run_invariants", [](const WeightSpec& w, int depth) { return run_invariants(w, depth).to_json().dump(); },
      py::arg("weight"), py::arg("depth") = 4);

  m.attr("__version__") = "0.1.0";
}
