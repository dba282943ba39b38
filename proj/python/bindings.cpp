#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "splinets/core.hpp"
#include "splinets/error.hpp"
#include "splinets/io.hpp"
#include "splinets/project.hpp"
#include "splinets/random.hpp"

namespace py = pybind11;
using namespace splinets;

namespace {

KnotSet knots_from(const std::vector<double>& xi) { return KnotSet(xi); }

py::dict splinet_dict(const SplinetResult& r) {
  py::dict d;
  d["bs"] = r.bs;
  d["os"] = r.os ? py::cast(*r.os) : py::none();
  d["P"] = r.P ? py::cast(r.P->P) : py::none();
  d["fast_path"] = r.fast_path;
  return d;
}

py::dict projection_dict(const ProjectionResult& p) {
  py::dict d;
  d["coeff"] = p.coeff;
  d["basis"] = p.basis;
  d["sp"] = p.sp;
  d["warnings"] = p.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orthonormal spline bases, spline calculus and functional data projection";

  py::register_exception<StructureError>(m, "StructureError", PyExc_ValueError);
  py::register_exception<SingularError>(m, "SingularError", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  py::class_<SplineFamily>(m, "SplineFamily")
      .def_property_readonly("knots", [](const SplineFamily& f) {
        const auto v = f.knots().values();
        return std::vector<double>(v.begin(), v.end());
      })
      .def_property_readonly("order", &SplineFamily::order)
      .def_property_readonly("type", [](const SplineFamily& f) { return std::string(to_string(f.type())); })
      .def("__len__", &SplineFamily::size)
      .def("derivatives", [](const SplineFamily& f, int i) {
        if (i < 0 || i >= f.size()) throw py::index_error();
        return dense_one_sided(f, i);
      }, py::arg("member"), "Dense one-sided (n+2) x (k+1) derivative matrix of a member.")
      .def("evaluate", [](const SplineFamily& f, const std::vector<double>& t, int deriv) {
        return evaluate(f, t, deriv);
      }, py::arg("t"), py::arg("deriv") = 0)
      .def("to_json", [](const SplineFamily& f) { return archive_to_string({f, std::nullopt, {}}); })
      .def_static("from_json", [](const std::string& text) { return archive_from_string(text).family; });

  m.def("bspline_basis", [](const std::vector<double>& xi, int k, bool normalize) {
    return bspline_basis(knots_from(xi), k, normalize);
  }, py::arg("knots"), py::arg("k"), py::arg("normalize") = false);
  m.def("equidistant", [](double a, double b, int n) {
    const KnotSet kn = KnotSet::equidistant(a, b, n);
    return std::vector<double>(kn.values().begin(), kn.values().end());
  }, py::arg("a"), py::arg("b"), py::arg("n"));
  m.def("splinet", [](const std::vector<double>& xi, int k, const std::string& type, bool normalize) {
    SplinetOptions o;
    o.normalize = normalize;
    return splinet_dict(splinet(knots_from(xi), k, basis_type_from_string(type), o));
  }, py::arg("knots"), py::arg("k"), py::arg("type") = "spnt", py::arg("normalize") = false);

  m.def("gramian", [](const SplineFamily& a, const std::optional<SplineFamily>& b) {
    return b ? gramian(a, *b).entries : gramian(a).entries;
  }, py::arg("a"), py::arg("b") = std::nullopt);
  m.def("is_valid", [](const SplineFamily& f) { return is_valid_spline(f).all_valid(); });
  m.def("lincomb", &lincomb, py::arg("family"), py::arg("p"));
  m.def("deriva", &deriva);
  m.def("integra", &integra);
  m.def("dintegra", &dintegra);

  m.def("rspline", [](const SplineFamily& mean, int count, const std::string& method, std::uint64_t seed, double sigma,
                      double theta) {
    NoiseSpec noise;
    noise.sigma = Covariance::identity(sigma);
    noise.theta = Covariance::identity(theta);
    noise.seed = seed;
    return rspline(mean, noise, count, method_from_string(method));
  }, py::arg("mean"), py::arg("count"), py::arg("method") = "rrm", py::arg("seed") = 0, py::arg("sigma") = 1.0,
        py::arg("theta") = 1.0);

  m.def("project_splines", [](const SplineFamily& f, const std::optional<std::vector<double>>& xi, const std::string& type) {
    std::optional<KnotSet> target;
    if (xi) target = knots_from(*xi);
    return projection_dict(project_splines(f, target, basis_type_from_string(type)));
  }, py::arg("family"), py::arg("knots") = std::nullopt, py::arg("type") = "spnt");
  m.def("project_data", [](const std::vector<double>& args, const Matrix& values, const std::vector<double>& xi, int k,
                           const std::string& type) {
    return projection_dict(project_data({args, values}, knots_from(xi), k, basis_type_from_string(type)));
  }, py::arg("args"), py::arg("values"), py::arg("knots"), py::arg("k"), py::arg("type") = "spnt");

  m.def("fpca", [](const Matrix& coeff, const SplineFamily& basis) {
    const FpcaResult r = fpca({coeff, basis, lincomb(basis, coeff), std::nullopt, {}});
    py::dict d;
    d["mean_coeff"] = r.mean_coeff;
    d["eigenvalues"] = r.eigenvalues;
    d["eigenvectors"] = r.eigenvectors;
    d["eigenfunctions"] = r.eigenfunctions;
    d["mean"] = r.mean;
    d["scores"] = r.scores;
    d["retained"] = r.retained;
    return d;
  }, py::arg("coeff"), py::arg("basis"));
}
