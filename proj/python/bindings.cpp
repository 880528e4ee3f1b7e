#include "pwave/pipeline.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pwave;

namespace {

std::string dump(const Json& j) { return j.dump(); }

BrinkmannPoint point_from(const Vec& c) { return BrinkmannPoint::from_coords(c); }

std::vector<BrinkmannPoint> points_from(const std::vector<Vec>& cs) {
  std::vector<BrinkmannPoint> out;
  for (const auto& c : cs) out.push_back(point_from(c));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Plane-wave conformal geometry core";
  m.attr("__version__") = kToolVersion;

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<HeisElement>(m, "HeisElement")
      .def(py::init([](const Vec& a, const Vec& b, double z) { return HeisElement{a, b, z}; }),
           py::arg("alpha"), py::arg("beta"), py::arg("z"))
      .def_readwrite("alpha", &HeisElement::alpha)
      .def_readwrite("beta", &HeisElement::beta)
      .def_readwrite("z", &HeisElement::z)
      .def_static("identity", &HeisElement::identity)
      .def_static("center", &HeisElement::center)
      .def("coords", &HeisElement::coords)
      .def("__mul__", &heis_mul)
      .def("inverse", &heis_inv)
      .def("log", [](const HeisElement& h) { return heis_log(h).coords(); })
      .def("__repr__", [](const HeisElement& h) { return "HeisElement(" + to_json(h).dump() + ")"; });

  m.def("heis_exp", [](const Vec& c) { return heis_exp(HeisAlgebraElement::from_coords(c)); });

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_static("cahen_wallach",
                  [](const Mat& b, std::optional<Mat> f, std::vector<Mat> k) {
                    return ModelSpec::cahen_wallach(b, f.value_or(Mat()), std::move(k));
                  },
                  py::arg("B"), py::arg("F") = py::none(), py::arg("K") = std::vector<Mat>{})
      .def_static("sampled",
                  [](const std::vector<double>& us, const std::vector<Mat>& ss,
                     std::optional<Mat> f) {
                    if (us.size() != ss.size())
                      throw DimensionError("sampled: u and S lists differ in length");
                    std::vector<ProfileNode> nodes;
                    for (std::size_t i = 0; i < us.size(); ++i) nodes.push_back({us[i], ss[i]});
                    return ModelSpec::from_profile(Profile::sampled(nodes), f.value_or(Mat()));
                  },
                  py::arg("u"), py::arg("S"), py::arg("F") = py::none())
      .def_property_readonly("n", &ModelSpec::n)
      .def_property_readonly("dim", &ModelSpec::dim)
      .def_property_readonly("B", &ModelSpec::B)
      .def_property_readonly("L", [](const ModelSpec& s) { return s.L()->matrix(); })
      .def("profile_at", [](const ModelSpec& s, double u) { return s.profile().at(u); })
      .def("metric_at", [](const ModelSpec& s, const Vec& c) { return metric_at(s, point_from(c)).g; })
      .def("sample_points",
           [](const ModelSpec& s, int count, std::uint64_t seed) {
             std::vector<Vec> out;
             for (const auto& p : sample_points(s, count, seed)) out.push_back(p.coords());
             return out;
           },
           py::arg("count") = 32, py::arg("seed") = 0);

  m.def("l_eigenvalues", [](const ModelSpec& s) { return sorted_eigenvalues(s.L()->matrix()); });
  m.def("spectral_type", [](const ModelSpec& s) { return dump(to_json(spectral_type(*s.L()))); });

  m.def("conformal_flatness",
        [](const ModelSpec& s, const std::vector<Vec>& pts, double tol, double step) {
          return dump(to_json(conformal_flatness(s, points_from(pts), tol, {step, true})));
        },
        py::arg("spec"), py::arg("points"), py::arg("tol") = 1e-7, py::arg("fd_step") = 1e-2);

  py::class_<ChartMap>(m, "ChartMap")
      .def_property_readonly("name", &ChartMap::name)
      .def("__call__", &ChartMap::apply)
      .def("jacobian", &ChartMap::jacobian)
      .def("__matmul__", [](const ChartMap& a, const ChartMap& b) { return compose(a, b); });

  m.def("realize_heis", &realize_heis);
  m.def("realize_conf_flow", &realize_conf_flow);
  m.def("realize_translation_flow", &realize_translation_flow);
  m.def("realize_flip", &realize_flip);
  m.def("realize_K", &realize_K);
  m.def("similarity_factor",
        [](const ModelSpec& s, const ChartMap& phi, const std::vector<Vec>& pts, double tol) {
          return dump(to_json(similarity_factor(s, phi, points_from(pts), tol)));
        },
        py::arg("spec"), py::arg("phi"), py::arg("points"), py::arg("tol") = 1e-8);

  m.def("lattice_preservation",
        [](const Mat& a, double tol) { return dump(to_json(lattice_preservation(a, tol))); },
        py::arg("A"), py::arg("tol") = 1e-6);
  m.def("characteristic_polynomial", &characteristic_polynomial);

  m.def("build_example",
        [](const std::string& name, bool adjusted, double b) {
          const auto ex = build_example(name, {adjusted, b});
          Json j = {{"name", ex.name},
                    {"L_eigenvalues", to_json(ex.l_eigenvalues)},
                    {"restriction", to_json(ex.restriction)},
                    {"lattice", to_json(ex.lattice)},
                    {"diagnostics", ex.diagnostics},
                    {"has_gamma", ex.gamma.has_value()}};
          if (ex.gamma) {
            const auto pr = properness_check(ex.spec, ex.n_basis, ex.gamma->gamma_hat);
            j["properness"] = to_json(pr);
            j["spec"] = spec_to_json(spec_from_gamma(*ex.gamma));
          }
          return dump(j);
        },
        py::arg("name"), py::arg("adjusted") = false, py::arg("b") = 1.0);

  m.def("gauge_value",
        [](double b, double alpha, const std::string& variant, double epsilon,
           const std::vector<double>& us) {
          GaugeSpec g;
          g.b = b;
          g.alpha = alpha;
          g.epsilon = epsilon;
          if (variant == "bump") g.variant = GaugeVariant::bump;
          else if (variant != "linear") throw PreconditionError("variant must be linear or bump");
          const auto f = build_gauge(g);
          std::vector<double> out;
          for (double u : us) out.push_back(f(u));
          return out;
        },
        py::arg("b"), py::arg("alpha"), py::arg("variant") = "linear", py::arg("epsilon") = 0.25,
        py::arg("u"));

  m.def("validate_spec", [](const std::string& text) { return dump(spec_to_json(parse_spec(text))); });
  m.def("run_example",
        [](const std::string& name, bool adjusted, double b, int samples, std::uint64_t seed) {
          CheckSettings c;
          c.samples = samples;
          c.seed = seed;
          const auto r = run_example(name, {adjusted, b}, c);
          return py::make_tuple(dump(r.report), r.pass);
        },
        py::arg("name"), py::arg("adjusted") = false, py::arg("b") = 1.0, py::arg("samples") = 32,
        py::arg("seed") = 0);
}
