// Python module: states and elements cross the boundary as complex numpy vectors.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qperm/experiments.hpp"
#include "qperm/sampling.hpp"

namespace py = pybind11;
using namespace qperm;

namespace {

State as_state(const CompactQuantumGroup& g, const Vec& duals) {
  if (duals.size() != g.dim())
    throw py::value_error("expected a vector of length " + std::to_string(g.dim()));
  return State(LinearFunctional(g.algebra(), duals));
}

LinearFunctional as_functional(const CompactQuantumGroup& g, const Vec& duals) {
  if (duals.size() != g.dim())
    throw py::value_error("expected a vector of length " + std::to_string(g.dim()));
  return LinearFunctional(g.algebra(), duals);
}

py::object from_json(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

nlohmann::json to_json_doc(const py::object& obj) {
  const std::string text = py::str(py::module_::import("json").attr("dumps")(obj));
  return nlohmann::json::parse(text);
}

const char* kind_name(IdempotentKind k) { return k == IdempotentKind::Haar ? "Haar" : "NonHaar"; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite quantum permutation groups: convolution, idempotents, classical versions";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InvalidModel>(m, "InvalidModel", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_ArithmeticError);

  py::class_<CompactQuantumGroup>(m, "Group")
      .def_property_readonly("name", &CompactQuantumGroup::name)
      .def_property_readonly("dim", &CompactQuantumGroup::dim)
      .def_property_readonly("N", &CompactQuantumGroup::N)
      .def_property_readonly("labels",
                             [](const CompactQuantumGroup& g) { return g.algebra()->labels(); })
      .def("haar", [](const CompactQuantumGroup& g) -> Vec { return g.haar().duals(); })
      .def("counit", [](const CompactQuantumGroup& g) -> Vec { return g.counit().duals(); })
      .def("unit", [](const CompactQuantumGroup& g) -> Vec { return g.algebra()->unit(); })
      .def("u", [](const CompactQuantumGroup& g, int i, int j) -> Vec {
        if (i < 0 || j < 0 || i >= g.N() || j >= g.N()) throw py::index_error("magic index");
        return g.u(i, j).coeffs();
      }, py::arg("i"), py::arg("j"), "Coefficients of the magic entry u_ij (zero-based).")
      .def("evaluate", [](const CompactQuantumGroup& g, const Vec& phi, const Vec& a) {
        return as_functional(g, phi)(AlgebraElement(g.algebra(), a));
      }, py::arg("phi"), py::arg("a"))
      .def("multiply", [](const CompactQuantumGroup& g, const Vec& a, const Vec& b) -> Vec {
        return g.algebra()->mul(a, b);
      })
      .def("adjoint", [](const CompactQuantumGroup& g, const Vec& a) -> Vec {
        return g.algebra()->star(a);
      })
      .def("__repr__", [](const CompactQuantumGroup& g) {
        return "<qperm.Group '" + g.name() + "' dim=" + std::to_string(g.dim()) +
               " N=" + std::to_string(g.N()) + ">";
      });

  m.def("builtin", &builtin_group, py::arg("name"), "Builtin group such as 's4', 'kp', 'dual-s4'.");
  m.def("builtin_names", &builtin_examples);
  m.def("load", &load_group, py::arg("ref"), "Builtin name or path to a JSON group definition.");
  m.def("from_json", [](const py::object& doc) { return group_from_json(to_json_doc(doc)); },
        py::arg("doc"));

  m.def("validate", [](const CompactQuantumGroup& g) {
    py::list out;
    for (const auto& c : validate(g).checks) {
      py::dict d;
      d["name"] = c.name;
      d["residual"] = c.residual;
      d["tolerance"] = c.tolerance;
      d["passed"] = c.passed;
      out.append(d);
    }
    return out;
  });

  m.def("convolve", [](const CompactQuantumGroup& g, const Vec& phi, const Vec& rho) -> Vec {
    return convolve(g, as_functional(g, phi), as_functional(g, rho)).duals();
  }, py::arg("group"), py::arg("phi"), py::arg("rho"));
  m.def("reverse", [](const CompactQuantumGroup& g, const Vec& phi) -> Vec {
    return reverse(g, as_state(g, phi)).duals();
  });
  m.def("random_state", [](const CompactQuantumGroup& g, std::uint64_t seed, std::uint64_t stream) -> Vec {
    Rng rng(seed, stream);
    return random_state(g.algebra(), rng).duals();
  }, py::arg("group"), py::arg("seed"), py::arg("stream") = 0);
  m.def("condition", [](const CompactQuantumGroup& g, const Vec& phi, const Vec& q) -> Vec {
    return condition(as_state(g, phi), AlgebraElement(g.algebra(), q)).duals();
  }, py::arg("group"), py::arg("phi"), py::arg("q"));

  m.def("cesaro", [](const CompactQuantumGroup& g, const Vec& seed, double tol) {
    const CesaroResult r = cesaro_idempotent(g, as_state(g, seed), kDefaultCesaroTerms, tol);
    py::dict d;
    d["limit"] = Vec(r.limit.duals());
    d["iterations"] = r.iterations;
    d["residual"] = r.residual;
    d["converged"] = r.converged;
    return d;
  }, py::arg("group"), py::arg("seed"), py::arg("tol") = -1.0);
  m.def("is_idempotent", [](const CompactQuantumGroup& g, const Vec& phi, double tol) {
    return is_idempotent(g, as_functional(g, phi), tol);
  }, py::arg("group"), py::arg("phi"), py::arg("tol") = -1.0);
  m.def("classify", [](const CompactQuantumGroup& g, const Vec& phi) {
    const IdempotentClass c = classify_idempotent(g, as_state(g, phi));
    py::dict d;
    d["kind"] = kind_name(c.kind);
    d["null_space_dim"] = c.null_space_dim;
    d["witnesses"] = c.witnesses;
    return d;
  });
  m.def("subgroup_idempotent", [](const CompactQuantumGroup& g, const std::vector<int>& sub) -> Vec {
    return dual_subgroup_idempotent(g, sub).duals();
  }, py::arg("group"), py::arg("subgroup"));
  m.def("is_group_like", [](const CompactQuantumGroup& g, const Vec& p) {
    return is_group_like(g, Projection(AlgebraElement(g.algebra(), p)));
  });

  py::class_<ClassicalVersion>(m, "ClassicalVersion")
      .def_property_readonly("permutations", [](const ClassicalVersion& cv) {
        return cv.permutations;
      })
      .def_property_readonly("p_C", [](const ClassicalVersion& cv) -> Vec { return cv.p_C.coeffs(); })
      .def_property_readonly("p_Q", [](const ClassicalVersion& cv) -> Vec { return cv.p_Q.coeffs(); })
      .def_property_readonly("order", [](const ClassicalVersion& cv) {
        return static_cast<int>(cv.permutations.size());
      });
  m.def("classical_version", &classical_version, py::arg("group"));
  m.def("quantum_fraction", [](const CompactQuantumGroup& g, const ClassicalVersion& cv, const Vec& phi) {
    return quantum_fraction(as_functional(g, phi), cv);
  }, py::arg("group"), py::arg("cv"), py::arg("phi"));
  m.def("birkhoff_slice", [](const CompactQuantumGroup& g, const Vec& phi) -> RealMat {
    return birkhoff_slice(g, as_functional(g, phi)).matrix;
  });

  m.def("fix_spectrum", [](const CompactQuantumGroup& g) { return fix_spectrum(g).eigenvalues; });
  m.def("fixed_point_distribution", [](const CompactQuantumGroup& g, const Vec& phi) {
    return fix_spectrum(g).distribution(as_functional(g, phi));
  });

  m.def("convolution_bounds", &convolution_bounds, py::arg("alpha"), py::arg("beta"));
  m.def("phase_region", [](double a, double b) {
    const RegionLabel l = phase_region(PhasePoint(a, b));
    py::dict d;
    d["region"] = region_name(l.region);
    d["q2i"] = l.q2i;
    d["q3i"] = l.q3i;
    d["qhalfw"] = l.qhalfw;
    d["q3i_out_of_domain"] = l.q3i_out_of_domain;
    return d;
  }, py::arg("alpha"), py::arg("beta"));
  m.def("detect_period", [](const CompactQuantumGroup& g, const Vec& seed, int k_max, double tol) {
    return detect_period(g, as_state(g, seed), k_max, tol);
  }, py::arg("group"), py::arg("seed"), py::arg("k_max") = 48, py::arg("tol") = 1e-9);

  m.def("experiment_names", &experiment_names);
  m.def("run_experiment", [](const py::object& spec, const std::string& base_dir) {
    const ExperimentResult r = run_experiment(parse_experiment_spec(to_json_doc(spec), base_dir));
    return from_json(r.document);
  }, py::arg("spec"), py::arg("base_dir") = ".",
     "Runs an experiment spec (dict) and returns its result document without writing files.");
  m.def("thread_count", &thread_count);
}
