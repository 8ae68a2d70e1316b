#include "utester/bounds.hpp"
#include "utester/cli.hpp"
#include "utester/json_io.hpp"
#include "utester/muub.hpp"
#include "utester/ppovm.hpp"
#include "utester/qkd.hpp"
#include "utester/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace utester;

namespace {

// JSON crosses the boundary as text; the Python side parses it.
py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_py(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

SearchConfig search_config(std::size_t starts, std::size_t iters, double tol, std::uint64_t seed) {
  SearchConfig cfg;
  cfg.starts = starts;
  cfg.max_iterations = iters;
  cfg.tolerance = tol;
  cfg.rng = RngHandle{seed, 0};
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_utester, m) {
  m.doc() = "Unitary testers, entropic bounds, MUUB checks and two-way QKD simulation";

  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", PyExc_ValueError);
  py::register_exception<LeakyMeasurement>(m, "LeakyMeasurement", PyExc_RuntimeError);
  py::register_exception<HypothesisViolated>(m, "HypothesisViolated", PyExc_RuntimeError);

  py::enum_<TesterKind>(m, "TesterKind")
      .value("ANCILLA_FREE", TesterKind::AncillaFree)
      .value("BIPARTITE", TesterKind::Bipartite);

  py::class_<Tester>(m, "Tester")
      .def(py::init([](const ComplexVector& input, const std::vector<ComplexVector>& projectors, std::size_t d,
                       std::string label) {
             std::vector<PureState> ps;
             for (const auto& p : projectors) ps.emplace_back(p);
             return Tester(PureState(input), std::move(ps), d, std::move(label));
           }),
           py::arg("input"), py::arg("projectors"), py::arg("d"), py::arg("label") = "")
      .def_property_readonly("input", [](const Tester& t) { return t.input().amplitudes(); })
      .def_property_readonly("projectors",
                             [](const Tester& t) {
                               std::vector<ComplexVector> out;
                               for (const auto& p : t.projectors()) out.push_back(p.amplitudes());
                               return out;
                             })
      .def_property_readonly("d", &Tester::dim)
      .def_property_readonly("label", &Tester::label)
      .def_property_readonly("kind", &Tester::kind)
      .def("distribution",
           [](const Tester& t, const ComplexMatrix& u) { return outcome_distribution(t, Unitary(u)).p; })
      .def("entropy", [](const Tester& t, const ComplexMatrix& u) { return tester_entropy(t, Unitary(u)); })
      .def("elements", [](const Tester& t) { return tester_elements(t).elements; })
      .def("__repr__", [](const Tester& t) { return "<Tester " + t.label() + ">"; });

  m.def("named_tester", &named_tester, py::arg("name"), py::arg("d") = 2);
  m.def("named_testers", &named_tester_list);

  m.def(
      "entropy_sum",
      [](const Tester& a, const Tester& b, const ComplexMatrix& u) { return entropy_sum(a, b, Unitary(u)); },
      py::arg("t1"), py::arg("t2"), py::arg("u"));
  m.def(
      "estimate_bound",
      [](const Tester& a, const Tester& b, std::size_t starts, std::size_t iters, double tol, std::uint64_t seed) {
        return to_py(bound_to_json(estimate_bound(a, b, search_config(starts, iters, tol, seed))));
      },
      py::arg("t1"), py::arg("t2"), py::arg("starts") = 16, py::arg("iters") = 2000, py::arg("tol") = 1e-10,
      py::arg("seed") = 0, "Best entropy sum found; returns the same dict as the CLI payload.");

  m.def(
      "choi_operator", [](const ComplexMatrix& u) { return choi_operator(Unitary(u)).matrix; }, py::arg("u"));
  m.def(
      "probability_via_choi",
      [](const Tester& t, const ComplexMatrix& u) {
        return probability_via_choi(tester_elements(t), choi_operator(Unitary(u))).p;
      },
      py::arg("tester"), py::arg("u"));

  m.def(
      "haar_random_unitary",
      [](std::size_t d, std::uint64_t seed, std::uint64_t stream) {
        return haar_random_unitary(d, RngHandle{seed, stream}).matrix();
      },
      py::arg("d"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def(
      "partial_trace",
      [](const ComplexMatrix& mat, const std::vector<std::size_t>& dims, std::size_t factor) {
        return partial_trace(mat, dims, factor);
      },
      py::arg("m"), py::arg("dims"), py::arg("factor"));

  m.def(
      "basis",
      [](const std::string& name, std::size_t d) {
        std::vector<ComplexMatrix> out;
        for (const auto& u : build_named_basis(name, d).elements) out.push_back(u.matrix());
        return out;
      },
      py::arg("name"), py::arg("d") = 2);
  m.def("basis_names", &named_basis_list);
  m.def(
      "muub_check",
      [](const std::string& a, const std::string& b, std::size_t d, double tol) {
        return to_py(muub_report_to_json(are_muub(load_basis(a, d), load_basis(b, d), tol)));
      },
      py::arg("a"), py::arg("b"), py::arg("d") = 2, py::arg("tol") = kKappaTol);

  m.def(
      "run_protocol",
      [](const py::object& config) {
        return to_py(protocol_stats_to_json(run_protocol(protocol_config_from_json(from_py(config)))));
      },
      py::arg("config"), "Run a protocol from a config dict (same schema as `qkd --config`).");
  m.def("analytic_eve_accuracy", &analytic_eve_accuracy, py::arg("D"));

  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed) { return to_py(run_suite(suite, seed).to_json()); },
      py::arg("suite"), py::arg("seed") = 0);

  m.def(
      "run_command",
      [](const std::vector<std::string>& argv) {
        std::ostringstream log;
        const auto r = run_command(argv, log);
        return py::make_tuple(r.exit_code, r.report.command.empty() ? py::none() : to_py(r.report.to_json()),
                              r.message);
      },
      py::arg("argv"), "Run a CLI invocation; returns (exit_code, report or None, message).");
}
